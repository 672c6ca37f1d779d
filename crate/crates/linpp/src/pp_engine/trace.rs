//! The trace specialization g = (xⁿ−1)/(x−1): criteria, complete
//! permutations, and explicit inverses with separate branches for p | n and
//! p ∤ n.

use std::sync::Arc;

use crate::cyclo_factor;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::linearized::lin_eval;
use crate::polyring::{self, Poly};

use super::{injective_on, Verdict, Witness};

/// Coefficient-wise trace: Σ Tr(aᵢ)·xⁱ, a polynomial over F_q.
pub fn t_n(tower: &FieldTower, f: &Poly) -> Result<Poly> {
    let f = polyring::embed(tower, f, Level::Fqn)?;
    let coeffs = f
        .coeffs()
        .iter()
        .map(|a| tower.trace_qn_q(a))
        .collect::<Result<Vec<_>>>()?;
    Poly::new(Level::Fq, coeffs)
}

/// Validates that k maps the embedded F_q into F_q^*, returning the values
/// k(t) at level Fq indexed by t's canonical index.
fn k_values_on_fq(tower: &FieldTower, k: &Poly) -> Result<Vec<Elem>> {
    let mut out = Vec::with_capacity(tower.q() as usize);
    for t in tower.enumerate(Level::Fq)? {
        let v = polyring::eval(tower, k, &t)?;
        if v.is_zero() || !tower.is_in_fq(&v) {
            return Err(Error::KNotUnitValued);
        }
        out.push(tower.project_to_fq(&v)?);
    }
    Ok(out)
}

/// The reduced base-field map Q(t) = T_n[f](t) + k(t)·h(1)·t for t ∈ F_q.
fn q_map(
    tower: &FieldTower,
    tnf: &Poly,
    h1: &Elem,
    kvals: &[Elem],
    t: &Elem,
) -> Result<Elem> {
    let base = polyring::eval(tower, tnf, t)?;
    let kv = &kvals[tower.elem_index(t) as usize];
    let term = tower.mul(&tower.mul(kv, h1)?, t)?;
    tower.add(&base, &term)
}

/// Trace-case criterion: P(x) = f(Tr(x)) + k(Tr(x))·L_h(x) is a PP of
/// F_{q^n} iff gcd(h, (xⁿ−1)/(x−1)) = 1 and Q(x) = T_n[f](x) + k(x)·h(1)·x
/// is a PP of F_q (checked exhaustively).
pub fn check_pp_trace(tower: &FieldTower, f: &Poly, h: &Poly, k: &Poly) -> Result<Verdict> {
    let kvals = k_values_on_fq(tower, k)?;
    let g = cyclo_factor::trace_divisor(tower)?;
    let d = polyring::gcd(tower, h, &g)?;
    if d.degree() != Some(0) {
        return Ok(Verdict::fail(Witness::GcdNotOne { gcd: d }));
    }
    let tnf = t_n(tower, f)?;
    let h1 = polyring::eval(tower, h, &tower.one(Level::Fq))?;
    let domain: Vec<Elem> = tower.enumerate(Level::Fq)?.collect();
    let outcome = injective_on(tower, &domain, |t| q_map(tower, &tnf, &h1, &kvals, t))?;
    Ok(match outcome {
        Ok(()) => Verdict::pass(),
        Err((first, second)) => Verdict::fail(Witness::NotInjective { first, second }),
    })
}

/// Which inverse branch applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseCase {
    PDividesN,
    PCoprimeN,
}

impl InverseCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            InverseCase::PDividesN => "p_divides_n",
            InverseCase::PCoprimeN => "p_coprime_n",
        }
    }

    pub fn from_str(s: &str) -> Result<InverseCase> {
        match s {
            "p_divides_n" => Ok(InverseCase::PDividesN),
            "p_coprime_n" => Ok(InverseCase::PCoprimeN),
            other => Err(Error::InvalidInput(format!("unknown case {other:?}"))),
        }
    }
}

/// The inverse permutation P₀(x) = F(δ⁻¹L_g(x)) + k(δR(δ⁻¹L_g(x)))^(q−2)·L_H(x),
/// where g = (xⁿ−1)/(x−a). The trace case is a = δ = 1.
///
/// `correction` is F, `h_inverse` is H (the modular inverse of h),
/// `base_inverse` is R (the interpolated inverse of the reduced base map).
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSpec {
    tower: Arc<FieldTower>,
    correction: Poly,
    h_inverse: Poly,
    base_inverse: Poly,
    k: Poly,
    case: InverseCase,
    a: Elem,
    delta: Elem,
    /// The divisor (xⁿ−1)/(x−a); derived from `a`, cached for evaluation.
    divisor: Poly,
}

impl InverseSpec {
    pub fn assemble(
        tower: Arc<FieldTower>,
        correction: Poly,
        h_inverse: Poly,
        base_inverse: Poly,
        k: Poly,
        case: InverseCase,
        a: Elem,
        delta: Elem,
    ) -> Result<InverseSpec> {
        let a = tower.project_to_fq(&a)?;
        let divisor = cyclo_factor::variant_divisor(&tower, &a)?;
        Ok(InverseSpec {
            tower,
            correction,
            h_inverse,
            base_inverse,
            k,
            case,
            a,
            delta,
            divisor,
        })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn correction(&self) -> &Poly {
        &self.correction
    }
    pub fn h_inverse(&self) -> &Poly {
        &self.h_inverse
    }
    pub fn base_inverse(&self) -> &Poly {
        &self.base_inverse
    }
    pub fn k(&self) -> &Poly {
        &self.k
    }
    pub fn case(&self) -> InverseCase {
        self.case
    }
    pub fn a(&self) -> &Elem {
        &self.a
    }
    pub fn delta(&self) -> &Elem {
        &self.delta
    }

    pub fn evaluate(&self, c: &Elem) -> Result<Elem> {
        evaluate_inverse(self, c)
    }
}

/// P₀(c) for an assembled inverse.
pub fn evaluate_inverse(inv: &InverseSpec, c: &Elem) -> Result<Elem> {
    let tw = &*inv.tower;
    let delta_up = tw.embed(&inv.delta, Level::Fqn)?;
    let delta_inv = tw.inv(&delta_up)?;
    // u = δ⁻¹·L_g(c) lies in F_q.
    let u = tw.mul(&delta_inv, &lin_eval(tw, &inv.divisor, c)?)?;
    let u_fq = tw.project_to_fq(&u)?;
    let f_val = polyring::eval(tw, &inv.correction, &u_fq)?;
    let s = tw.project_to_fq(&polyring::eval(tw, &inv.base_inverse, &u_fq)?)?;
    let arg = tw.mul(&delta_up, &tw.embed(&s, Level::Fqn)?)?;
    let k_val = tw.project_to_fq(&polyring::eval(tw, &inv.k, &arg)?)?;
    let k_pow = tw.embed(&tw.pow(&k_val, (tw.q() - 2) as u128)?, Level::Fqn)?;
    let lh = lin_eval(tw, &inv.h_inverse, c)?;
    tw.add(&f_val, &tw.mul(&k_pow, &lh)?)
}

/// Interpolated polynomial of degree < q over F_{q^n} agreeing with `value`
/// on every t ∈ F_q. This is exactly the reduction of the defining
/// congruence mod x^q−x, since x^q−x splits into distinct linear factors
/// over F_q.
fn interpolate_on_fq(
    tower: &FieldTower,
    value: impl Fn(&Elem) -> Result<Elem>,
) -> Result<Poly> {
    let mut pts = Vec::with_capacity(tower.q() as usize);
    for t in tower.enumerate(Level::Fq)? {
        let v = value(&t)?;
        pts.push((tower.embed(&t, Level::Fqn)?, tower.embed(&v, Level::Fqn)?));
    }
    polyring::interpolate(tower, &pts)
}

/// Inverse of the trace-case PP. `R` is the interpolated inverse of the
/// reduced base map Q; `H` inverts h mod xⁿ−1 (p | n) or mod (xⁿ−1)/(x−1)
/// (p ∤ n); the correction F satisfies the matching congruence mod x^q−x.
pub fn invert_trace_pp(tower: &Arc<FieldTower>, f: &Poly, h: &Poly, k: &Poly) -> Result<InverseSpec> {
    if !check_pp_trace(tower, f, h, k)?.is_pp {
        return Err(Error::NotAPermutation);
    }
    let f = polyring::embed(tower, f, Level::Fqn)?;
    let kvals = k_values_on_fq(tower, k)?;
    let tnf = t_n(tower, &f)?;
    let h1 = polyring::eval(tower, h, &tower.one(Level::Fq))?;

    // R: inverse of Q over F_q, by interpolation through (Q(t), t).
    let mut pts = Vec::with_capacity(tower.q() as usize);
    for t in tower.enumerate(Level::Fq)? {
        pts.push((q_map(tower, &tnf, &h1, &kvals, &t)?, t));
    }
    let base_inverse = polyring::interpolate(tower, &pts)?;

    let q = tower.q();
    let eval_r = |t: &Elem| -> Result<Elem> {
        tower.project_to_fq(&polyring::eval(tower, &base_inverse, t)?)
    };
    let k_at = |s: &Elem| -> Result<Elem> {
        Ok(kvals[tower.elem_index(s) as usize].clone())
    };
    // Shared term: -k(s)^(q-2) · L_H(f(s)) for s ∈ F_q.
    let neg_k_lh_f = |h_inv: &Poly, s: &Elem| -> Result<Elem> {
        let kp = tower.pow(&k_at(s)?, (q - 2) as u128)?;
        let fs = polyring::eval(tower, &f, s)?;
        let lhf = lin_eval(tower, h_inv, &fs)?;
        Ok(tower.neg(&tower.mul(&tower.embed(&kp, Level::Fqn)?, &lhf)?))
    };

    let p_divides_n = tower.n() as u64 % tower.p() == 0;
    let (case, h_inverse, correction);
    if p_divides_n {
        let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
        let h_inv = polyring::mod_inverse(tower, h, &xn1)?;
        let corr = interpolate_on_fq(tower, |t| {
            let s = eval_r(t)?;
            neg_k_lh_f(&h_inv, &s)
        })?;
        case = InverseCase::PDividesN;
        h_inverse = h_inv;
        correction = corr;
    } else {
        let g = cyclo_factor::trace_divisor(tower)?;
        let h_inv = polyring::mod_inverse(tower, h, &g)?;
        // (1 - h(1)·H(1)) / n in F_q.
        let cap_h1 = polyring::eval(tower, &h_inv, &tower.one(Level::Fq))?;
        let n_inv = tower.inv(&tower.from_int(Level::Fq, tower.n() as u64))?;
        let num = tower.sub(&tower.one(Level::Fq), &tower.mul(&h1, &cap_h1)?)?;
        let slope = tower.mul(&num, &n_inv)?;
        let corr = interpolate_on_fq(tower, |t| {
            let s = eval_r(t)?;
            let lead = neg_k_lh_f(&h_inv, &s)?;
            let lin = tower.mul(&slope, &s)?;
            tower.add(&lead, &tower.embed(&lin, Level::Fqn)?)
        })?;
        case = InverseCase::PCoprimeN;
        h_inverse = h_inv;
        correction = corr;
    }
    InverseSpec::assemble(
        Arc::clone(tower),
        correction,
        h_inverse,
        base_inverse,
        k.clone(),
        case,
        tower.one(Level::Fq),
        tower.one(Level::Fqn),
    )
}

/// Exhaustive permutation check of a base-field map.
pub(crate) fn permutes_fq(
    tower: &FieldTower,
    map: impl Fn(&Elem) -> Result<Elem>,
) -> Result<bool> {
    let mut seen = vec![false; tower.q() as usize];
    for t in tower.enumerate(Level::Fq)? {
        let v = map(&t)?;
        let idx = tower.elem_index(&v) as usize;
        if seen[idx] {
            return Ok(false);
        }
        seen[idx] = true;
    }
    Ok(true)
}

/// The base-field sub-cases when f, h, k all lie over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cor1Case {
    /// p | n and gcd(h, xⁿ−1) = 1: PP iff k(x)·x permutes F_q.
    PDividesN,
    /// p ∤ n and gcd(h, xⁿ−1) = x−1: PP iff f permutes F_q.
    GcdIsXMinus1,
    /// p ∤ n and gcd(h, xⁿ−1) = 1: PP iff n·f(x) + h(1)·k(x)·x permutes F_q.
    GcdIsOne,
}

/// Classifies the all-base-field situation and returns the verdict; agrees
/// with `check_pp_trace` on the embedded data whenever a case applies, and
/// no case applying means P is not a PP.
pub fn classify_cor1(
    tower: &FieldTower,
    f: &Poly,
    h: &Poly,
    k: &Poly,
) -> Result<(Option<Cor1Case>, bool)> {
    if f.level() != Level::Fq || h.level() != Level::Fq || k.level() != Level::Fq {
        return Err(Error::LevelMismatch);
    }
    let kvals = k_values_on_fq(tower, k)?;
    let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
    let d = polyring::gcd(tower, h, &xn1)?;
    let one = Poly::one(tower, Level::Fq);
    let x_minus_1 = polyring::monic(
        tower,
        &Poly::new(
            Level::Fq,
            vec![tower.neg(&tower.one(Level::Fq)), tower.one(Level::Fq)],
        )?,
    );
    let p_divides_n = tower.n() as u64 % tower.p() == 0;
    if p_divides_n {
        if d == one {
            let ok = permutes_fq(tower, |t| {
                tower.mul(&kvals[tower.elem_index(t) as usize], t)
            })?;
            return Ok((Some(Cor1Case::PDividesN), ok));
        }
        return Ok((None, false));
    }
    if d == x_minus_1 {
        let ok = permutes_fq(tower, |t| polyring::eval(tower, f, t))?;
        return Ok((Some(Cor1Case::GcdIsXMinus1), ok));
    }
    if d == one {
        let n_elem = tower.from_int(Level::Fq, tower.n() as u64);
        let h1 = polyring::eval(tower, h, &tower.one(Level::Fq))?;
        let ok = permutes_fq(tower, |t| {
            let nf = tower.mul(&n_elem, &polyring::eval(tower, f, t)?)?;
            let kv = &kvals[tower.elem_index(t) as usize];
            let lin = tower.mul(&tower.mul(&h1, kv)?, t)?;
            tower.add(&nf, &lin)
        })?;
        return Ok((Some(Cor1Case::GcdIsOne), ok));
    }
    Ok((None, false))
}

/// Complete-permutation criterion for P(x) = f(Tr(x)) + L_h(x):
/// gcd(h·(h+1), (xⁿ−1)/(x−1)) = 1 and Q(x) = T_n[f](x) + h(1)·x a CPP of F_q.
pub fn check_cpp_trace(tower: &FieldTower, f: &Poly, h: &Poly) -> Result<bool> {
    let g = cyclo_factor::trace_divisor(tower)?;
    let h_plus_1 = polyring::add(tower, h, &Poly::one(tower, Level::Fq))?;
    let prod = polyring::mul(tower, h, &h_plus_1)?;
    let d = polyring::gcd(tower, &prod, &g)?;
    if d.degree() != Some(0) {
        return Ok(false);
    }
    let tnf = t_n(tower, f)?;
    let h1 = polyring::eval(tower, h, &tower.one(Level::Fq))?;
    let q_at = |t: &Elem| -> Result<Elem> {
        let base = polyring::eval(tower, &tnf, t)?;
        tower.add(&base, &tower.mul(&h1, t)?)
    };
    let q_pp = permutes_fq(tower, &q_at)?;
    let q_plus_x_pp = permutes_fq(tower, |t| tower.add(&q_at(t)?, t))?;
    Ok(q_pp && q_plus_x_pp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::pp_engine::{trace_spec, PpSpec};

    #[test]
    fn t_n_examples() {
        // f with F_q coefficients → T_n[f] = n·f mod p.
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let f = Poly::from_indices(&tw, Level::Fq, &[1, 2, 1]).unwrap();
        let expected = polyring::scalar_mul(
            &tw,
            &tw.from_int(Level::Fq, tw.n() as u64),
            &f,
        )
        .unwrap();
        assert_eq!(t_n(&tw, &f).unwrap(), expected);

        // Constant θ^q − θ has trace zero.
        let theta = tw.elem_from_index(Level::Fqn, 5).unwrap();
        let c = tw
            .sub(&tw.pow(&theta, tw.q() as u128).unwrap(), &theta)
            .unwrap();
        let f = Poly::new(Level::Fqn, vec![c]).unwrap();
        assert!(t_n(&tw, &f).unwrap().is_zero());

        // q=2, n=2, f = t·X with t generating F_4: T[f] = X.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let t = tw.elem_from_index(Level::Fqn, 2).unwrap();
        let f = Poly::new(Level::Fqn, vec![tw.zero(Level::Fqn), t]).unwrap();
        assert_eq!(t_n(&tw, &f).unwrap(), Poly::x(&tw, Level::Fq));
    }

    #[test]
    fn trace_criterion_examples() {
        // f=0, h=1, k=1 → Q(x) = x → PP.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        assert!(
            check_pp_trace(&tw, &Poly::zero(Level::Fqn), &one, &one)
                .unwrap()
                .is_pp
        );
        // q=2, n=2, f=0, h=x, k=1 → P(c) = c^2 is a PP of F_4.
        let v = check_pp_trace(&tw, &Poly::zero(Level::Fqn), &Poly::x(&tw, Level::Fq), &one)
            .unwrap();
        assert!(v.is_pp);
        let spec = trace_spec(
            &tw,
            Poly::zero(Level::Fqn),
            Poly::x(&tw, Level::Fq),
            one.clone(),
        )
        .unwrap();
        assert!(oracle::is_permutation_spec(&spec).unwrap());
        // h = (x^n-1)/(x-1) itself → condition (1) fails.
        let g = cyclo_factor::trace_divisor(&tw).unwrap();
        let v = check_pp_trace(&tw, &Poly::zero(Level::Fqn), &g, &one).unwrap();
        assert!(!v.is_pp);
        assert!(matches!(v.witness, Witness::GcdNotOne { .. }));
    }

    #[test]
    fn trace_specialization_matches_general() {
        // For g = trace divisor the two criteria agree on random data.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, k, n) in [(2u64, 1u32, 2u32), (3, 1, 2), (2, 1, 3)] {
            let tw = FieldTower::build(p, k, n).unwrap();
            for _ in 0..40 {
                let f = random_poly(&tw, Level::Fqn, 3, &mut rng);
                let h = random_poly(&tw, Level::Fq, n as usize, &mut rng);
                let k_poly = loop {
                    let cand = random_poly(&tw, Level::Fq, 2, &mut rng);
                    if k_values_on_fq(&tw, &cand).is_ok() {
                        break cand;
                    }
                };
                let trace_v = check_pp_trace(&tw, &f, &h, &k_poly).unwrap().is_pp;
                let spec = trace_spec(&tw, f, h, k_poly).unwrap();
                let general_v = super::super::check_pp_general(&spec).unwrap().is_pp;
                assert_eq!(trace_v, general_v);
            }
        }
    }

    pub(crate) fn random_poly(
        tower: &FieldTower,
        level: Level,
        deg_bound: usize,
        rng: &mut impl rand::Rng,
    ) -> Poly {
        let size = tower.level_size(level);
        let coeffs: Vec<Elem> = (0..=deg_bound)
            .map(|_| {
                let idx = rng.gen_range(0..size);
                tower.elem_from_index(level, idx).unwrap()
            })
            .collect();
        Poly::new(level, coeffs).unwrap()
    }

    #[test]
    fn invert_identity_case() {
        // f=0, h=1, k=1 → P = id; the inverse is also the identity map.
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        let inv = invert_trace_pp(&tw, &Poly::zero(Level::Fqn), &one, &one).unwrap();
        for c in tw.enumerate(Level::Fqn).unwrap() {
            assert_eq!(evaluate_inverse(&inv, &c).unwrap(), c);
        }
    }

    #[test]
    fn invert_frobenius_p_divides_n() {
        // q=2, n=2, f=0, h=x, k=1: P(c) = c^2, an involution; H = x.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        let x = Poly::x(&tw, Level::Fq);
        let inv = invert_trace_pp(&tw, &Poly::zero(Level::Fqn), &x, &one).unwrap();
        assert_eq!(inv.case(), InverseCase::PDividesN);
        assert_eq!(inv.h_inverse(), &x);
        assert!(inv.correction().is_zero());
        let spec = trace_spec(&tw, Poly::zero(Level::Fqn), x, one).unwrap();
        assert!(oracle::verify_inverse(&spec, &inv).unwrap());
    }

    #[test]
    fn invert_p_coprime_n_case() {
        // q=3, n=2, f=0, h=x, k=1: case (ii); H = mod_inverse(x, x+1) = 2.
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        let x = Poly::x(&tw, Level::Fq);
        let inv = invert_trace_pp(&tw, &Poly::zero(Level::Fqn), &x, &one).unwrap();
        assert_eq!(inv.case(), InverseCase::PCoprimeN);
        assert_eq!(
            inv.h_inverse(),
            &Poly::from_indices(&tw, Level::Fq, &[2]).unwrap()
        );
        let spec = trace_spec(&tw, Poly::zero(Level::Fqn), x, one).unwrap();
        assert!(oracle::verify_inverse(&spec, &inv).unwrap());
    }

    #[test]
    fn invert_requires_pp() {
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let g = cyclo_factor::trace_divisor(&tw).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        assert!(matches!(
            invert_trace_pp(&tw, &Poly::zero(Level::Fqn), &g, &one),
            Err(Error::NotAPermutation)
        ));
    }

    #[test]
    fn inverse_roundtrip_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (p, k, n) in [(2u64, 1u32, 2u32), (3, 1, 2), (3, 1, 3)] {
            let tw = FieldTower::build(p, k, n).unwrap();
            let mut found = 0;
            while found < 5 {
                let f = random_poly(&tw, Level::Fqn, 3, &mut rng);
                let h = random_poly(&tw, Level::Fq, n as usize, &mut rng);
                let kp = loop {
                    let cand = random_poly(&tw, Level::Fq, 2, &mut rng);
                    if k_values_on_fq(&tw, &cand).is_ok() {
                        break cand;
                    }
                };
                if !check_pp_trace(&tw, &f, &h, &kp).unwrap().is_pp {
                    continue;
                }
                found += 1;
                let inv = invert_trace_pp(&tw, &f, &h, &kp).unwrap();
                let spec = trace_spec(&tw, f, h, kp).unwrap();
                assert!(oracle::verify_inverse(&spec, &inv).unwrap());
            }
        }
    }

    #[test]
    fn cor1_cases() {
        // p|n, h=1, k=1 → case (i): k(x)·x = x is a PP.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        let (case, ok) = classify_cor1(&tw, &Poly::zero(Level::Fq), &one, &one).unwrap();
        assert_eq!(case, Some(Cor1Case::PDividesN));
        assert!(ok);

        // q=3, n=2, h=x-1, f=x → case (ii), f a PP of F_3.
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let one3 = Poly::one(&tw, Level::Fq);
        let h = Poly::from_indices(&tw, Level::Fq, &[2, 1]).unwrap();
        let (case, ok) = classify_cor1(&tw, &Poly::x(&tw, Level::Fq), &h, &one3).unwrap();
        assert_eq!(case, Some(Cor1Case::GcdIsXMinus1));
        assert!(ok);

        // q=3, n=2, h=x, f=0, k=1 → case (iii): 2x is a PP of F_3.
        let (case, ok) =
            classify_cor1(&tw, &Poly::zero(Level::Fq), &Poly::x(&tw, Level::Fq), &one3).unwrap();
        assert_eq!(case, Some(Cor1Case::GcdIsOne));
        assert!(ok);
    }

    #[test]
    fn cor1_agrees_with_trace_criterion() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for (p, k, n) in [(2u64, 1u32, 2u32), (3, 1, 2), (5, 1, 2)] {
            let tw = FieldTower::build(p, k, n).unwrap();
            for _ in 0..60 {
                let f = random_poly(&tw, Level::Fq, 2, &mut rng);
                let h = random_poly(&tw, Level::Fq, n as usize, &mut rng);
                let kp = loop {
                    let cand = random_poly(&tw, Level::Fq, 2, &mut rng);
                    if k_values_on_fq(&tw, &cand).is_ok() {
                        break cand;
                    }
                };
                let (_case, cor1) = classify_cor1(&tw, &f, &h, &kp).unwrap();
                let trace = check_pp_trace(&tw, &f, &h, &kp).unwrap().is_pp;
                assert_eq!(cor1, trace);
            }
        }
    }

    #[test]
    fn cpp_examples() {
        // f=0, h=1, q=2: Q = x, Q + x = 0 → not a CPP in characteristic 2.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        assert!(!check_cpp_trace(&tw, &Poly::zero(Level::Fqn), &one).unwrap());

        // f=0, h=x, q=3, n=2: gcd(x(x+1), x+1) = x+1 → false.
        let tw = FieldTower::build(3, 1, 2).unwrap();
        assert!(!check_cpp_trace(&tw, &Poly::zero(Level::Fqn), &Poly::x(&tw, Level::Fq)).unwrap());

        // q=5, n=2, h=2 constant, f=0 → Q = 2x, Q+x = 3x, both PPs → CPP.
        let tw = FieldTower::build(5, 1, 2).unwrap();
        let h = Poly::from_indices(&tw, Level::Fq, &[2]).unwrap();
        assert!(check_cpp_trace(&tw, &Poly::zero(Level::Fqn), &h).unwrap());
        // Oracle cross-check on F_25.
        let spec = trace_spec(
            &tw,
            Poly::zero(Level::Fqn),
            h,
            Poly::one(&tw, Level::Fq),
        )
        .unwrap();
        assert!(oracle::is_cpp_spec(&spec).unwrap());
    }

    #[test]
    fn cpp_consistency_with_two_trace_checks() {
        // check_cpp_trace(f, h) = check_pp_trace(f, h, 1) ∧ check_pp_trace(f, h+1, 1).
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        for _ in 0..80 {
            let f = random_poly(&tw, Level::Fqn, 3, &mut rng);
            let h = random_poly(&tw, Level::Fq, 2, &mut rng);
            let cpp = check_cpp_trace(&tw, &f, &h).unwrap();
            let h1 = polyring::add(&tw, &h, &one).unwrap();
            let both = check_pp_trace(&tw, &f, &h, &one).unwrap().is_pp
                && check_pp_trace(&tw, &f, &h1, &one).unwrap().is_pp;
            assert_eq!(cpp, both);
        }
    }

    #[test]
    fn verify_inverse_detects_corruption() {
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let one = Poly::one(&tw, Level::Fq);
        let x = Poly::x(&tw, Level::Fq);
        let good = invert_trace_pp(&tw, &Poly::zero(Level::Fqn), &x, &one).unwrap();
        let spec: PpSpec =
            trace_spec(&tw, Poly::zero(Level::Fqn), x, one.clone()).unwrap();
        assert!(oracle::verify_inverse(&spec, &good).unwrap());
        // Corrupt F by adding 1.
        let bad_corr = polyring::add(
            &tw,
            good.correction(),
            &Poly::one(&tw, Level::Fqn),
        )
        .unwrap();
        let bad = InverseSpec::assemble(
            Arc::clone(&tw),
            bad_corr,
            good.h_inverse().clone(),
            good.base_inverse().clone(),
            good.k().clone(),
            good.case(),
            good.a().clone(),
            good.delta().clone(),
        )
        .unwrap();
        assert!(!oracle::verify_inverse(&spec, &bad).unwrap());
    }
}
