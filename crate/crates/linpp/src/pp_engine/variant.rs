//! The twisted divisor g_a = (xⁿ−1)/(x−a) for a nonzero n-th root of unity
//! a ∈ F_q. The image of L_{g_a} is the line δ·F_q where δ^q = aδ, and the
//! reduced base map is conjugated down to F_q through δ.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo_factor;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::linearized::lin_eval;
use crate::polyring::{self, Poly};

use super::trace::{permutes_fq, InverseCase, InverseSpec};
use super::{injective_on, PpSpec, Verdict, Witness};

/// Validated twist data: a at level Fq with aⁿ = 1, and the canonical δ.
struct Twist {
    a: Elem,
    a_up: Elem,
    delta: Elem,
}

fn twist(tower: &FieldTower, a: &Elem) -> Result<Twist> {
    let a = tower.project_to_fq(a).map_err(|_| Error::InvalidA)?;
    if a.is_zero() || tower.pow(&a, tower.n() as u128)? != tower.one(Level::Fq) {
        return Err(Error::InvalidA);
    }
    let delta = tower.solve_delta(&a)?;
    Ok(Twist {
        a_up: tower.embed(&a, Level::Fqn)?,
        a,
        delta,
    })
}

/// a^e for a signed exponent (a is a unit).
fn pow_signed(tower: &FieldTower, a: &Elem, e: i64) -> Result<Elem> {
    if e >= 0 {
        tower.pow(a, e as u128)
    } else {
        tower.pow(&tower.inv(a)?, (-e) as u128)
    }
}

/// The twisted coefficient transform
/// T_n^(a)[f](x) = a⁻¹ Σᵢ (Σⱼ a^((i−1)j)·aᵢ^(qʲ)) xⁱ, a polynomial over
/// F_{q^n} mapping δ·F_q to δ·F_q. Specializes to the coefficient-wise
/// trace at a = 1.
pub fn t_n_a(tower: &FieldTower, f: &Poly, a: &Elem, delta: &Elem) -> Result<Poly> {
    let tw = twist(tower, a)?;
    if delta.is_zero()
        || tower.pow(delta, tower.q() as u128)?
            != tower.mul(&tw.a_up, &tower.embed(delta, Level::Fqn)?)?
    {
        return Err(Error::InvalidDelta);
    }
    let f = polyring::embed(tower, f, Level::Fqn)?;
    let a_inv_up = tower.embed(&tower.inv(&tw.a)?, Level::Fqn)?;
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (i, ai) in f.coeffs().iter().enumerate() {
        let mut inner = tower.zero(Level::Fqn);
        let mut conj = ai.clone();
        for j in 0..tower.n() {
            if j > 0 {
                conj = tower.pow(&conj, tower.q() as u128)?;
            }
            let e = (i as i64 - 1) * j as i64;
            let scale = tower.embed(&pow_signed(tower, &tw.a, e)?, Level::Fqn)?;
            inner = tower.add(&inner, &tower.mul(&scale, &conj)?)?;
        }
        coeffs.push(tower.mul(&a_inv_up, &inner)?);
    }
    Poly::new(Level::Fqn, coeffs)
}

/// k(δ·t) projected to F_q for every t ∈ F_q, failing when any value falls
/// outside F_q^*.
fn k_values_on_delta_line(tower: &FieldTower, k: &Poly, delta: &Elem) -> Result<Vec<Elem>> {
    let mut out = Vec::with_capacity(tower.q() as usize);
    for t in tower.enumerate(Level::Fq)? {
        let arg = tower.mul(delta, &tower.embed(&t, Level::Fqn)?)?;
        let v = polyring::eval(tower, k, &arg)?;
        if v.is_zero() || !tower.is_in_fq(&v) {
            return Err(Error::KNotUnitValued);
        }
        out.push(tower.project_to_fq(&v)?);
    }
    Ok(out)
}

/// Conjugated base map Q̄_a(t) = a⁻¹ Σᵢ Tr(δ^(i−1)·aᵢ)·tⁱ + k(δt)·h(a)·t on
/// F_q; its coefficients are already base-field elements.
struct QbarMap {
    poly_part: Poly,
    kvals: Vec<Elem>,
    ha: Elem,
}

fn qbar_map(tower: &FieldTower, f: &Poly, h: &Poly, tw: &Twist, kvals: &[Elem]) -> Result<QbarMap> {
    let f = polyring::embed(tower, f, Level::Fqn)?;
    let a_inv = tower.inv(&tw.a)?;
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (i, ai) in f.coeffs().iter().enumerate() {
        let dpow = pow_signed(
            tower,
            &tower.embed(&tw.delta, Level::Fqn)?,
            i as i64 - 1,
        )?;
        let tr = tower.trace_qn_q(&tower.mul(&dpow, ai)?)?;
        coeffs.push(tower.mul(&a_inv, &tr)?);
    }
    let ha = polyring::eval(tower, h, &tw.a)?;
    Ok(QbarMap {
        poly_part: Poly::new(Level::Fq, coeffs)?,
        kvals: kvals.to_vec(),
        ha,
    })
}

impl QbarMap {
    fn eval(&self, tower: &FieldTower, t: &Elem) -> Result<Elem> {
        let base = polyring::eval(tower, &self.poly_part, t)?;
        let kv = &self.kvals[tower.elem_index(t) as usize];
        let term = tower.mul(&tower.mul(kv, &self.ha)?, t)?;
        tower.add(&base, &term)
    }
}

/// Variant criterion: P(x) = f(L_{g_a}(x)) + k(L_{g_a}(x))·L_h(x) is a PP of
/// F_{q^n} iff gcd(h, (xⁿ−1)/(x−a)) = 1 and Q̄_a is a PP of F_q.
pub fn check_pp_variant(
    tower: &FieldTower,
    f: &Poly,
    a: &Elem,
    h: &Poly,
    k: &Poly,
) -> Result<Verdict> {
    let tw = twist(tower, a)?;
    let kvals = k_values_on_delta_line(tower, k, &tower.embed(&tw.delta, Level::Fqn)?)?;
    let g = cyclo_factor::variant_divisor(tower, &tw.a)?;
    let d = polyring::gcd(tower, h, &g)?;
    if d.degree() != Some(0) {
        return Ok(Verdict::fail(Witness::GcdNotOne { gcd: d }));
    }
    let qbar = qbar_map(tower, f, h, &tw, &kvals)?;
    let domain: Vec<Elem> = tower.enumerate(Level::Fq)?.collect();
    let outcome = injective_on(tower, &domain, |t| qbar.eval(tower, t))?;
    Ok(match outcome {
        Ok(()) => Verdict::pass(),
        Err((first, second)) => Verdict::fail(Witness::NotInjective { first, second }),
    })
}

/// Inverse of a variant PP:
/// P₀(x) = F(δ⁻¹L_{g_a}(x)) + k(δR(δ⁻¹L_{g_a}(x)))^(q−2)·L_H(x).
pub fn invert_variant_pp(
    tower: &Arc<FieldTower>,
    f: &Poly,
    a: &Elem,
    h: &Poly,
    k: &Poly,
) -> Result<InverseSpec> {
    if !check_pp_variant(tower, f, a, h, k)?.is_pp {
        return Err(Error::NotAPermutation);
    }
    let tw = twist(tower, a)?;
    let delta_up = tower.embed(&tw.delta, Level::Fqn)?;
    let kvals = k_values_on_delta_line(tower, k, &delta_up)?;
    let f = polyring::embed(tower, f, Level::Fqn)?;
    let g = cyclo_factor::variant_divisor(tower, &tw.a)?;
    let qbar = qbar_map(tower, &f, h, &tw, &kvals)?;

    // R: inverse of Q̄_a over F_q.
    let mut pts = Vec::with_capacity(tower.q() as usize);
    for t in tower.enumerate(Level::Fq)? {
        pts.push((qbar.eval(tower, &t)?, t));
    }
    let base_inverse = polyring::interpolate(tower, &pts)?;

    let q = tower.q();
    let eval_r = |t: &Elem| -> Result<Elem> {
        tower.project_to_fq(&polyring::eval(tower, &base_inverse, t)?)
    };
    // -k(s)^(q-2)·L_H(f(s)) at s = δ·r ∈ δ·F_q, with k(s) read off kvals.
    let neg_k_lh_f = |h_inv: &Poly, r: &Elem| -> Result<Elem> {
        let s = tower.mul(&delta_up, &tower.embed(r, Level::Fqn)?)?;
        let kv = &kvals[tower.elem_index(r) as usize];
        let kp = tower.pow(kv, (q - 2) as u128)?;
        let fs = polyring::eval(tower, &f, &s)?;
        let lhf = lin_eval(tower, h_inv, &fs)?;
        Ok(tower.neg(&tower.mul(&tower.embed(&kp, Level::Fqn)?, &lhf)?))
    };

    let interpolate_on_fq = |value: &dyn Fn(&Elem) -> Result<Elem>| -> Result<Poly> {
        let mut pts = Vec::with_capacity(tower.q() as usize);
        for t in tower.enumerate(Level::Fq)? {
            let v = value(&t)?;
            pts.push((tower.embed(&t, Level::Fqn)?, v));
        }
        polyring::interpolate(tower, &pts)
    };

    let p_divides_n = tower.n() as u64 % tower.p() == 0;
    let (case, h_inverse, correction);
    if p_divides_n {
        let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
        let h_inv = polyring::mod_inverse(tower, h, &xn1)?;
        let corr = interpolate_on_fq(&|t| {
            let r = eval_r(t)?;
            neg_k_lh_f(&h_inv, &r)
        })?;
        case = InverseCase::PDividesN;
        h_inverse = h_inv;
        correction = corr;
    } else {
        let h_inv = polyring::mod_inverse(tower, h, &g)?;
        // a·(1 − h(a)·H(a)) / n in F_q.
        let ha = polyring::eval(tower, h, &tw.a)?;
        let cap_ha = polyring::eval(tower, &h_inv, &tw.a)?;
        let n_inv = tower.inv(&tower.from_int(Level::Fq, tower.n() as u64))?;
        let num = tower.sub(&tower.one(Level::Fq), &tower.mul(&ha, &cap_ha)?)?;
        let slope = tower.mul(&tower.mul(&tw.a, &num)?, &n_inv)?;
        let slope_up = tower.embed(&slope, Level::Fqn)?;
        let corr = interpolate_on_fq(&|t| {
            let r = eval_r(t)?;
            let lead = neg_k_lh_f(&h_inv, &r)?;
            // M's linear term a·s·(1−h(a)H(a))/n at s = δ·r.
            let s = tower.mul(&delta_up, &tower.embed(&r, Level::Fqn)?)?;
            tower.add(&lead, &tower.mul(&slope_up, &s)?)
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
        tw.a,
        tw.delta,
    )
}

/// Lifts a base permutation through the twisted divisor: solves
/// Q̄_a ≡ b (mod x^q−x) coefficient-wise via the twisted trace system
/// Tr(δ^(i−1)·yᵢ) = a·cᵢ.
pub fn construct_variant_from_base_pp(
    tower: &Arc<FieldTower>,
    b: &Poly,
    a: &Elem,
    h: &Poly,
    k: &Poly,
    sampler_seed: u64,
) -> Result<(Poly, PpSpec)> {
    let tw = twist(tower, a)?;
    if !permutes_fq(tower, |t| polyring::eval(tower, b, t))? {
        return Err(Error::BaseNotPp);
    }
    let g = cyclo_factor::variant_divisor(tower, &tw.a)?;
    if polyring::gcd(tower, h, &g)?.degree() != Some(0) {
        return Err(Error::HNotCoprime);
    }
    let delta_up = tower.embed(&tw.delta, Level::Fqn)?;
    k_values_on_delta_line(tower, k, &delta_up)?;

    // c(x) = b(x) − k(δx)·h(a)·x reduced mod x^q−x; its coefficients lie in
    // F_q because the map t ↦ c(t) is F_q-valued on F_q.
    let ha = polyring::eval(tower, h, &tw.a)?;
    let k_up = polyring::embed(tower, k, Level::Fqn)?;
    let mut k_delta_coeffs = Vec::with_capacity(k_up.coeffs().len());
    for (j, kj) in k_up.coeffs().iter().enumerate() {
        let dj = tower.pow(&delta_up, j as u128)?;
        k_delta_coeffs.push(tower.mul(kj, &dj)?);
    }
    let k_delta = Poly::new(Level::Fqn, k_delta_coeffs)?;
    let ha_up = tower.embed(&ha, Level::Fqn)?;
    let lin = polyring::scalar_mul(
        tower,
        &ha_up,
        &polyring::mul(tower, &k_delta, &Poly::x(tower, Level::Fqn))?,
    )?;
    let b_up = polyring::embed(tower, b, Level::Fqn)?;
    let target = polyring::reduce_mod_xq_x(
        tower,
        &polyring::sub(tower, &b_up, &lin)?,
        tower.q(),
    )?;

    let alpha = tower.find_nonzero_trace_element()?;
    let alpha_scale = tower.inv(&tower.trace_qn_q(&alpha)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sampler_seed);
    let mut ys = Vec::with_capacity(tower.q() as usize);
    for i in 0..tower.q() as usize {
        let ci = tower.project_to_fq(&target.coeff(tower, i))?;
        // Tr(z) = a·cᵢ, then yᵢ = δ^(1−i)·z.
        let rhs = tower.mul(&tw.a, &ci)?;
        let coef = tower.mul(&rhs, &alpha_scale)?;
        let particular = tower.mul(&tower.embed(&coef, Level::Fqn)?, &alpha)?;
        let theta = tower.elem_from_index(Level::Fqn, rng.gen_range(0..tower.qn()))?;
        let shift = tower.sub(&tower.pow(&theta, tower.q() as u128)?, &theta)?;
        let z = tower.add(&particular, &shift)?;
        let unwind = pow_signed(tower, &tw.delta, 1 - i as i64)?;
        ys.push(tower.mul(&unwind, &z)?);
    }
    let f = Poly::new(Level::Fqn, ys)?;
    let spec = PpSpec::new(Arc::clone(tower), f.clone(), g, h.clone(), k.clone())?;
    Ok((f, spec))
}
