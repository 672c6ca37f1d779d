//! Permutation criteria, constructions, and inverses for polynomials of the
//! shape P(x) = f(L_g(x)) + k(L_g(x))·L_h(x) over F_{q^n}, where g is a
//! monic divisor of xⁿ−1 and k is a unit-valued multiplier on the image of
//! L_g. The specialization g = (xⁿ−1)/(x−1) works through the trace map;
//! g = (xⁿ−1)/(x−a) is the twisted variant.

mod construct;
mod trace;
mod variant;

pub use construct::{
    construct_cpp_from_base, construct_from_base_pp, enumerate_f_solutions, iterate_construction,
    BaseConstructInput, IterLevel,
};
pub use trace::{
    check_cpp_trace, check_pp_trace, classify_cor1, evaluate_inverse, invert_trace_pp, t_n,
    Cor1Case, InverseCase, InverseSpec,
};
pub use variant::{check_pp_variant, construct_variant_from_base_pp, invert_variant_pp, t_n_a};

use std::sync::Arc;

use crate::cyclo_factor;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::linearized::{self, lin_eval};
use crate::polyring::{self, Poly};

/// The tuple (f, g, h, k) defining P(x) = f(L_g(x)) + k(L_g(x))·L_h(x).
///
/// Validated on construction: g is a monic divisor of xⁿ−1 and k maps the
/// image set L_g(F_{q^n}) into F_q^*. k lives over F_q, or over F_{q^n} for
/// the twisted variant.
#[derive(Debug, Clone, PartialEq)]
pub struct PpSpec {
    tower: Arc<FieldTower>,
    f: Poly,
    g: Poly,
    h: Poly,
    k: Poly,
}

impl PpSpec {
    pub fn new(tower: Arc<FieldTower>, f: Poly, g: Poly, h: Poly, k: Poly) -> Result<PpSpec> {
        let f = match f.level() {
            Level::Fqn => f,
            _ => polyring::embed(&tower, &f, Level::Fqn)?,
        };
        if h.level() != Level::Fq || g.level() != Level::Fq {
            return Err(Error::LevelMismatch);
        }
        // g must divide x^n - 1 (also checks monicity).
        linearized::complementary_divisor(&tower, &g)?;
        // k must map the image set into F_q^*.
        for z in linearized::image_set(&tower, &g)? {
            let v = polyring::eval(&tower, &k, &z)?;
            if v.is_zero() || !tower.is_in_fq(&v) {
                return Err(Error::KNotUnitValued);
            }
        }
        Ok(PpSpec { tower, f, g, h, k })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn f(&self) -> &Poly {
        &self.f
    }
    pub fn g(&self) -> &Poly {
        &self.g
    }
    pub fn h(&self) -> &Poly {
        &self.h
    }
    pub fn k(&self) -> &Poly {
        &self.k
    }

    /// P(c) = f(L_g(c)) + k(L_g(c))·L_h(c).
    pub fn evaluate(&self, c: &Elem) -> Result<Elem> {
        let tw = &*self.tower;
        let z = lin_eval(tw, &self.g, c)?;
        let fz = polyring::eval(tw, &self.f, &z)?;
        let kz = tw.embed(&polyring::eval(tw, &self.k, &z)?, Level::Fqn)?;
        let hc = lin_eval(tw, &self.h, c)?;
        tw.add(&fz, &tw.mul(&kz, &hc)?)
    }
}

/// Outcome of a permutation criterion, with the condition that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub is_pp: bool,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// All conditions hold.
    Holds,
    /// A required gcd condition failed; carries the offending gcd.
    GcdNotOne { gcd: Poly },
    /// The reduced map collided on two distinct inputs.
    NotInjective { first: Elem, second: Elem },
}

impl Verdict {
    fn pass() -> Verdict {
        Verdict {
            is_pp: true,
            witness: Witness::Holds,
        }
    }

    fn fail(witness: Witness) -> Verdict {
        Verdict {
            is_pp: false,
            witness,
        }
    }
}

/// Injectivity of `map` on `domain`, reported with a colliding pair.
fn injective_on(
    tower: &FieldTower,
    domain: &[Elem],
    map: impl Fn(&Elem) -> Result<Elem>,
) -> Result<std::result::Result<(), (Elem, Elem)>> {
    let mut seen: std::collections::HashMap<u128, Elem> = std::collections::HashMap::new();
    for z in domain {
        let v = map(z)?;
        if let Some(prev) = seen.insert(tower.elem_index(&v), z.clone()) {
            return Ok(Err((prev, z.clone())));
        }
    }
    Ok(Ok(()))
}

/// General criterion: P is a PP of F_{q^n} iff gcd(g, h) = 1 and
/// Q(z) = L_g(f(z)) + k(z)·L_h(z) is injective on the image set L_g(F_{q^n}).
pub fn check_pp_general(spec: &PpSpec) -> Result<Verdict> {
    let tw = &*spec.tower;
    let d = polyring::gcd(tw, &spec.g, &spec.h)?;
    if d.degree() != Some(0) {
        return Ok(Verdict::fail(Witness::GcdNotOne { gcd: d }));
    }
    let image = linearized::image_set(tw, &spec.g)?;
    let outcome = injective_on(tw, &image, |z| {
        let fz = polyring::eval(tw, &spec.f, z)?;
        let lg_fz = lin_eval(tw, &spec.g, &fz)?;
        let kz = tw.embed(&polyring::eval(tw, &spec.k, z)?, Level::Fqn)?;
        let hz = lin_eval(tw, &spec.h, z)?;
        tw.add(&lg_fz, &tw.mul(&kz, &hz)?)
    })?;
    Ok(match outcome {
        Ok(()) => Verdict::pass(),
        Err((first, second)) => Verdict::fail(Witness::NotInjective { first, second }),
    })
}

/// Criterion for kernel-valued f: when f maps the image of L_g into the
/// kernel of L_g, P(x) = f(L_g(x)) + L_h(x) is a PP iff gcd(xⁿ−1, h) = 1.
/// The hypothesis is verified by evaluation and violation is an error.
pub fn check_pp_generic_g(tower: &FieldTower, f: &Poly, g: &Poly, h: &Poly) -> Result<bool> {
    for z in linearized::image_set(tower, g)? {
        let fz = polyring::eval(tower, f, &z)?;
        if !lin_eval(tower, g, &fz)?.is_zero() {
            return Err(Error::HypothesisViolated);
        }
    }
    let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
    let d = polyring::gcd(tower, &xn1, h)?;
    Ok(d.degree() == Some(0))
}

/// The composition L_G(f₀(x)) with G = (xⁿ−1)/g, expanded and reduced
/// mod x^(qⁿ)−x; its values land in the kernel of L_g by construction.
pub fn make_kernel_valued_f(tower: &FieldTower, f0: &Poly, g: &Poly) -> Result<Poly> {
    let cap_g = linearized::complementary_divisor(tower, g)?;
    let qn = tower.qn();
    if qn > tower.enum_bound() as u128 {
        return Err(Error::BoundExceeded {
            size: qn,
            bound: tower.enum_bound(),
        });
    }
    let f0 = polyring::embed(tower, f0, Level::Fqn)?;
    // x^(q^n) - x over Fqn.
    let mut m = vec![tower.zero(Level::Fqn); qn as usize + 1];
    m[1] = tower.neg(&tower.one(Level::Fqn));
    m[qn as usize] = tower.one(Level::Fqn);
    let modulus = Poly::new(Level::Fqn, m)?;

    let mut acc = Poly::zero(Level::Fqn);
    let mut power = polyring::rem(tower, &f0, &modulus)?; // f0^(q^0)
    for (i, gi) in cap_g.coeffs().iter().enumerate() {
        if i > 0 {
            power = polyring::powmod(tower, &power, tower.q() as u128, &modulus)?;
        }
        if gi.is_zero() {
            continue;
        }
        let gi = tower.embed(gi, Level::Fqn)?;
        acc = polyring::add(tower, &acc, &polyring::scalar_mul(tower, &gi, &power)?)?;
    }
    polyring::rem(tower, &acc, &modulus)
}

/// Criterion under gcd(g, h) = 1 and xⁿ−1 | g·h: P(x) = f(L_g(x)) + L_h(x)
/// is a PP iff z ↦ L_g(f(z)) is injective on the image set of L_g.
pub fn check_pp_prop7(tower: &FieldTower, f: &Poly, g: &Poly, h: &Poly) -> Result<bool> {
    let d = polyring::gcd(tower, g, h)?;
    if d.degree() != Some(0) {
        return Err(Error::PreconditionFailed("gcd(g, h) must be 1".into()));
    }
    let gh = polyring::mul(tower, g, h)?;
    let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
    if !polyring::divides(tower, &xn1, &gh)? {
        return Err(Error::PreconditionFailed(
            "g*h must be divisible by x^n - 1".into(),
        ));
    }
    let image = linearized::image_set(tower, g)?;
    let f = polyring::embed(tower, f, Level::Fqn)?;
    let outcome = injective_on(tower, &image, |z| {
        let fz = polyring::eval(tower, &f, z)?;
        lin_eval(tower, g, &fz)
    })?;
    Ok(outcome.is_ok())
}

/// Convenience: the trace-case spec (g = (xⁿ−1)/(x−1)).
pub fn trace_spec(tower: &Arc<FieldTower>, f: Poly, h: Poly, k: Poly) -> Result<PpSpec> {
    let g = cyclo_factor::trace_divisor(tower)?;
    PpSpec::new(Arc::clone(tower), f, g, h, k)
}

/// Expands a spec to its explicit polynomial form over F_{q^n}, reduced
/// mod x^(qⁿ)−x. Used when the permutation must be handed on as an ordinary
/// polynomial.
pub fn expand_to_poly(spec: &PpSpec) -> Result<Poly> {
    let tw = &*spec.tower;
    let qn = tw.qn();
    if qn > tw.enum_bound() as u128 {
        return Err(Error::BoundExceeded {
            size: qn,
            bound: tw.enum_bound(),
        });
    }
    let mut m = vec![tw.zero(Level::Fqn); qn as usize + 1];
    m[1] = tw.neg(&tw.one(Level::Fqn));
    m[qn as usize] = tw.one(Level::Fqn);
    let modulus = Poly::new(Level::Fqn, m)?;

    // The linearized polynomial Σ aᵢ x^(qⁱ) in expanded form.
    let expand_linearized = |assoc: &Poly| -> Result<Poly> {
        let mut acc = Poly::zero(Level::Fqn);
        for (i, a) in assoc.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let deg = (tw.q() as u128).pow(i as u32);
            let mut mono = vec![tw.zero(Level::Fqn); deg as usize + 1];
            mono[deg as usize] = tw.embed(a, Level::Fqn)?;
            acc = polyring::add(tw, &acc, &Poly::new(Level::Fqn, mono)?)?;
        }
        polyring::rem(tw, &acc, &modulus)
    };
    let compose_mod = |outer: &Poly, inner: &Poly| -> Result<Poly> {
        let mut acc = Poly::zero(Level::Fqn);
        for c in outer.coeffs().iter().rev() {
            acc = polyring::mul(tw, &acc, inner)?;
            let c = Poly::constant(Level::Fqn, tw.embed(c, Level::Fqn)?);
            acc = polyring::add(tw, &acc, &c)?;
            acc = polyring::rem(tw, &acc, &modulus)?;
        }
        Ok(acc)
    };

    let lg = expand_linearized(&spec.g)?;
    let lh = expand_linearized(&spec.h)?;
    let f_lg = compose_mod(&spec.f, &lg)?;
    let k = polyring::embed(tw, &spec.k, Level::Fqn)?;
    let k_lg = compose_mod(&k, &lg)?;
    let prod = polyring::rem(tw, &polyring::mul(tw, &k_lg, &lh)?, &modulus)?;
    polyring::add(tw, &f_lg, &prod)
}
