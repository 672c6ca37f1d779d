//! Dense univariate polynomials over F_q or F_{q^n}.
//!
//! `Poly` stores `Elem` coefficients in ascending degree order with no
//! trailing zeros; the zero polynomial is the empty vector. All operations
//! take the owning `FieldTower` explicitly and are exact.

use crate::dense::{self, Field};
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};

/// A polynomial over one level of the tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    level: Level,
    coeffs: Vec<Elem>,
}

/// Coefficient field view used to drive the generic dense kernels.
pub(crate) struct ElemField<'a> {
    pub tower: &'a FieldTower,
    pub level: Level,
}

impl<'a> Field for ElemField<'a> {
    type E = Elem;

    fn zero(&self) -> Elem {
        self.tower.zero(self.level)
    }
    fn one(&self) -> Elem {
        self.tower.one(self.level)
    }
    fn is_zero(&self, a: &Elem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.add(a, b).expect("same level")
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.sub(a, b).expect("same level")
    }
    fn neg(&self, a: &Elem) -> Elem {
        self.tower.neg(a)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.mul(a, b).expect("same level")
    }
    fn inv(&self, a: &Elem) -> Option<Elem> {
        self.tower.inv(a).ok()
    }
    fn size(&self) -> u64 {
        self.tower.level_size(self.level) as u64
    }
    fn from_index(&self, i: u64) -> Elem {
        self.tower.elem_from_index(self.level, i as u128).unwrap()
    }
}

impl Poly {
    /// Builds a polynomial from coefficients (constant term first),
    /// stripping trailing zeros. All coefficients must share `level`.
    pub fn new(level: Level, coeffs: Vec<Elem>) -> Result<Poly> {
        for c in &coeffs {
            if c.level() != level {
                return Err(Error::LevelMismatch);
            }
        }
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(Poly { level, coeffs })
    }

    pub fn zero(level: Level) -> Poly {
        Poly {
            level,
            coeffs: Vec::new(),
        }
    }

    pub fn one(tower: &FieldTower, level: Level) -> Poly {
        Poly {
            level,
            coeffs: vec![tower.one(level)],
        }
    }

    pub fn constant(level: Level, c: Elem) -> Poly {
        Poly::new(level, vec![c]).expect("constant of matching level")
    }

    /// The monomial x.
    pub fn x(tower: &FieldTower, level: Level) -> Poly {
        Poly {
            level,
            coeffs: vec![tower.zero(level), tower.one(level)],
        }
    }

    /// Builds a polynomial from canonical element indices, constant first.
    pub fn from_indices(tower: &FieldTower, level: Level, indices: &[u128]) -> Result<Poly> {
        let coeffs = indices
            .iter()
            .map(|&i| tower.elem_from_index(level, i))
            .collect::<Result<Vec<_>>>()?;
        Poly::new(level, coeffs)
    }

    /// x^n - 1 over the given level.
    pub fn xn_minus_1(tower: &FieldTower, level: Level, n: u32) -> Poly {
        let mut coeffs = vec![tower.zero(level); n as usize + 1];
        coeffs[0] = tower.neg(&tower.one(level));
        coeffs[n as usize] = tower.one(level);
        Poly { level, coeffs }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        dense::deg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self, tower: &FieldTower) -> bool {
        self.coeffs.last() == Some(&tower.one(self.level))
    }

    /// Coefficient of x^i (zero if beyond the degree).
    pub fn coeff(&self, tower: &FieldTower, i: usize) -> Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| tower.zero(self.level))
    }

    fn fld<'a>(&self, tower: &'a FieldTower) -> ElemField<'a> {
        ElemField {
            tower,
            level: self.level,
        }
    }

    fn wrap(level: Level, coeffs: Vec<Elem>) -> Poly {
        Poly { level, coeffs }
    }
}

fn same_level(a: &Poly, b: &Poly) -> Result<Level> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch);
    }
    Ok(a.level())
}

pub fn add(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<Poly> {
    let level = same_level(a, b)?;
    let fld = ElemField { tower, level };
    Ok(Poly::wrap(level, dense::add(&fld, a.coeffs(), b.coeffs())))
}

pub fn sub(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<Poly> {
    let level = same_level(a, b)?;
    let fld = ElemField { tower, level };
    Ok(Poly::wrap(level, dense::sub(&fld, a.coeffs(), b.coeffs())))
}

pub fn neg(tower: &FieldTower, a: &Poly) -> Poly {
    let fld = a.fld(tower);
    Poly::wrap(a.level(), dense::neg(&fld, a.coeffs()))
}

pub fn mul(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<Poly> {
    let level = same_level(a, b)?;
    let fld = ElemField { tower, level };
    Ok(Poly::wrap(level, dense::mul(&fld, a.coeffs(), b.coeffs())))
}

pub fn scalar_mul(tower: &FieldTower, s: &Elem, a: &Poly) -> Result<Poly> {
    if s.level() != a.level() {
        return Err(Error::LevelMismatch);
    }
    let fld = a.fld(tower);
    Ok(Poly::wrap(a.level(), dense::scalar_mul(&fld, s, a.coeffs())))
}

/// Exact division with remainder: `a = q·b + r`, `deg r < deg b`.
pub fn divmod(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let level = same_level(a, b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let fld = ElemField { tower, level };
    let (q, r) = dense::divmod(&fld, a.coeffs(), b.coeffs())?;
    Ok((Poly::wrap(level, q), Poly::wrap(level, r)))
}

pub fn rem(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divmod(tower, a, b)?.1)
}

/// True when `b` divides `a` exactly.
pub fn divides(tower: &FieldTower, b: &Poly, a: &Poly) -> Result<bool> {
    Ok(rem(tower, a, b)?.is_zero())
}

pub fn monic(tower: &FieldTower, a: &Poly) -> Poly {
    let fld = a.fld(tower);
    Poly::wrap(a.level(), dense::monic(&fld, a.coeffs()))
}

/// Monic greatest common divisor via Euclid.
pub fn gcd(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<Poly> {
    let level = same_level(a, b)?;
    let fld = ElemField { tower, level };
    Ok(Poly::wrap(level, dense::gcd(&fld, a.coeffs(), b.coeffs())?))
}

/// Extended Euclid: `(d, u, v)` with `u·a + v·b = d`, `d` monic.
pub fn xgcd(tower: &FieldTower, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    let level = same_level(a, b)?;
    let fld = ElemField { tower, level };
    let (d, u, v) = dense::xgcd(&fld, a.coeffs(), b.coeffs())?;
    Ok((
        Poly::wrap(level, d),
        Poly::wrap(level, u),
        Poly::wrap(level, v),
    ))
}

/// Inverse of `h` modulo `m`: the unique `H` with `h·H ≡ 1 (mod m)` and
/// `deg H < deg m`. Errors when `gcd(h, m) ≠ 1`.
pub fn mod_inverse(tower: &FieldTower, h: &Poly, m: &Poly) -> Result<Poly> {
    let level = same_level(h, m)?;
    let fld = ElemField { tower, level };
    if m.degree() == Some(0) {
        // Everything is congruent mod a unit; the inverse of degree < 0 is 0.
        return Ok(Poly::zero(level));
    }
    let (d, u, _) = dense::xgcd(&fld, h.coeffs(), m.coeffs())?;
    if dense::deg(&d) != Some(0) {
        return Err(Error::NotCoprime);
    }
    // d is monic of degree 0, hence exactly 1: u·h ≡ 1 (mod m) already.
    let r = dense::rem(&fld, &u, m.coeffs())?;
    Ok(Poly::wrap(level, r))
}

/// Horner evaluation. A polynomial over a lower level may be evaluated at a
/// higher-level point (and vice versa) by coefficient embedding.
pub fn eval(tower: &FieldTower, f: &Poly, x: &Elem) -> Result<Elem> {
    let rank = |l: Level| match l {
        Level::Fp => 0u8,
        Level::Fq => 1,
        Level::Fqn => 2,
    };
    let level = if rank(f.level()) >= rank(x.level()) {
        f.level()
    } else {
        x.level()
    };
    let x = tower.embed(x, level)?;
    let fld = ElemField { tower, level };
    let mut acc = tower.zero(level);
    for c in f.coeffs().iter().rev() {
        let c = tower.embed(c, level)?;
        acc = fld.add(&fld.mul(&acc, &x), &c);
    }
    Ok(acc)
}

/// Remainder of `f` modulo x^qpow − x. The result induces the same function
/// on the field with `qpow` elements and has degree < qpow.
pub fn reduce_mod_xq_x(tower: &FieldTower, f: &Poly, qpow: u64) -> Result<Poly> {
    if f.degree().map_or(true, |d| (d as u64) < qpow) {
        return Ok(f.clone());
    }
    let level = f.level();
    let mut m = vec![tower.zero(level); qpow as usize + 1];
    m[1] = tower.neg(&tower.one(level));
    m[qpow as usize] = tower.one(level);
    let modulus = Poly::wrap(level, m);
    rem(tower, f, &modulus)
}

/// Lagrange interpolation: the unique polynomial of degree < #points through
/// the given pairwise-distinct nodes.
pub fn interpolate(tower: &FieldTower, points: &[(Elem, Elem)]) -> Result<Poly> {
    if points.is_empty() {
        return Ok(Poly::zero(Level::Fq));
    }
    let level = points[0].0.level();
    for (x, y) in points {
        if x.level() != level || y.level() != level {
            return Err(Error::LevelMismatch);
        }
    }
    let fld = ElemField { tower, level };
    let pts: Vec<(Elem, Elem)> = points.to_vec();
    Ok(Poly::wrap(level, dense::interpolate(&fld, &pts)?))
}

/// Lifts an F_q polynomial to F_{q^n} coefficients.
pub fn embed(tower: &FieldTower, f: &Poly, target: Level) -> Result<Poly> {
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| tower.embed(c, target))
        .collect::<Result<Vec<_>>>()?;
    Poly::new(target, coeffs)
}

/// Projects an F_{q^n} polynomial whose coefficients all lie in the embedded
/// base field down to level Fq.
pub fn project_to_fq(tower: &FieldTower, f: &Poly) -> Result<Poly> {
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| tower.project_to_fq(c))
        .collect::<Result<Vec<_>>>()?;
    Poly::new(Level::Fq, coeffs)
}

/// `base^e mod m` by square and multiply.
pub fn powmod(tower: &FieldTower, base: &Poly, e: u128, m: &Poly) -> Result<Poly> {
    let level = same_level(base, m)?;
    let fld = ElemField { tower, level };
    Ok(Poly::wrap(
        level,
        dense::powmod(&fld, base.coeffs(), e, m.coeffs())?,
    ))
}

/// Canonical ordering: by degree, then by coefficient indices from the
/// constant term upward. Used for stable factor lists.
pub fn cmp_canonical(tower: &FieldTower, a: &Poly, b: &Poly) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da = a.coeffs().len();
    let db = b.coeffs().len();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        match tower.elem_index(x).cmp(&tower.elem_index(y)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::FieldTower;

    #[test]
    fn freshman_dream_square() {
        // (x+1)^2 = x^2 + 1 over F_2.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let f = Poly::from_indices(&tw, Level::Fq, &[1, 1]).unwrap();
        let sq = mul(&tw, &f, &f).unwrap();
        assert_eq!(sq, Poly::from_indices(&tw, Level::Fq, &[1, 0, 1]).unwrap());
    }

    #[test]
    fn divmod_and_zero_rules() {
        let tw = FieldTower::build(5, 1, 2).unwrap();
        let num = Poly::xn_minus_1(&tw, Level::Fq, 2);
        let den = Poly::from_indices(&tw, Level::Fq, &[4, 1]).unwrap(); // x - 1
        let (q, r) = divmod(&tw, &num, &den).unwrap();
        assert_eq!(q, Poly::from_indices(&tw, Level::Fq, &[1, 1]).unwrap());
        assert!(r.is_zero());
        let zero = Poly::zero(Level::Fq);
        assert!(mul(&tw, &num, &zero).unwrap().is_zero());
        assert!(matches!(
            divmod(&tw, &num, &zero),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2-1, x-1) over F_3 is x+2 (monic form of x-1).
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let a = Poly::xn_minus_1(&tw, Level::Fq, 2);
        let b = Poly::from_indices(&tw, Level::Fq, &[2, 1]).unwrap();
        assert_eq!(gcd(&tw, &a, &b).unwrap(), b);
        let one = Poly::one(&tw, Level::Fq);
        assert_eq!(gcd(&tw, &a, &one).unwrap(), one);

        let tw2 = FieldTower::build(2, 1, 3).unwrap();
        let f = Poly::xn_minus_1(&tw2, Level::Fq, 3);
        let g = Poly::from_indices(&tw2, Level::Fq, &[1, 1, 1]).unwrap();
        assert_eq!(gcd(&tw2, &f, &g).unwrap(), g);
    }

    #[test]
    fn xgcd_and_mod_inverse() {
        let tw = FieldTower::build(2, 1, 3).unwrap();
        let x = Poly::x(&tw, Level::Fq);
        let xp1 = Poly::from_indices(&tw, Level::Fq, &[1, 1]).unwrap();
        let (d, u, v) = xgcd(&tw, &x, &xp1).unwrap();
        assert_eq!(d, Poly::one(&tw, Level::Fq));
        let lhs = add(
            &tw,
            &mul(&tw, &u, &x).unwrap(),
            &mul(&tw, &v, &xp1).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, d);

        // Inverse of x mod x^3-1 over F_2 is x^2.
        let m = Poly::xn_minus_1(&tw, Level::Fq, 3);
        let h = mod_inverse(&tw, &x, &m).unwrap();
        assert_eq!(h, Poly::from_indices(&tw, Level::Fq, &[0, 0, 1]).unwrap());
        // Inverse of x mod x^2+x+1 over F_2 is x+1.
        let m2 = Poly::from_indices(&tw, Level::Fq, &[1, 1, 1]).unwrap();
        let h2 = mod_inverse(&tw, &x, &m2).unwrap();
        assert_eq!(h2, Poly::from_indices(&tw, Level::Fq, &[1, 1]).unwrap());
        // mod_inverse(1, m) = 1.
        assert_eq!(
            mod_inverse(&tw, &Poly::one(&tw, Level::Fq), &m).unwrap(),
            Poly::one(&tw, Level::Fq)
        );
        // Not coprime → error.
        let sq = mul(&tw, &xp1, &xp1).unwrap();
        assert!(matches!(
            mod_inverse(&tw, &xp1, &sq),
            Err(Error::NotCoprime)
        ));
    }

    #[test]
    fn eval_with_embedding() {
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let t = tw.elem_from_index(Level::Fqn, 2).unwrap();
        // eval(x^2 + 1, t) over F_4 = (t+1) + 1 = t.
        let f = Poly::from_indices(&tw, Level::Fq, &[1, 0, 1]).unwrap();
        assert_eq!(eval(&tw, &f, &t).unwrap(), t);
        assert!(eval(&tw, &Poly::zero(Level::Fq), &t).unwrap().is_zero());
        let x = Poly::x(&tw, Level::Fq);
        assert_eq!(eval(&tw, &x, &t).unwrap(), t);
    }

    #[test]
    fn reduce_mod_xq_x_examples() {
        let tw = FieldTower::build(2, 1, 2).unwrap();
        // reduce(x^q) = x.
        let xq = Poly::from_indices(&tw, Level::Fq, &[0, 0, 1]).unwrap();
        assert_eq!(
            reduce_mod_xq_x(&tw, &xq, 2).unwrap(),
            Poly::x(&tw, Level::Fq)
        );
        // Degree < q is untouched.
        let lin = Poly::from_indices(&tw, Level::Fq, &[1, 1]).unwrap();
        assert_eq!(reduce_mod_xq_x(&tw, &lin, 2).unwrap(), lin);
        // x^2+x+1 ≡ 1 (mod x^2-x) over F_2.
        let f = Poly::from_indices(&tw, Level::Fq, &[1, 1, 1]).unwrap();
        assert_eq!(
            reduce_mod_xq_x(&tw, &f, 2).unwrap(),
            Poly::one(&tw, Level::Fq)
        );
    }

    #[test]
    fn reduce_agrees_as_function() {
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let f = Poly::from_indices(&tw, Level::Fq, &[2, 1, 0, 2, 1]).unwrap();
        let r = reduce_mod_xq_x(&tw, &f, 3).unwrap();
        assert!(r.degree().unwrap() < 3);
        for c in tw.enumerate(Level::Fq).unwrap() {
            assert_eq!(eval(&tw, &f, &c).unwrap(), eval(&tw, &r, &c).unwrap());
        }
    }

    #[test]
    fn interpolation_examples() {
        let tw = FieldTower::build(3, 1, 2).unwrap();
        // Identity points → x.
        let pts: Vec<(Elem, Elem)> = tw
            .enumerate(Level::Fq)
            .unwrap()
            .map(|c| (c.clone(), c))
            .collect();
        assert_eq!(interpolate(&tw, &pts).unwrap(), Poly::x(&tw, Level::Fq));
        // Shift points → x + 1.
        let pts: Vec<(Elem, Elem)> = tw
            .enumerate(Level::Fq)
            .unwrap()
            .map(|c| {
                let shifted = tw.add(&c, &tw.one(Level::Fq)).unwrap();
                (c, shifted)
            })
            .collect();
        assert_eq!(
            interpolate(&tw, &pts).unwrap(),
            Poly::from_indices(&tw, Level::Fq, &[1, 1]).unwrap()
        );
        // Inverse of 2x over F_5 is 3x.
        let tw5 = FieldTower::build(5, 1, 2).unwrap();
        let two = tw5.from_int(Level::Fq, 2);
        let pts: Vec<(Elem, Elem)> = tw5
            .enumerate(Level::Fq)
            .unwrap()
            .map(|c| (tw5.mul(&two, &c).unwrap(), c))
            .collect();
        assert_eq!(
            interpolate(&tw5, &pts).unwrap(),
            Poly::from_indices(&tw5, Level::Fq, &[0, 3]).unwrap()
        );
    }
}
