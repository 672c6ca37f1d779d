//! q-linearized polynomials handled through their conventional q-associates.
//!
//! A polynomial f(x) = Σ aᵢxⁱ stands for the linearized L_f(x) = Σ aᵢx^(qⁱ);
//! the expanded q-power form is never materialized. Composition of
//! linearized polynomials corresponds to multiplication of associates, and
//! kernels/images in F_{q^n} are controlled by gcds with xⁿ−1.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::polyring::{self, Poly};

/// A q-linearized polynomial stored as its conventional q-associate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinPoly {
    assoc: Poly,
    tower: Arc<FieldTower>,
}

impl LinPoly {
    pub fn new(tower: Arc<FieldTower>, assoc: Poly) -> LinPoly {
        LinPoly { assoc, tower }
    }

    pub fn assoc(&self) -> &Poly {
        &self.assoc
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Evaluates Σ aᵢ·c^(qⁱ) at an F_{q^n} point.
    pub fn eval(&self, c: &Elem) -> Result<Elem> {
        lin_eval(&self.tower, &self.assoc, c)
    }
}

/// Evaluates the linearized polynomial with associate `assoc` at `c`,
/// computing the Frobenius powers c, c^q, c^(q²), … iteratively.
pub fn lin_eval(tower: &FieldTower, assoc: &Poly, c: &Elem) -> Result<Elem> {
    let c = tower.embed(c, Level::Fqn)?;
    let mut acc = tower.zero(Level::Fqn);
    let mut power = c;
    for (i, a) in assoc.coeffs().iter().enumerate() {
        if i > 0 {
            power = tower.pow(&power, tower.q() as u128)?;
        }
        if a.is_zero() {
            continue;
        }
        let a = tower.embed(a, Level::Fqn)?;
        acc = tower.add(&acc, &tower.mul(&a, &power)?)?;
    }
    Ok(acc)
}

/// Checks the composition law L_f(L_g(c)) = L_{fg}(c) for every c in the
/// enumeration. A test-harness primitive: it must always return true.
pub fn lin_compose_check(tower: &FieldTower, f: &Poly, g: &Poly) -> Result<bool> {
    let fg = polyring::mul(tower, f, g)?;
    for c in tower.enumerate(Level::Fqn)? {
        let inner = lin_eval(tower, g, &c)?;
        let lhs = lin_eval(tower, f, &inner)?;
        let rhs = lin_eval(tower, &fg, &c)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All roots of L_f in F_{q^n}. The count is exactly
/// q^(deg gcd(f, xⁿ−1)) and the set is an F_q-subspace.
pub fn kernel(tower: &FieldTower, f: &Poly) -> Result<Vec<Elem>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for c in tower.enumerate(Level::Fqn)? {
        if lin_eval(tower, f, &c)?.is_zero() {
            out.push(c);
        }
    }
    Ok(out)
}

/// The image set L_g(F_{q^n}) for a monic divisor g of xⁿ−1, computed as the
/// kernel of L_G with G = (xⁿ−1)/g.
pub fn image_set(tower: &FieldTower, g: &Poly) -> Result<Vec<Elem>> {
    let complement = complementary_divisor(tower, g)?;
    kernel(tower, &complement)
}

/// (xⁿ−1)/g for a monic divisor g of xⁿ−1.
pub fn complementary_divisor(tower: &FieldTower, g: &Poly) -> Result<Poly> {
    if g.is_zero() || !g.is_monic(tower) || g.level() != Level::Fq {
        return Err(Error::NotADivisor);
    }
    let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
    let (quot, rem) = polyring::divmod(tower, &xn1, g)?;
    if !rem.is_zero() {
        return Err(Error::NotADivisor);
    }
    Ok(quot)
}

/// Whether c ↦ L_g(c) restricted to the root set of L_f is a bijection of
/// that set with itself, decided by gcd(f, g, xⁿ−1) = 1.
pub fn permutes_kernel(tower: &FieldTower, f: &Poly, g: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let xn1 = Poly::xn_minus_1(tower, Level::Fq, tower.n());
    let d = polyring::gcd(tower, &polyring::gcd(tower, f, g)?, &xn1)?;
    Ok(d.degree() == Some(0))
}

/// An F_q-basis of the kernel of L_f, extracted from the full root list by
/// Gaussian elimination on the coordinate vectors over F_q.
pub fn kernel_basis(tower: &FieldTower, f: &Poly) -> Result<Vec<Elem>> {
    let elems = kernel(tower, f)?;
    let k = tower.k() as usize;
    let n = tower.n() as usize;
    // Coordinates of an Fqn element over F_q are its n blocks.
    let coords = |e: &Elem| -> Vec<Elem> {
        e.coeffs()
            .chunks(k)
            .map(|b| tower.elem_from_coeffs(Level::Fq, b).unwrap())
            .collect()
    };
    let mut basis: Vec<Elem> = Vec::new();
    let mut rows: Vec<Vec<Elem>> = Vec::new(); // reduced coordinate rows
    let mut pivots: Vec<usize> = Vec::new();
    'next: for e in elems {
        if e.is_zero() {
            continue;
        }
        let mut row = coords(&e);
        // Reduce against existing pivot rows.
        for (r, &piv) in rows.iter().zip(&pivots) {
            if !row[piv].is_zero() {
                let factor = row[piv].clone();
                for j in 0..n {
                    let t = tower.mul(&factor, &r[j])?;
                    row[j] = tower.sub(&row[j], &t)?;
                }
            }
        }
        let Some(piv) = row.iter().position(|c| !c.is_zero()) else {
            continue 'next; // linearly dependent
        };
        let inv = tower.inv(&row[piv])?;
        for c in row.iter_mut() {
            *c = tower.mul(&inv, c)?;
        }
        rows.push(row);
        pivots.push(piv);
        basis.push(e);
    }
    Ok(basis)
}
