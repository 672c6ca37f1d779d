//! Factorization of xⁿ−1 over F_q and enumeration of its monic divisors.
//!
//! Writing n = p^e·m with gcd(m, p) = 1, we have xⁿ−1 = (x^m−1)^(p^e). The
//! squarefree part x^m−1 splits into the minimal polynomials of ζ^j over
//! F_q, one per q-cyclotomic coset mod m, where ζ is a primitive m-th root
//! of unity found by enumeration in the splitting extension F_{q^d},
//! d = ord_m(q). No randomness is involved anywhere, so factor lists are
//! reproducible.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::polyring::{self, Poly};

/// The factorization of xⁿ−1 over F_q into monic irreducibles.
#[derive(Debug, Clone)]
pub struct FactorSet {
    factors: Vec<(Poly, u32)>,
    n: u32,
    tower: Arc<FieldTower>,
}

impl FactorSet {
    /// Irreducible factors with multiplicities, canonically sorted.
    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Product of all factors with multiplicities.
    pub fn product(&self) -> Result<Poly> {
        let tw = &*self.tower;
        let mut acc = Poly::one(tw, Level::Fq);
        for (f, mult) in &self.factors {
            for _ in 0..*mult {
                acc = polyring::mul(tw, &acc, f)?;
            }
        }
        Ok(acc)
    }
}

fn multiplicative_order_mod(q: u64, m: u64) -> u32 {
    let mut acc = q % m;
    let mut d = 1u32;
    while acc != 1 {
        acc = ((acc as u128 * q as u128) % m as u128) as u64;
        d += 1;
    }
    d
}

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Canonically smallest element of multiplicative order exactly `m` in the
/// Fqn level of `split`, found by enumeration.
fn primitive_root_of_unity(split: &FieldTower, m: u64) -> Result<Elem> {
    let primes = prime_divisors(m);
    for c in split.enumerate(Level::Fqn)?.skip(1) {
        if split.pow(&c, m as u128)? != split.one(Level::Fqn) {
            continue;
        }
        let mut exact = true;
        for &r in &primes {
            if split.pow(&c, (m / r) as u128)? == split.one(Level::Fqn) {
                exact = false;
                break;
            }
        }
        if exact {
            return Ok(c);
        }
    }
    Err(Error::NoSolution)
}

/// Factors xⁿ−1 over F_q by q-cyclotomic cosets.
pub fn factor_xn_minus_1(tower: &Arc<FieldTower>) -> Result<FactorSet> {
    let p = tower.p();
    let n = tower.n();
    // n = p^e * m with gcd(m, p) = 1.
    let mut m = n as u64;
    let mut pe = 1u32;
    while m % p == 0 {
        m /= p;
        pe *= p as u32;
    }
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    if m == 1 {
        let x_minus_1 = Poly::new(
            Level::Fq,
            vec![tower.neg(&tower.one(Level::Fq)), tower.one(Level::Fq)],
        )?;
        factors.push((x_minus_1, pe));
    } else {
        // Splitting extension degree for the m-th roots of unity.
        let d = multiplicative_order_mod(tower.q(), m);
        let split = FieldTower::build_with_bound(p, tower.k(), d, tower.enum_bound())?;
        let zeta = primitive_root_of_unity(&split, m)?;
        let mut seen = vec![false; m as usize];
        for j in 0..m {
            if seen[j as usize] {
                continue;
            }
            // The q-cyclotomic coset of j mod m.
            let mut coset = Vec::new();
            let mut s = j;
            loop {
                seen[s as usize] = true;
                coset.push(s);
                s = ((s as u128 * tower.q() as u128) % m as u128) as u64;
                if s == j {
                    break;
                }
            }
            // Minimal polynomial of zeta^j: prod over the coset of (x - zeta^s).
            let mut minpoly = Poly::one(&split, Level::Fqn);
            for &s in &coset {
                let root = split.pow(&zeta, s as u128)?;
                let lin = Poly::new(
                    Level::Fqn,
                    vec![split.neg(&root), split.one(Level::Fqn)],
                )?;
                minpoly = polyring::mul(&split, &minpoly, &lin)?;
            }
            // Coefficients lie in the embedded F_q, which has the same
            // representation in both towers (identical p, k, mod_q).
            let coeffs = minpoly
                .coeffs()
                .iter()
                .map(|c| {
                    let fq = split.project_to_fq(c)?;
                    tower.elem_from_coeffs(Level::Fq, fq.coeffs())
                })
                .collect::<Result<Vec<_>>>()?;
            factors.push((Poly::new(Level::Fq, coeffs)?, pe));
        }
    }
    factors.sort_by(|a, b| polyring::cmp_canonical(tower, &a.0, &b.0));
    Ok(FactorSet {
        factors,
        n,
        tower: Arc::clone(tower),
    })
}

/// All monic divisors of xⁿ−1: products with exponent vectors enumerated
/// lexicographically over the sorted factor list.
pub fn divisors(fs: &FactorSet) -> Result<Vec<Poly>> {
    let tw = &*fs.tower;
    let r = fs.factors.len();
    let mut exps = vec![0u32; r];
    let mut out = Vec::new();
    loop {
        let mut d = Poly::one(tw, Level::Fq);
        for (i, (f, _)) in fs.factors.iter().enumerate() {
            for _ in 0..exps[i] {
                d = polyring::mul(tw, &d, f)?;
            }
        }
        out.push(d);
        // Advance the exponent vector in lex order (last coordinate fastest).
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            exps[pos] += 1;
            if exps[pos] <= fs.factors[pos].1 {
                break;
            }
            exps[pos] = 0;
        }
    }
}

fn variant_divisor_raw(tower: &FieldTower, a: &Elem, n: u32) -> Result<Poly> {
    // x^(n-1) + a·x^(n-2) + ... + a^(n-1): coefficient of x^i is a^(n-1-i).
    let mut coeffs = Vec::with_capacity(n as usize);
    for i in 0..n {
        coeffs.push(tower.pow(a, (n - 1 - i) as u128)?);
    }
    Poly::new(Level::Fq, coeffs)
}

/// (xⁿ−1)/(x−1) = x^(n−1) + x^(n−2) + ... + 1, the trace associate.
pub fn trace_divisor(tower: &FieldTower) -> Result<Poly> {
    variant_divisor_raw(tower, &tower.one(Level::Fq), tower.n())
}

/// (xⁿ−1)/(x−a) for a nonzero n-th root of unity a ∈ F_q.
pub fn variant_divisor(tower: &FieldTower, a: &Elem) -> Result<Poly> {
    let a = tower.project_to_fq(a)?;
    if a.is_zero() || tower.pow(&a, tower.n() as u128)? != tower.one(Level::Fq) {
        return Err(Error::NotARoot);
    }
    variant_divisor_raw(tower, &a, tower.n())
}
