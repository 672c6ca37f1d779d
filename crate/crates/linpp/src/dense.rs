//! Internal dense-polynomial kernels over an abstract finite field.
//!
//! Coefficient vectors are ascending (constant term first) with no trailing
//! zeros; the zero polynomial is the empty vector. The same routines back
//! three coefficient domains: integers mod p, base-field elements mod the
//! first modulus, and tower elements via `polyring`.

use crate::error::{Error, Result};

/// Minimal field interface required by the dense kernels.
pub(crate) trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    /// Number of field elements (desk scale: fits in u64).
    fn size(&self) -> u64;
    /// Element with canonical index `i < size()`.
    fn from_index(&self, i: u64) -> Self::E;
}

pub(crate) fn normalize<F: Field>(fld: &F, v: &mut Vec<F::E>) {
    while v.last().map_or(false, |c| fld.is_zero(c)) {
        v.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub(crate) fn deg<E>(v: &[E]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn add<F: Field>(fld: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).cloned().unwrap_or_else(|| fld.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| fld.zero());
        out.push(fld.add(&x, &y));
    }
    normalize(fld, &mut out);
    out
}

pub(crate) fn sub<F: Field>(fld: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).cloned().unwrap_or_else(|| fld.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| fld.zero());
        out.push(fld.sub(&x, &y));
    }
    normalize(fld, &mut out);
    out
}

pub(crate) fn neg<F: Field>(fld: &F, a: &[F::E]) -> Vec<F::E> {
    a.iter().map(|c| fld.neg(c)).collect()
}

pub(crate) fn scalar_mul<F: Field>(fld: &F, s: &F::E, a: &[F::E]) -> Vec<F::E> {
    let mut out: Vec<F::E> = a.iter().map(|c| fld.mul(s, c)).collect();
    normalize(fld, &mut out);
    out
}

pub(crate) fn mul<F: Field>(fld: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![fld.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if fld.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = fld.add(&out[i + j], &fld.mul(x, y));
        }
    }
    normalize(fld, &mut out);
    out
}

/// Long division: returns `(quotient, remainder)` with
/// `deg(remainder) < deg(divisor)`. Errors on a zero divisor.
pub(crate) fn divmod<F: Field>(
    fld: &F,
    num: &[F::E],
    den: &[F::E],
) -> Result<(Vec<F::E>, Vec<F::E>)> {
    if den.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let dd = den.len() - 1;
    let lead_inv = fld.inv(&den[dd]).expect("normalized divisor has nonzero lead");
    let mut rem: Vec<F::E> = num.to_vec();
    if rem.len() <= dd {
        return Ok((Vec::new(), rem));
    }
    let mut quo = vec![fld.zero(); rem.len() - dd];
    while rem.len() > dd {
        let shift = rem.len() - 1 - dd;
        let coef = fld.mul(rem.last().unwrap(), &lead_inv);
        for i in 0..=dd {
            let t = fld.mul(&coef, &den[i]);
            rem[shift + i] = fld.sub(&rem[shift + i], &t);
        }
        quo[shift] = coef;
        // The leading term cancels exactly; strip it and any new zeros.
        normalize(fld, &mut rem);
        if rem.len() > shift + dd {
            // Cancellation failed only if arithmetic is broken.
            unreachable!("leading term did not cancel in division");
        }
    }
    normalize(fld, &mut quo);
    Ok((quo, rem))
}

pub(crate) fn rem<F: Field>(fld: &F, num: &[F::E], den: &[F::E]) -> Result<Vec<F::E>> {
    Ok(divmod(fld, num, den)?.1)
}

pub(crate) fn monic<F: Field>(fld: &F, a: &[F::E]) -> Vec<F::E> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let li = fld.inv(lead).expect("nonzero lead");
            scalar_mul(fld, &li, a)
        }
    }
}

/// Monic gcd by the Euclidean algorithm. Errors when both inputs are zero.
pub(crate) fn gcd<F: Field>(fld: &F, a: &[F::E], b: &[F::E]) -> Result<Vec<F::E>> {
    if a.is_empty() && b.is_empty() {
        return Err(Error::BothZero);
    }
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    while !g.is_empty() {
        let r = rem(fld, &f, &g)?;
        f = g;
        g = r;
    }
    Ok(monic(fld, &f))
}

/// Extended Euclid: returns `(d, u, v)` with `u*a + v*b = d` and `d` monic.
pub(crate) fn xgcd<F: Field>(
    fld: &F,
    a: &[F::E],
    b: &[F::E],
) -> Result<(Vec<F::E>, Vec<F::E>, Vec<F::E>)> {
    if a.is_empty() && b.is_empty() {
        return Err(Error::BothZero);
    }
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut u0 = vec![fld.one()];
    let mut u1: Vec<F::E> = Vec::new();
    let mut v0: Vec<F::E> = Vec::new();
    let mut v1 = vec![fld.one()];
    while !r1.is_empty() {
        let (q, r) = divmod(fld, &r0, &r1)?;
        let nu = sub(fld, &u0, &mul(fld, &q, &u1));
        let nv = sub(fld, &v0, &mul(fld, &q, &v1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
        v0 = v1;
        v1 = nv;
    }
    let li = fld.inv(r0.last().expect("gcd of non-both-zero inputs is nonzero")).unwrap();
    Ok((
        scalar_mul(fld, &li, &r0),
        scalar_mul(fld, &li, &u0),
        scalar_mul(fld, &li, &v0),
    ))
}

pub(crate) fn mulmod<F: Field>(fld: &F, a: &[F::E], b: &[F::E], m: &[F::E]) -> Result<Vec<F::E>> {
    rem(fld, &mul(fld, a, b), m)
}

pub(crate) fn powmod<F: Field>(fld: &F, a: &[F::E], e: u128, m: &[F::E]) -> Result<Vec<F::E>> {
    let mut base = rem(fld, a, m)?;
    let mut acc = rem(fld, &[fld.one()], m)?;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(fld, &acc, &base, m)?;
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(fld, &base, &base, m)?;
        }
    }
    Ok(acc)
}

/// Lagrange interpolation through pairwise-distinct nodes.
pub(crate) fn interpolate<F: Field>(
    fld: &F,
    points: &[(F::E, F::E)],
) -> Result<Vec<F::E>> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].0 == points[j].0 {
                return Err(Error::DuplicateNode);
            }
        }
    }
    let mut acc: Vec<F::E> = Vec::new();
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j).
        let mut basis = vec![fld.one()];
        let mut denom = fld.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = mul(fld, &basis, &[fld.neg(xj), fld.one()]);
            denom = fld.mul(&denom, &fld.sub(xi, xj));
        }
        let scale = fld.mul(yi, &fld.inv(&denom).expect("distinct nodes"));
        acc = add(fld, &acc, &scalar_mul(fld, &scale, &basis));
    }
    Ok(acc)
}

/// Monic polynomial of degree `d` whose non-leading coefficients have the
/// canonical indices `digits` (constant term first).
fn monic_from_digits<F: Field>(fld: &F, digits: &[u64]) -> Vec<F::E> {
    let mut v: Vec<F::E> = digits.iter().map(|&i| fld.from_index(i)).collect();
    v.push(fld.one());
    v
}

/// Exhaustive irreducibility test by trial division: no monic factor of
/// degree in `1..=deg/2`. Degree-1 polynomials are irreducible; constants
/// and zero are not.
pub(crate) fn is_irreducible<F: Field>(fld: &F, f: &[F::E]) -> Result<bool> {
    let d = match deg(f) {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let q = fld.size();
    for fac_deg in 1..=d / 2 {
        let mut digits = vec![0u64; fac_deg];
        loop {
            let candidate = monic_from_digits(fld, &digits);
            if rem(fld, f, &candidate)?.is_empty() {
                return Ok(false);
            }
            // Odometer over non-leading coefficients.
            let mut pos = 0;
            loop {
                if pos == fac_deg {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == fac_deg {
                break;
            }
        }
    }
    Ok(true)
}

/// Lexicographically smallest monic irreducible of degree `d`: candidate
/// coefficient tuples are read constant term upward and compared as integer
/// tuples of canonical indices.
pub(crate) fn first_irreducible<F: Field>(fld: &F, d: usize) -> Result<Vec<F::E>> {
    assert!(d >= 1);
    let q = fld.size();
    let mut digits = vec![0u64; d];
    loop {
        let candidate = monic_from_digits(fld, &digits);
        if is_irreducible(fld, &candidate)? {
            return Ok(candidate);
        }
        // Advance the tuple (c_0, ..., c_{d-1}) in lex order: the last
        // coordinate is least significant.
        let mut pos = d;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            if pos == 0 {
                pos = d; // wrapped past the most significant digit
                break;
            }
        }
        if pos == d {
            unreachable!("an irreducible of every degree exists over a finite field");
        }
    }
}

/// Prime field used for the base-level modulus search and coefficient work.
#[derive(Clone)]
pub(crate) struct FpField {
    pub p: u64,
}

impl FpField {
    fn addp(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }
    fn mulp(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn invp(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // Extended Euclid on integers.
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "p is prime so every nonzero element is a unit");
        let p = self.p as i128;
        Some(((t0 % p + p) % p) as u64)
    }
}

impl Field for FpField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.addp(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.addp(*a, self.neg(b))
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulp(*a, *b)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        self.invp(*a)
    }
    fn size(&self) -> u64 {
        self.p
    }
    fn from_index(&self, i: u64) -> u64 {
        i
    }
}

/// Base field F_q = F_p[x]/(mod_q), elements as length-k coefficient vectors.
#[derive(Clone)]
pub(crate) struct FqField {
    pub fp: FpField,
    /// Monic irreducible of degree k over F_p, ascending coefficients.
    pub modulus: Vec<u64>,
    pub k: usize,
}

impl FqField {
    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.k, 0);
        v
    }
}

impl Field for FqField {
    type E = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = 1 % self.fp.p;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        (0..self.k).map(|i| self.fp.addp(a[i], b[i])).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        (0..self.k)
            .map(|i| self.fp.addp(a[i], self.fp.neg(&b[i])))
            .collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|c| self.fp.neg(c)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if self.k == 1 {
            return vec![self.fp.mulp(a[0], b[0])];
        }
        let mut aa = a.clone();
        let mut bb = b.clone();
        normalize(&self.fp, &mut aa);
        normalize(&self.fp, &mut bb);
        let prod = mul(&self.fp, &aa, &bb);
        let r = rem(&self.fp, &prod, &self.modulus).expect("modulus nonzero");
        self.pad(r)
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        if self.k == 1 {
            return self.fp.invp(a[0]).map(|v| vec![v]);
        }
        let mut aa = a.clone();
        normalize(&self.fp, &mut aa);
        let (d, u, _) = xgcd(&self.fp, &aa, &self.modulus).expect("not both zero");
        debug_assert_eq!(deg(&d), Some(0), "modulus is irreducible");
        let di = self.fp.invp(d[0]).unwrap();
        let r = rem(&self.fp, &scalar_mul(&self.fp, &di, &u), &self.modulus).unwrap();
        Some(self.pad(r))
    }
    fn size(&self) -> u64 {
        let mut s: u64 = 1;
        for _ in 0..self.k {
            s = s.checked_mul(self.fp.p).expect("q fits u64");
        }
        s
    }
    fn from_index(&self, i: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.k);
        let mut i = i;
        for _ in 0..self.k {
            v.push(i % self.fp.p);
            i /= self.fp.p;
        }
        v
    }
}
