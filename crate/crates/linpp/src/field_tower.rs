//! Exact arithmetic in the tower F_p ⊆ F_q = F_{p^k} ⊆ F_{q^n}.
//!
//! Elements are stored in the tower representation: an F_q element is a
//! length-k vector over F_p (constant term first), and an F_{q^n} element is
//! n such blocks, giving a flat length-k·n vector. Both moduli are the
//! lexicographically smallest monic irreducibles of their degree, so two
//! towers built from the same (p, k, n) are bit-identical.

use std::sync::Arc;

use crate::dense::{self, Field, FpField, FqField};
use crate::error::{Error, Result};

/// Default ceiling on exhaustive enumeration (q^n elements).
pub const DEFAULT_ENUM_BOUND: u64 = 65536;

/// The three levels of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Fp,
    Fq,
    Fqn,
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Fp => "fp",
            Level::Fq => "fq",
            Level::Fqn => "fqn",
        }
    }

    pub fn from_str(s: &str) -> Result<Level> {
        match s {
            "fp" => Ok(Level::Fp),
            "fq" => Ok(Level::Fq),
            "fqn" => Ok(Level::Fqn),
            other => Err(Error::InvalidInput(format!("unknown level {other:?}"))),
        }
    }
}

/// A field element at some level of a tower.
///
/// Coefficients are integers in `[0, p)`, constant term first; the length is
/// 1, k, or k·n according to the level. Equality is coefficient-wise, which
/// is canonical because every element has exactly one reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    level: Level,
    coeffs: Vec<u64>,
}

impl Elem {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Immutable description of F_p ⊆ F_q ⊆ F_{q^n} with its chosen moduli.
#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u64,
    k: u32,
    n: u32,
    q: u64,
    qn: u128,
    /// Monic irreducible of degree k over F_p, ascending coefficients.
    mod_q: Vec<u64>,
    /// Monic irreducible of degree n over F_q; each coefficient is a
    /// length-k vector over F_p.
    mod_qn: Vec<Vec<u64>>,
    enum_bound: u64,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.n == other.n
    }
}
impl Eq for FieldTower {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.checked_mul(d).map_or(false, |s| s <= p) {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldTower {
    /// Builds the tower for `q = p^k` and extension degree `n`. Repeated
    /// calls with the same arguments yield identical towers.
    pub fn build(p: u64, k: u32, n: u32) -> Result<Arc<FieldTower>> {
        Self::build_with_bound(p, k, n, DEFAULT_ENUM_BOUND)
    }

    pub fn build_with_bound(p: u64, k: u32, n: u32, enum_bound: u64) -> Result<Arc<FieldTower>> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if k == 0 || n == 0 {
            return Err(Error::DegenerateDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(Error::TowerTooLarge)?;
        }
        let mut qn: u128 = 1;
        for _ in 0..n {
            qn = qn.checked_mul(q as u128).ok_or(Error::TowerTooLarge)?;
        }
        if qn > enum_bound as u128 {
            log::warn!(
                "field size q^n = {qn} exceeds the enumeration bound {enum_bound}; \
                 exhaustive oracles will refuse to run"
            );
        }
        let fp = FpField { p };
        let mod_q = dense::first_irreducible(&fp, k as usize)?;
        let fq = FqField {
            fp,
            modulus: mod_q.clone(),
            k: k as usize,
        };
        let mod_qn = dense::first_irreducible(&fq, n as usize)?;
        Ok(Arc::new(FieldTower {
            p,
            k,
            n,
            q,
            qn,
            mod_q,
            mod_qn,
            enum_bound,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn qn(&self) -> u128 {
        self.qn
    }
    pub fn mod_q(&self) -> &[u64] {
        &self.mod_q
    }
    pub fn mod_qn(&self) -> &[Vec<u64>] {
        &self.mod_qn
    }
    pub fn enum_bound(&self) -> u64 {
        self.enum_bound
    }

    pub(crate) fn fp_field(&self) -> FpField {
        FpField { p: self.p }
    }

    pub(crate) fn fq_field(&self) -> FqField {
        FqField {
            fp: self.fp_field(),
            modulus: self.mod_q.clone(),
            k: self.k as usize,
        }
    }

    /// Coefficient-vector length at a level.
    pub fn level_len(&self, level: Level) -> usize {
        match level {
            Level::Fp => 1,
            Level::Fq => self.k as usize,
            Level::Fqn => (self.k * self.n) as usize,
        }
    }

    /// Number of elements at a level.
    pub fn level_size(&self, level: Level) -> u128 {
        match level {
            Level::Fp => self.p as u128,
            Level::Fq => self.q as u128,
            Level::Fqn => self.qn,
        }
    }

    pub fn zero(&self, level: Level) -> Elem {
        Elem {
            level,
            coeffs: vec![0; self.level_len(level)],
        }
    }

    pub fn one(&self, level: Level) -> Elem {
        let mut coeffs = vec![0; self.level_len(level)];
        coeffs[0] = 1 % self.p;
        Elem { level, coeffs }
    }

    /// Builds an element from raw coefficients (reduced mod p on input).
    pub fn elem_from_coeffs(&self, level: Level, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() != self.level_len(level) {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients at level {}, got {}",
                self.level_len(level),
                level.as_str(),
                coeffs.len()
            )));
        }
        Ok(Elem {
            level,
            coeffs: coeffs.iter().map(|&c| c % self.p).collect(),
        })
    }

    /// Element with canonical index `i`: base-p digits, constant term least
    /// significant. Index 0 is zero and index 1 is one at every level.
    pub fn elem_from_index(&self, level: Level, index: u128) -> Result<Elem> {
        if index >= self.level_size(level) {
            return Err(Error::InvalidInput(format!(
                "index {index} out of range for level {}",
                level.as_str()
            )));
        }
        let len = self.level_len(level);
        let mut coeffs = Vec::with_capacity(len);
        let mut i = index;
        for _ in 0..len {
            coeffs.push((i % self.p as u128) as u64);
            i /= self.p as u128;
        }
        Ok(Elem { level, coeffs })
    }

    /// Canonical index of an element (inverse of `elem_from_index`).
    pub fn elem_index(&self, e: &Elem) -> u128 {
        let mut acc: u128 = 0;
        for &c in e.coeffs.iter().rev() {
            acc = acc * self.p as u128 + c as u128;
        }
        acc
    }

    fn check_same_level(&self, a: &Elem, b: &Elem) -> Result<()> {
        if a.level != b.level {
            return Err(Error::LevelMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check_same_level(a, b)?;
        let fp = self.fp_field();
        Ok(Elem {
            level: a.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| fp.add(x, y))
                .collect(),
        })
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check_same_level(a, b)?;
        let fp = self.fp_field();
        Ok(Elem {
            level: a.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| fp.sub(x, y))
                .collect(),
        })
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let fp = self.fp_field();
        Elem {
            level: a.level,
            coeffs: a.coeffs.iter().map(|x| fp.neg(x)).collect(),
        }
    }

    /// Splits an Fqn coefficient vector into its n base-field blocks.
    fn blocks(&self, a: &Elem) -> Vec<Vec<u64>> {
        a.coeffs
            .chunks(self.k as usize)
            .map(|c| c.to_vec())
            .collect()
    }

    fn from_blocks(&self, blocks: Vec<Vec<u64>>) -> Elem {
        let mut coeffs = Vec::with_capacity((self.k * self.n) as usize);
        let mut blocks = blocks;
        blocks.resize(self.n as usize, vec![0; self.k as usize]);
        for mut b in blocks {
            b.resize(self.k as usize, 0);
            coeffs.extend_from_slice(&b);
        }
        Elem {
            level: Level::Fqn,
            coeffs,
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check_same_level(a, b)?;
        match a.level {
            Level::Fp => {
                let fp = self.fp_field();
                Ok(Elem {
                    level: Level::Fp,
                    coeffs: vec![fp.mul(&a.coeffs[0], &b.coeffs[0])],
                })
            }
            Level::Fq => {
                let fq = self.fq_field();
                Ok(Elem {
                    level: Level::Fq,
                    coeffs: fq.mul(&a.coeffs, &b.coeffs),
                })
            }
            Level::Fqn => {
                let fq = self.fq_field();
                let mut x = self.blocks(a);
                let mut y = self.blocks(b);
                dense::normalize(&fq, &mut x);
                dense::normalize(&fq, &mut y);
                let prod = dense::mul(&fq, &x, &y);
                let r = dense::rem(&fq, &prod, &self.mod_qn)?;
                Ok(self.from_blocks(r))
            }
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match a.level {
            Level::Fp => {
                let fp = self.fp_field();
                Ok(Elem {
                    level: Level::Fp,
                    coeffs: vec![fp.inv(&a.coeffs[0]).unwrap()],
                })
            }
            Level::Fq => {
                let fq = self.fq_field();
                Ok(Elem {
                    level: Level::Fq,
                    coeffs: fq.inv(&a.coeffs).unwrap(),
                })
            }
            Level::Fqn => {
                let fq = self.fq_field();
                let mut x = self.blocks(a);
                dense::normalize(&fq, &mut x);
                let (d, u, _) = dense::xgcd(&fq, &x, &self.mod_qn)?;
                debug_assert_eq!(dense::deg(&d), Some(0));
                let di = fq.inv(&d[0]).unwrap();
                let r = dense::rem(&fq, &dense::scalar_mul(&fq, &di, &u), &self.mod_qn)?;
                Ok(self.from_blocks(r))
            }
        }
    }

    /// Square-and-multiply exponentiation with a nonnegative exponent.
    pub fn pow(&self, a: &Elem, e: u128) -> Result<Elem> {
        let mut base = a.clone();
        let mut acc = self.one(a.level);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Embeds an element into a higher level (F_p → F_q → F_{q^n}).
    pub fn embed(&self, a: &Elem, target: Level) -> Result<Elem> {
        let rank = |l: Level| match l {
            Level::Fp => 0,
            Level::Fq => 1,
            Level::Fqn => 2,
        };
        if rank(a.level) > rank(target) {
            return Err(Error::LevelMismatch);
        }
        if a.level == target {
            return Ok(a.clone());
        }
        let mut coeffs = a.coeffs.clone();
        coeffs.resize(self.level_len(target), 0);
        Ok(Elem {
            level: target,
            coeffs,
        })
    }

    /// Embeds a small integer as `m · 1` at the given level.
    pub fn from_int(&self, level: Level, m: u64) -> Elem {
        let mut coeffs = vec![0; self.level_len(level)];
        coeffs[0] = m % self.p;
        Elem { level, coeffs }
    }

    /// True when an Fqn element lies in the embedded copy of F_q.
    pub fn is_in_fq(&self, a: &Elem) -> bool {
        match a.level {
            Level::Fp | Level::Fq => true,
            Level::Fqn => a.coeffs[self.k as usize..].iter().all(|&c| c == 0),
        }
    }

    /// Projects an embedded F_q element of F_{q^n} down to level Fq.
    pub fn project_to_fq(&self, a: &Elem) -> Result<Elem> {
        match a.level {
            Level::Fq => Ok(a.clone()),
            Level::Fp => self.embed(a, Level::Fq),
            Level::Fqn => {
                if !self.is_in_fq(a) {
                    return Err(Error::LevelMismatch);
                }
                Ok(Elem {
                    level: Level::Fq,
                    coeffs: a.coeffs[..self.k as usize].to_vec(),
                })
            }
        }
    }

    /// `c^(q^j)`. Applies the q-power Frobenius `j mod n` times, which is
    /// exact because Frobenius has order n on F_{q^n}.
    pub fn frobenius(&self, c: &Elem, j: u32) -> Result<Elem> {
        if c.level != Level::Fqn {
            return Err(Error::LevelMismatch);
        }
        let mut out = c.clone();
        for _ in 0..(j % self.n) {
            out = self.pow(&out, self.q as u128)?;
        }
        Ok(out)
    }

    /// Trace from F_{q^n} to F_q: c + c^q + ... + c^(q^(n-1)).
    pub fn trace_qn_q(&self, c: &Elem) -> Result<Elem> {
        if c.level != Level::Fqn {
            return Err(Error::LevelMismatch);
        }
        let mut acc = c.clone();
        let mut power = c.clone();
        for _ in 1..self.n {
            power = self.pow(&power, self.q as u128)?;
            acc = self.add(&acc, &power)?;
        }
        debug_assert!(self.is_in_fq(&acc), "trace lands in F_q");
        self.project_to_fq(&acc)
    }

    /// All elements of a level in canonical index order, starting at 0.
    pub fn enumerate(&self, level: Level) -> Result<impl Iterator<Item = Elem> + '_> {
        let size = self.level_size(level);
        if size > self.enum_bound as u128 {
            return Err(Error::BoundExceeded {
                size,
                bound: self.enum_bound,
            });
        }
        Ok((0..size as u64).map(move |i| self.elem_from_index(level, i as u128).unwrap()))
    }

    /// Smallest nonzero δ ∈ F_{q^n} with δ^q = a·δ, for a nonzero n-th root
    /// of unity a ∈ F_q. Such δ always exists because
    /// a^((q^n-1)/(q-1)) = a^n = 1.
    pub fn solve_delta(&self, a: &Elem) -> Result<Elem> {
        let a = self.project_to_fq(a)?;
        if a.is_zero() {
            return Err(Error::InvalidA);
        }
        if self.pow(&a, self.n as u128)? != self.one(Level::Fq) {
            return Err(Error::InvalidA);
        }
        let a_up = self.embed(&a, Level::Fqn)?;
        for delta in self.enumerate(Level::Fqn)?.skip(1) {
            let lhs = self.pow(&delta, self.q as u128)?;
            let rhs = self.mul(&a_up, &delta)?;
            if lhs == rhs {
                return Ok(delta);
            }
        }
        Err(Error::NoSolution)
    }

    /// First element of F_{q^n} in canonical order with nonzero trace.
    pub fn find_nonzero_trace_element(&self) -> Result<Elem> {
        for c in self.enumerate(Level::Fqn)? {
            if !self.trace_qn_q(&c)?.is_zero() {
                return Ok(c);
            }
        }
        unreachable!("trace is surjective onto F_q")
    }
}
