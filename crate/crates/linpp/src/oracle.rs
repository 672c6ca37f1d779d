//! Ground-truth exhaustive verification: permutation and complete-mapping
//! checks, inverse round-trips, base-permutation inversion, and seeded
//! criterion-vs-oracle agreement sweeps.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo_factor;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::polyring::{self, Poly};
use crate::pp_engine::{
    check_cpp_trace, check_pp_general, check_pp_trace, check_pp_variant, InverseSpec, PpSpec,
};
use crate::serial;

/// Evaluates `map` at every element of the level and reports bijectivity.
pub fn is_permutation_fn(
    tower: &FieldTower,
    level: Level,
    map: impl Fn(&Elem) -> Result<Elem>,
) -> Result<bool> {
    let size = tower.level_size(level);
    if size > tower.enum_bound() as u128 {
        return Err(Error::BoundExceeded {
            size,
            bound: tower.enum_bound(),
        });
    }
    let mut seen = vec![false; size as usize];
    for c in tower.enumerate(level)? {
        let v = map(&c)?;
        if v.level() != level {
            return Err(Error::LevelMismatch);
        }
        let idx = tower.elem_index(&v) as usize;
        if seen[idx] {
            return Ok(false);
        }
        seen[idx] = true;
    }
    Ok(true)
}

/// Brute-force permutation check of a polynomial map on the given level.
pub fn is_permutation_poly(tower: &FieldTower, level: Level, f: &Poly) -> Result<bool> {
    is_permutation_fn(tower, level, |c| {
        let v = polyring::eval(tower, f, c)?;
        match level {
            Level::Fq => tower.project_to_fq(&v),
            _ => Ok(v),
        }
    })
}

/// Brute-force permutation check of a spec over F_{q^n}.
pub fn is_permutation_spec(spec: &PpSpec) -> Result<bool> {
    is_permutation_fn(spec.tower(), Level::Fqn, |c| spec.evaluate(c))
}

/// Complete-mapping check: both the map and map + identity permute.
pub fn is_cpp_fn(
    tower: &FieldTower,
    level: Level,
    map: impl Fn(&Elem) -> Result<Elem>,
) -> Result<bool> {
    Ok(is_permutation_fn(tower, level, &map)?
        && is_permutation_fn(tower, level, |c| tower.add(&map(c)?, c))?)
}

pub fn is_cpp_poly(tower: &FieldTower, level: Level, f: &Poly) -> Result<bool> {
    is_cpp_fn(tower, level, |c| {
        let v = polyring::eval(tower, f, c)?;
        match level {
            Level::Fq => tower.project_to_fq(&v),
            _ => Ok(v),
        }
    })
}

pub fn is_cpp_spec(spec: &PpSpec) -> Result<bool> {
    is_cpp_fn(spec.tower(), Level::Fqn, |c| spec.evaluate(c))
}

/// Exhaustive two-sided round-trip: P₀(P(c)) = c and P(P₀(c)) = c.
pub fn verify_inverse(spec: &PpSpec, inverse: &InverseSpec) -> Result<bool> {
    let tower = spec.tower();
    for c in tower.enumerate(Level::Fqn)? {
        if inverse.evaluate(&spec.evaluate(&c)?)? != c {
            return Ok(false);
        }
        if spec.evaluate(&inverse.evaluate(&c)?)? != c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Inverse of a base-field permutation by interpolation through (Q(c), c).
pub fn invert_base_pp(tower: &FieldTower, q_poly: &Poly) -> Result<Poly> {
    if !is_permutation_poly(tower, Level::Fq, q_poly)? {
        return Err(Error::NotAPermutation);
    }
    let mut pts = Vec::with_capacity(tower.q() as usize);
    for c in tower.enumerate(Level::Fq)? {
        let v = tower.project_to_fq(&polyring::eval(tower, q_poly, &c)?)?;
        pts.push((v, c));
    }
    polyring::interpolate(tower, &pts)
}

/// Full value table of a map in canonical enumeration order, as output
/// element indices.
pub fn value_table(
    tower: &FieldTower,
    level: Level,
    map: impl Fn(&Elem) -> Result<Elem>,
) -> Result<Vec<u64>> {
    let size = tower.level_size(level);
    if size > tower.enum_bound() as u128 {
        return Err(Error::BoundExceeded {
            size,
            bound: tower.enum_bound(),
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    for c in tower.enumerate(level)? {
        out.push(tower.elem_index(&map(&c)?) as u64);
    }
    Ok(out)
}

/// Which criterion a sweep compares against the brute-force oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepMode {
    /// Random divisor g, criterion = the general theorem.
    General,
    /// g fixed to (xⁿ−1)/(x−1), criterion = the trace theorem.
    Trace,
    /// g fixed to the trace divisor, k = 1, criterion = the CPP corollary
    /// against the complete-mapping oracle.
    Cpp,
    /// g = (xⁿ−1)/(x−a), criterion = the twisted-trace theorem.
    Variant { a: Elem },
}

impl SweepMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMode::General => "general",
            SweepMode::Trace => "trace",
            SweepMode::Cpp => "cpp",
            SweepMode::Variant { .. } => "variant",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub trials: u64,
    pub seed: u64,
    pub mode: SweepMode,
    /// Degree bounds for the sampled f, h, k.
    pub deg_f: usize,
    pub deg_h: usize,
    pub deg_k: usize,
}

impl SweepConfig {
    pub fn new(trials: u64, seed: u64, mode: SweepMode, n: u32) -> SweepConfig {
        SweepConfig {
            trials,
            seed,
            mode,
            deg_f: n as usize + 1,
            deg_h: n as usize,
            deg_k: 2,
        }
    }
}

/// Result of an agreement sweep. `elapsed` is wall time and is excluded
/// from equality and from the serialized artifact so identical seeds give
/// identical reports.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub trials: u64,
    pub agreements: u64,
    pub disagreements: Vec<serde_json::Value>,
    pub seed: u64,
    pub mode: String,
    pub elapsed: Duration,
}

impl PartialEq for SweepReport {
    fn eq(&self, other: &Self) -> bool {
        self.trials == other.trials
            && self.agreements == other.agreements
            && self.disagreements == other.disagreements
            && self.seed == other.seed
            && self.mode == other.mode
    }
}

fn random_poly(
    tower: &FieldTower,
    level: Level,
    deg_bound: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Poly> {
    let size = tower.level_size(level);
    let coeffs = (0..=deg_bound)
        .map(|_| tower.elem_from_index(level, rng.gen_range(0..size)))
        .collect::<Result<Vec<_>>>()?;
    Poly::new(level, coeffs)
}

const K_REJECTION_CAP: u32 = 1000;

/// Rejection-samples k over F_q until it maps every point of `image` into
/// F_q^*.
fn sample_unit_k(
    tower: &FieldTower,
    image: &[Elem],
    deg_k: usize,
    stride: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Poly> {
    'reject: for _ in 0..K_REJECTION_CAP {
        // Coefficients only on exponents that are multiples of `stride`,
        // so twisted lines stay F_q-valued.
        let mut coeffs = vec![tower.zero(Level::Fq); deg_k * stride + 1];
        for j in 0..=deg_k {
            coeffs[j * stride] =
                tower.elem_from_index(Level::Fq, rng.gen_range(0..tower.q() as u128))?;
        }
        let k = Poly::new(Level::Fq, coeffs)?;
        for z in image {
            let v = polyring::eval(tower, &k, z)?;
            if v.is_zero() || !tower.is_in_fq(&v) {
                continue 'reject;
            }
        }
        return Ok(k);
    }
    Err(Error::RejectionCapExceeded)
}

/// Runs `trials` seeded random specs, comparing the selected criterion with
/// the brute-force oracle. Disagreements are serialized in full so a failing
/// sweep replays as a unit test.
pub fn agreement_sweep(tower: &Arc<FieldTower>, config: &SweepConfig) -> Result<SweepReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut agreements = 0u64;
    let mut disagreements = Vec::new();

    // Divisor pool for the general mode.
    let factor_set = cyclo_factor::factor_xn_minus_1(tower)?;
    let all_divisors = cyclo_factor::divisors(&factor_set)?;

    for _ in 0..config.trials {
        let (spec, criterion) = match &config.mode {
            SweepMode::General => {
                let g = all_divisors[rng.gen_range(0..all_divisors.len())].clone();
                let image = crate::linearized::image_set(tower, &g)?;
                let f = random_poly(tower, Level::Fqn, config.deg_f, &mut rng)?;
                let h = random_poly(tower, Level::Fq, config.deg_h, &mut rng)?;
                let k = sample_unit_k(tower, &image, config.deg_k, 1, &mut rng)?;
                let spec = PpSpec::new(Arc::clone(tower), f, g, h, k)?;
                let v = check_pp_general(&spec)?.is_pp;
                (spec, v)
            }
            SweepMode::Trace => {
                let g = cyclo_factor::trace_divisor(tower)?;
                let image = crate::linearized::image_set(tower, &g)?;
                let f = random_poly(tower, Level::Fqn, config.deg_f, &mut rng)?;
                let h = random_poly(tower, Level::Fq, config.deg_h, &mut rng)?;
                let k = sample_unit_k(tower, &image, config.deg_k, 1, &mut rng)?;
                let v = check_pp_trace(tower, &f, &h, &k)?.is_pp;
                (PpSpec::new(Arc::clone(tower), f, g, h, k)?, v)
            }
            SweepMode::Cpp => {
                let g = cyclo_factor::trace_divisor(tower)?;
                let f = random_poly(tower, Level::Fqn, config.deg_f, &mut rng)?;
                let h = random_poly(tower, Level::Fq, config.deg_h, &mut rng)?;
                let k = Poly::one(tower, Level::Fq);
                let v = check_cpp_trace(tower, &f, &h)?;
                (PpSpec::new(Arc::clone(tower), f, g, h, k)?, v)
            }
            SweepMode::Variant { a } => {
                let g = cyclo_factor::variant_divisor(tower, a)?;
                let image = crate::linearized::image_set(tower, &g)?;
                let f = random_poly(tower, Level::Fqn, config.deg_f, &mut rng)?;
                let h = random_poly(tower, Level::Fq, config.deg_h, &mut rng)?;
                // Stride by the multiplicative order of a so k stays
                // F_q-valued on the line δ·F_q.
                let mut ord = 1u32;
                let mut acc = a.clone();
                while acc != tower.one(Level::Fq) {
                    acc = tower.mul(&acc, a)?;
                    ord += 1;
                }
                let k = sample_unit_k(tower, &image, config.deg_k, ord as usize, &mut rng)?;
                let v = check_pp_variant(tower, &f, a, &h, &k)?.is_pp;
                (PpSpec::new(Arc::clone(tower), f, g, h, k)?, v)
            }
        };
        let oracle_verdict = match config.mode {
            SweepMode::Cpp => is_cpp_spec(&spec)?,
            _ => is_permutation_spec(&spec)?,
        };
        if criterion == oracle_verdict {
            agreements += 1;
        } else {
            disagreements.push(serial::pp_spec_to_json(&spec));
        }
    }
    Ok(SweepReport {
        trials: config.trials,
        agreements,
        disagreements,
        seed: config.seed,
        mode: config.mode.as_str().to_string(),
        elapsed: start.elapsed(),
    })
}
