//! Lifting base-field permutations to extension-field permutations by
//! solving the coefficient-wise trace system, and iterating the lift up the
//! tower F_q, F_{q^n}, F_{q^(n²)}, …

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo_factor;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldTower, Level};
use crate::polyring::{self, Poly};

use super::trace::permutes_fq;
use super::{expand_to_poly, trace_spec, PpSpec};

/// Inputs for lifting a base permutation b of F_q to F_{q^n}.
#[derive(Debug, Clone)]
pub struct BaseConstructInput {
    /// A permutation polynomial of F_q (validated against the oracle).
    pub b: Poly,
    /// Must satisfy gcd(h, (xⁿ−1)/(x−1)) = 1.
    pub h: Poly,
    /// Must map F_q into F_q^*.
    pub k: Poly,
    /// Seed for choosing among the q^((n−1)q) admissible f.
    pub sampler_seed: u64,
}

/// One solution y with Tr(y) = target, shifted by a seeded trace-zero
/// element θ^q − θ. As θ ranges over F_{q^n} the shift covers the whole
/// trace-zero hyperplane, so every fiber element is reachable.
fn solve_trace_fiber(
    tower: &FieldTower,
    target: &Elem,
    alpha: &Elem,
    alpha_scale: &Elem,
    rng: &mut ChaCha8Rng,
) -> Result<Elem> {
    let target = tower.project_to_fq(target)?;
    let coef = tower.mul(&target, alpha_scale)?;
    let particular = tower.mul(&tower.embed(&coef, Level::Fqn)?, alpha)?;
    let theta = tower.elem_from_index(Level::Fqn, rng.gen_range(0..tower.qn()))?;
    let shift = tower.sub(&tower.pow(&theta, tower.q() as u128)?, &theta)?;
    tower.add(&particular, &shift)
}

fn validate_k_unit_on_fq(tower: &FieldTower, k: &Poly) -> Result<()> {
    for t in tower.enumerate(Level::Fq)? {
        let v = polyring::eval(tower, k, &t)?;
        if v.is_zero() || !tower.is_in_fq(&v) {
            return Err(Error::KNotUnitValued);
        }
    }
    Ok(())
}

/// Solves T_n[f] ≡ b − h(1)·k·x (mod x^q−x) for f of degree < q and returns
/// (f, spec) with g = (xⁿ−1)/(x−1). The resulting spec is a PP of F_{q^n}.
pub fn construct_from_base_pp(
    tower: &Arc<FieldTower>,
    input: &BaseConstructInput,
) -> Result<(Poly, PpSpec)> {
    if !permutes_fq(tower, |t| polyring::eval(tower, &input.b, t))? {
        return Err(Error::BaseNotPp);
    }
    let g = cyclo_factor::trace_divisor(tower)?;
    if polyring::gcd(tower, &input.h, &g)?.degree() != Some(0) {
        return Err(Error::HNotCoprime);
    }
    validate_k_unit_on_fq(tower, &input.k)?;

    // Target t(x) = b(x) − h(1)·k(x)·x reduced mod x^q−x; then
    // Tr(y_i) = t_i coefficient-wise.
    let h1 = polyring::eval(tower, &input.h, &tower.one(Level::Fq))?;
    let kx = polyring::mul(tower, &input.k, &Poly::x(tower, Level::Fq))?;
    let lin = polyring::scalar_mul(tower, &h1, &kx)?;
    let target = polyring::reduce_mod_xq_x(
        tower,
        &polyring::sub(tower, &input.b, &lin)?,
        tower.q(),
    )?;

    let alpha = tower.find_nonzero_trace_element()?;
    let alpha_scale = tower.inv(&tower.trace_qn_q(&alpha)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(input.sampler_seed);
    let mut ys = Vec::with_capacity(tower.q() as usize);
    for i in 0..tower.q() as usize {
        let ti = target.coeff(tower, i);
        ys.push(solve_trace_fiber(tower, &ti, &alpha, &alpha_scale, &mut rng)?);
    }
    let f = Poly::new(Level::Fqn, ys)?;
    let spec = trace_spec(tower, f.clone(), input.h.clone(), input.k.clone())?;
    Ok((f, spec))
}

/// CPP lift with k = 1: requires b a CPP of F_q and
/// gcd(h·(h+1), (xⁿ−1)/(x−1)) = 1; the output passes the CPP criterion.
pub fn construct_cpp_from_base(
    tower: &Arc<FieldTower>,
    b: &Poly,
    h: &Poly,
    sampler_seed: u64,
) -> Result<(Poly, PpSpec)> {
    let b_pp = permutes_fq(tower, |t| polyring::eval(tower, b, t))?;
    let b_plus_pp = permutes_fq(tower, |t| {
        tower.add(&tower.project_to_fq(&polyring::eval(tower, b, t)?)?, t)
    })?;
    if !b_pp || !b_plus_pp {
        return Err(Error::BaseNotCpp);
    }
    let g = cyclo_factor::trace_divisor(tower)?;
    let h_plus_1 = polyring::add(tower, h, &Poly::one(tower, Level::Fq))?;
    let prod = polyring::mul(tower, h, &h_plus_1)?;
    if polyring::gcd(tower, &prod, &g)?.degree() != Some(0) {
        return Err(Error::HConditionFailed);
    }
    let input = BaseConstructInput {
        b: b.clone(),
        h: h.clone(),
        k: Poly::one(tower, Level::Fq),
        sampler_seed,
    };
    construct_from_base_pp(tower, &input)
}

/// All f of degree < q with T_n[f] = target coefficient-wise: the Cartesian
/// product of the q trace fibers, q^((n−1)q) polynomials in total.
pub fn enumerate_f_solutions(tower: &FieldTower, target: &Poly) -> Result<Vec<Poly>> {
    let q = tower.q() as usize;
    if target.degree().map_or(false, |d| d >= q) {
        return Err(Error::InvalidInput("target degree must be < q".into()));
    }
    let total = (tower.qn() / tower.q() as u128).pow(tower.q() as u32);
    if total > 1 << 20 {
        return Err(Error::BoundExceeded {
            size: total,
            bound: 1 << 20,
        });
    }
    // Fibers: for each coefficient index, all y with Tr(y) = target_i.
    let mut fibers: Vec<Vec<Elem>> = Vec::with_capacity(q);
    for i in 0..q {
        let ti = tower.project_to_fq(&target.coeff(tower, i))?;
        let mut fiber = Vec::new();
        for y in tower.enumerate(Level::Fqn)? {
            if tower.trace_qn_q(&y)? == ti {
                fiber.push(y);
            }
        }
        fibers.push(fiber);
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut picks = vec![0usize; q];
    loop {
        let coeffs: Vec<Elem> = (0..q).map(|i| fibers[i][picks[i]].clone()).collect();
        out.push(Poly::new(Level::Fqn, coeffs)?);
        let mut pos = q;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            picks[pos] += 1;
            if picks[pos] < fibers[pos].len() {
                break;
            }
            picks[pos] = 0;
        }
    }
}

/// One level of an iterated construction.
#[derive(Debug, Clone)]
pub struct IterLevel {
    pub tower: Arc<FieldTower>,
    pub f: Poly,
    pub spec: PpSpec,
}

/// Deterministic field isomorphism from the top level of `src` onto the base
/// level of `dst`, where |src.Fqn| = |dst.Fq|. Maps the residue class of
/// dst's base modulus to its first root in src (canonical enumeration order)
/// and inverts the change of basis by Gaussian elimination over F_p.
struct FlattenIso {
    dim: usize,
    p: u64,
    /// Row-major inverse change-of-basis matrix over F_p.
    inverse: Vec<Vec<u64>>,
}

impl FlattenIso {
    fn build(src: &FieldTower, dst: &FieldTower) -> Result<FlattenIso> {
        let dim = (src.k() * src.n()) as usize;
        if src.p() != dst.p() || dst.k() as usize != dim {
            return Err(Error::InvalidInput(
                "towers are not a flattening pair".into(),
            ));
        }
        // Root of dst.mod_q (degree dim over F_p) inside src.Fqn.
        let modulus: Vec<Elem> = dst
            .mod_q()
            .iter()
            .map(|&c| src.from_int(Level::Fqn, c))
            .collect();
        let mod_poly = Poly::new(Level::Fqn, modulus)?;
        let mut root = None;
        for c in src.enumerate(Level::Fqn)? {
            if polyring::eval(src, &mod_poly, &c)?.is_zero() {
                root = Some(c);
                break;
            }
        }
        let root = root.ok_or(Error::NoSolution)?;
        // Columns: coordinates of root^j over F_p.
        let mut cols = Vec::with_capacity(dim);
        let mut pw = src.one(Level::Fqn);
        for j in 0..dim {
            if j > 0 {
                pw = src.mul(&pw, &root)?;
            }
            cols.push(pw.coeffs().to_vec());
        }
        let inverse = invert_matrix_mod_p(&cols, dim, src.p())?;
        Ok(FlattenIso {
            dim,
            p: src.p(),
            inverse,
        })
    }

    /// Coordinates of a src.Fqn element in the dst.Fq basis.
    fn map(&self, e: &Elem) -> Vec<u64> {
        (0..self.dim)
            .map(|r| {
                let mut acc = 0u128;
                for c in 0..self.dim {
                    acc += self.inverse[r][c] as u128 * e.coeffs()[c] as u128;
                }
                (acc % self.p as u128) as u64
            })
            .collect()
    }
}

/// Inverts the matrix whose columns are given, over F_p.
fn invert_matrix_mod_p(cols: &[Vec<u64>], dim: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    let fp = crate::dense::FpField { p };
    use crate::dense::Field;
    // Augmented [M | I], row-major.
    let mut m: Vec<Vec<u64>> = (0..dim)
        .map(|r| {
            let mut row: Vec<u64> = (0..dim).map(|c| cols[c][r]).collect();
            row.extend((0..dim).map(|c| u64::from(c == r)));
            row
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim)
            .find(|&r| m[r][col] != 0)
            .ok_or(Error::NoSolution)?;
        m.swap(col, pivot);
        let inv = fp.inv(&m[col][col]).unwrap();
        for v in m[col].iter_mut() {
            *v = fp.mul(v, &inv);
        }
        for r in 0..dim {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..2 * dim {
                    let t = fp.mul(&factor, &m[col][c]);
                    m[r][c] = fp.sub(&m[r][c], &t);
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[dim..].to_vec()).collect())
}

/// Iterates the base-permutation lift: level i builds a PP of F_{q^(nⁱ)}.
/// Each level's explicit polynomial is reduced mod x^Q−x (Q the current
/// field size) and carried into the next tower through the flattening
/// isomorphism.
pub fn iterate_construction(
    tower0: &Arc<FieldTower>,
    b: &Poly,
    per_level: &[(Poly, Poly, u64)],
) -> Result<Vec<IterLevel>> {
    let mut levels = Vec::with_capacity(per_level.len());
    let mut tower = Arc::clone(tower0);
    let mut base = b.clone();
    for (i, (h, k, seed)) in per_level.iter().enumerate() {
        let expect = tower.level_len(Level::Fq);
        for poly in [h, k] {
            if poly.level() != Level::Fq
                || poly.coeffs().iter().any(|c| c.coeffs().len() != expect)
            {
                return Err(Error::InvalidInput(format!(
                    "level {i} parameters do not match the level tower"
                )));
            }
        }
        let input = BaseConstructInput {
            b: base.clone(),
            h: h.clone(),
            k: k.clone(),
            sampler_seed: *seed,
        };
        let (f, spec) = construct_from_base_pp(&tower, &input)?;
        levels.push(IterLevel {
            tower: Arc::clone(&tower),
            f,
            spec: spec.clone(),
        });
        if i + 1 == per_level.len() {
            break;
        }
        // Hand the permutation on as a base polynomial of the next tower.
        let expanded = expand_to_poly(&spec)?;
        let next = FieldTower::build_with_bound(
            tower.p(),
            tower.k() * tower.n(),
            tower.n(),
            tower.enum_bound(),
        )?;
        let iso = FlattenIso::build(&tower, &next)?;
        let coeffs = expanded
            .coeffs()
            .iter()
            .map(|c| next.elem_from_coeffs(Level::Fq, &iso.map(c)))
            .collect::<Result<Vec<_>>>()?;
        base = Poly::new(Level::Fq, coeffs)?;
        tower = next;
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::pp_engine::check_pp_trace;

    #[test]
    fn identity_construction() {
        // b=x, h=1, k=1, p∤n: target is 0, so f has all-zero traces.
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let input = BaseConstructInput {
            b: Poly::x(&tw, Level::Fq),
            h: Poly::one(&tw, Level::Fq),
            k: Poly::one(&tw, Level::Fq),
            sampler_seed: 1,
        };
        let (f, spec) = construct_from_base_pp(&tw, &input).unwrap();
        assert!(t_n_is_zero(&tw, &f));
        assert!(oracle::is_permutation_spec(&spec).unwrap());
    }

    fn t_n_is_zero(tw: &FieldTower, f: &Poly) -> bool {
        super::super::t_n(tw, f).unwrap().is_zero()
    }

    #[test]
    fn frobenius_construction() {
        // q=2, n=2, b=x, h=x, k=1: t = x − x = 0.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let input = BaseConstructInput {
            b: Poly::x(&tw, Level::Fq),
            h: Poly::x(&tw, Level::Fq),
            k: Poly::one(&tw, Level::Fq),
            sampler_seed: 0,
        };
        let (_, spec) = construct_from_base_pp(&tw, &input).unwrap();
        assert!(check_pp_trace(&tw, spec.f(), spec.h(), spec.k()).unwrap().is_pp);
        assert!(oracle::is_permutation_spec(&spec).unwrap());
    }

    #[test]
    fn construction_guards() {
        let tw = FieldTower::build(2, 1, 2).unwrap();
        // b constant → not a PP.
        let input = BaseConstructInput {
            b: Poly::one(&tw, Level::Fq),
            h: Poly::one(&tw, Level::Fq),
            k: Poly::one(&tw, Level::Fq),
            sampler_seed: 0,
        };
        assert!(matches!(
            construct_from_base_pp(&tw, &input),
            Err(Error::BaseNotPp)
        ));
        // h sharing a factor with the trace divisor.
        let input = BaseConstructInput {
            b: Poly::x(&tw, Level::Fq),
            h: cyclo_factor::trace_divisor(&tw).unwrap(),
            k: Poly::one(&tw, Level::Fq),
            sampler_seed: 0,
        };
        assert!(matches!(
            construct_from_base_pp(&tw, &input),
            Err(Error::HNotCoprime)
        ));
    }

    #[test]
    fn counting_solutions_q2_n2() {
        // q=2, n=2, b=x, h=x, k=1: target 0; exactly q^((n-1)q) = 4
        // solutions, pairwise distinct, all PPs.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let target = Poly::zero(Level::Fq);
        let sols = enumerate_f_solutions(&tw, &target).unwrap();
        assert_eq!(sols.len(), 4);
        for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                assert_ne!(sols[i], sols[j]);
            }
        }
        let h = Poly::x(&tw, Level::Fq);
        let k = Poly::one(&tw, Level::Fq);
        for f in &sols {
            let spec = trace_spec(&tw, f.clone(), h.clone(), k.clone()).unwrap();
            assert!(oracle::is_permutation_spec(&spec).unwrap());
        }
    }

    #[test]
    fn seeded_sampler_is_reproducible_and_solves() {
        let tw = FieldTower::build(2, 2, 3).unwrap();
        let b = Poly::x(&tw, Level::Fq);
        let h = Poly::one(&tw, Level::Fq);
        let k = Poly::one(&tw, Level::Fq);
        let mk = |seed| BaseConstructInput {
            b: b.clone(),
            h: h.clone(),
            k: k.clone(),
            sampler_seed: seed,
        };
        let (f1, _) = construct_from_base_pp(&tw, &mk(42)).unwrap();
        let (f2, _) = construct_from_base_pp(&tw, &mk(42)).unwrap();
        assert_eq!(f1, f2);
        // Trace condition holds regardless of seed.
        let (f3, spec3) = construct_from_base_pp(&tw, &mk(43)).unwrap();
        assert_eq!(super::super::t_n(&tw, &f3).unwrap(), super::super::t_n(&tw, &f1).unwrap());
        assert!(oracle::is_permutation_spec(&spec3).unwrap());
    }

    #[test]
    fn cpp_construction_and_guard() {
        // q=5, n=3, b=2x, h=2: both P and P+x permute F_125.
        let tw = FieldTower::build(5, 1, 3).unwrap();
        let b = Poly::from_indices(&tw, Level::Fq, &[0, 2]).unwrap();
        let h = Poly::from_indices(&tw, Level::Fq, &[2]).unwrap();
        let (_, spec) = construct_cpp_from_base(&tw, &b, &h, 9).unwrap();
        assert!(oracle::is_cpp_spec(&spec).unwrap());
        assert!(super::super::check_cpp_trace(&tw, spec.f(), spec.h()).unwrap());

        // 2x over F_3: 2x + x = 0 is not a PP → BaseNotCpp.
        let tw3 = FieldTower::build(3, 1, 2).unwrap();
        let b3 = Poly::from_indices(&tw3, Level::Fq, &[0, 2]).unwrap();
        let h3 = Poly::one(&tw3, Level::Fq);
        assert!(matches!(
            construct_cpp_from_base(&tw3, &b3, &h3, 0),
            Err(Error::BaseNotCpp)
        ));
    }

    #[test]
    fn cpp_seeds_differ_but_both_pass() {
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let b = Poly::x(&tw, Level::Fq); // x is a CPP of F_3 (x and 2x both PPs)
        let h = Poly::from_indices(&tw, Level::Fq, &[1]).unwrap();
        let (f0, s0) = construct_cpp_from_base(&tw, &b, &h, 0).unwrap();
        let (f1, s1) = construct_cpp_from_base(&tw, &b, &h, 12345).unwrap();
        assert_ne!(f0, f1);
        assert!(oracle::is_cpp_spec(&s0).unwrap());
        assert!(oracle::is_cpp_spec(&s1).unwrap());
    }

    #[test]
    fn two_level_iteration_q2() {
        // (q, n) = (2, 2): level 1 permutes F_4, level 2 permutes F_16.
        let tw = FieldTower::build(2, 1, 2).unwrap();
        let b = Poly::x(&tw, Level::Fq);
        let l1 = (
            Poly::x(&tw, Level::Fq),
            Poly::one(&tw, Level::Fq),
            7u64,
        );
        let tw2 = FieldTower::build(2, 2, 2).unwrap();
        let l2 = (
            Poly::x(&tw2, Level::Fq),
            Poly::one(&tw2, Level::Fq),
            8u64,
        );
        let chain = iterate_construction(&tw, &b, &[l1, l2]).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[1].tower.qn(), 16);
        for level in &chain {
            assert!(oracle::is_permutation_spec(&level.spec).unwrap());
        }
    }

    #[test]
    fn single_level_iteration_reduces_to_construct() {
        let tw = FieldTower::build(3, 1, 2).unwrap();
        let b = Poly::x(&tw, Level::Fq);
        let params = (Poly::one(&tw, Level::Fq), Poly::one(&tw, Level::Fq), 3u64);
        let chain = iterate_construction(&tw, &b, &[params.clone()]).unwrap();
        assert_eq!(chain.len(), 1);
        let input = BaseConstructInput {
            b,
            h: params.0,
            k: params.1,
            sampler_seed: params.2,
        };
        let (f, _) = construct_from_base_pp(&tw, &input).unwrap();
        assert_eq!(chain[0].f, f);
    }
}
