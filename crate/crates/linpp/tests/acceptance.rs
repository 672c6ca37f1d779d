//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its timing. Everything is exact arithmetic; every comparison is equality
//! against an exhaustive enumeration oracle.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linpp::cyclo_factor;
use linpp::field_tower::{Elem, FieldTower, Level};
use linpp::linearized;
use linpp::oracle::{self, SweepConfig, SweepMode};
use linpp::polyring::{self, Poly};
use linpp::pp_engine::{
    check_cpp_trace, check_pp_trace, check_pp_variant, construct_cpp_from_base,
    construct_from_base_pp, enumerate_f_solutions, evaluate_inverse, expand_to_poly,
    invert_trace_pp, invert_variant_pp, iterate_construction, trace_spec, BaseConstructInput,
    PpSpec,
};

/// The (q, n) evaluation grid as tower parameters (p, k, n).
const GRID: [(u64, u32, u32); 8] = [
    (2, 1, 2),
    (2, 1, 3),
    (2, 1, 4),
    (3, 1, 2),
    (3, 1, 3),
    (2, 2, 2),
    (2, 2, 3),
    (5, 1, 2),
];

fn pass(criterion: u32, what: &str, start: Instant) {
    println!(
        "ACCEPTANCE {criterion}: PASS — {what} ({:.2?})",
        start.elapsed()
    );
}

/// All monic polynomials over F_q of degree between 0 and `max_deg`.
fn monic_polys(tower: &FieldTower, max_deg: u32) -> Vec<Poly> {
    let q = tower.q() as u128;
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let mut lows = vec![0u128; d as usize];
        loop {
            let mut idx = lows.clone();
            idx.push(1); // monic lead
            out.push(Poly::from_indices(tower, Level::Fq, &idx).unwrap());
            let mut pos = 0;
            loop {
                if pos == d as usize {
                    break;
                }
                lows[pos] += 1;
                if lows[pos] < q {
                    break;
                }
                lows[pos] = 0;
                pos += 1;
            }
            if pos == d as usize {
                break;
            }
        }
    }
    out
}

/// Independent linearized evaluator: Frobenius powers of `c` precomputed
/// once, then Σ aᵢ·c^(qⁱ) by direct lookup (exponents reduce mod n).
fn lin_eval_by_powers(tower: &FieldTower, assoc: &Poly, powers: &[Elem]) -> Elem {
    let n = tower.n() as usize;
    let mut acc = tower.zero(Level::Fqn);
    for (i, a) in assoc.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = tower.embed(a, Level::Fqn).unwrap();
        let term = tower.mul(&a, &powers[i % n]).unwrap();
        acc = tower.add(&acc, &term).unwrap();
    }
    acc
}

fn frobenius_powers(tower: &FieldTower, c: &Elem) -> Vec<Elem> {
    let mut powers = Vec::with_capacity(tower.n() as usize);
    let mut cur = c.clone();
    for j in 0..tower.n() {
        if j > 0 {
            cur = tower.pow(&cur, tower.q() as u128).unwrap();
        }
        powers.push(cur.clone());
    }
    powers
}

fn rand_poly(tower: &FieldTower, level: Level, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let size = tower.level_size(level);
    let coeffs: Vec<Elem> = (0..=deg)
        .map(|_| {
            tower
                .elem_from_index(level, rng.gen_range(0..size))
                .unwrap()
        })
        .collect();
    Poly::new(level, coeffs).unwrap()
}

/// Rejection-sampled k over F_q, unit-valued on `image`; coefficients sit on
/// exponent multiples of `stride`.
fn rand_unit_k(
    tower: &FieldTower,
    image: &[Elem],
    deg: usize,
    stride: usize,
    rng: &mut ChaCha8Rng,
) -> Poly {
    'reject: loop {
        let mut coeffs = vec![tower.zero(Level::Fq); deg * stride + 1];
        for j in 0..=deg {
            coeffs[j * stride] = tower
                .elem_from_index(Level::Fq, rng.gen_range(0..tower.q() as u128))
                .unwrap();
        }
        let k = Poly::new(Level::Fq, coeffs).unwrap();
        for z in image {
            let v = polyring::eval(tower, &k, z).unwrap();
            if v.is_zero() || !tower.is_in_fq(&v) {
                continue 'reject;
            }
        }
        return k;
    }
}

fn index_set(tower: &FieldTower, elems: &[Elem]) -> BTreeSet<u128> {
    elems.iter().map(|e| tower.elem_index(e)).collect()
}

#[test]
fn criterion_01_kernel_and_associate_laws() {
    let start = Instant::now();
    for (p, k, n) in GRID {
        let tower = FieldTower::build(p, k, n).unwrap();
        let xn1 = Poly::xn_minus_1(&tower, Level::Fq, n);
        let polys = monic_polys(&tower, n);
        let elems: Vec<Elem> = tower.enumerate(Level::Fqn).unwrap().collect();
        let powers: Vec<Vec<Elem>> = elems.iter().map(|c| frobenius_powers(&tower, c)).collect();

        // Value tables: table[fi][ci] = L_f(c_i), via the independent
        // evaluator. Composition then reduces to table lookups.
        let mut tables: Vec<Vec<Elem>> = Vec::with_capacity(polys.len());
        let mut kernels: Vec<BTreeSet<u128>> = Vec::with_capacity(polys.len());
        let mut kernel_by_key: HashMap<Vec<u128>, usize> = HashMap::new();
        for (fi, f) in polys.iter().enumerate() {
            let table: Vec<Elem> = (0..elems.len())
                .map(|ci| lin_eval_by_powers(&tower, f, &powers[ci]))
                .collect();
            let kernel_direct: BTreeSet<u128> = table
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_zero())
                .map(|(ci, _)| tower.elem_index(&elems[ci]))
                .collect();
            // Library kernel agrees with the independent evaluator.
            let lib_kernel = index_set(&tower, &linearized::kernel(&tower, f).unwrap());
            assert_eq!(lib_kernel, kernel_direct);
            let d = polyring::gcd(&tower, f, &xn1).unwrap();
            let expect = (tower.q() as u128).pow(d.degree().unwrap() as u32);
            assert_eq!(lib_kernel.len() as u128, expect, "kernel size law");
            let key: Vec<u128> = f.coeffs().iter().map(|c| tower.elem_index(c)).collect();
            kernel_by_key.insert(key, fi);
            kernels.push(kernel_direct);
            tables.push(table);
        }

        // Pairwise: intersection, additivity, and composition identities.
        for (fi, f) in polys.iter().enumerate() {
            for (gi, g) in polys.iter().enumerate() {
                let d = polyring::gcd(&tower, f, g).unwrap();
                let dkey: Vec<u128> = d.coeffs().iter().map(|c| tower.elem_index(c)).collect();
                let dker = &kernels[kernel_by_key[&dkey]];
                let inter: BTreeSet<u128> =
                    kernels[fi].intersection(&kernels[gi]).cloned().collect();
                assert_eq!(*dker, inter, "kernel intersection law");

                let sum = polyring::add(&tower, f, g).unwrap();
                let prod = polyring::mul(&tower, f, g).unwrap();
                for ci in 0..elems.len() {
                    let lf = &tables[fi][ci];
                    let lg = &tables[gi][ci];
                    // L_{f+g}(c) = L_f(c) + L_g(c).
                    let lsum = lin_eval_by_powers(&tower, &sum, &powers[ci]);
                    assert_eq!(lsum, tower.add(lf, lg).unwrap(), "additivity");
                    // L_f(L_g(c)) = L_{fg}(c), the left side by table lookup.
                    let composed = &tables[fi][tower.elem_index(lg) as usize];
                    let lprod = lin_eval_by_powers(&tower, &prod, &powers[ci]);
                    assert_eq!(*composed, lprod, "composition");
                }
            }
        }
    }
    pass(1, "kernel-size, intersection, additivity, composition laws", start);
}

#[test]
fn criterion_02_kernel_bijection_equivalence() {
    let start = Instant::now();
    for (p, k, n) in GRID {
        let tower = FieldTower::build(p, k, n).unwrap();
        let polys = monic_polys(&tower, n);
        let mut kernels: Vec<Vec<Elem>> = Vec::with_capacity(polys.len());
        for f in &polys {
            kernels.push(linearized::kernel(&tower, f).unwrap());
        }
        let mut disagreements = 0u64;
        for (fi, f) in polys.iter().enumerate() {
            let kernel_set = index_set(&tower, &kernels[fi]);
            for g in &polys {
                let claimed = linearized::permutes_kernel(&tower, f, g).unwrap();
                // Exhaustive: is c ↦ L_g(c) a bijection of kernel(f)?
                let mut image = BTreeSet::new();
                for v in &kernels[fi] {
                    image.insert(tower.elem_index(&linearized::lin_eval(&tower, g, v).unwrap()));
                }
                let actual = image == kernel_set;
                if claimed != actual {
                    disagreements += 1;
                }
            }
        }
        assert_eq!(disagreements, 0, "({p},{k},{n}) had disagreements");
    }
    pass(2, "gcd test for L_g restricted to kernels matches bijectivity", start);
}

#[test]
fn criterion_03_general_criterion_sweep() {
    let start = Instant::now();
    for (i, (p, k, n)) in GRID.iter().enumerate() {
        let tower = FieldTower::build(*p, *k, *n).unwrap();
        let config = SweepConfig::new(1000, 1000 + i as u64, SweepMode::General, *n);
        let report = oracle::agreement_sweep(&tower, &config).unwrap();
        assert_eq!(report.trials, 1000);
        assert_eq!(
            report.agreements, report.trials,
            "({p},{k},{n}): {} disagreements",
            report.disagreements.len()
        );
    }
    pass(3, "8000 random specs: general criterion agrees with the oracle", start);
}

#[test]
fn criterion_04_trace_criterion_and_inverses() {
    let start = Instant::now();
    // (q, n) = (2,2) and (3,3) exercise p | n; (3,2), (5,2), (4,3) p ∤ n.
    let towers = [(2u64, 1u32, 2u32), (3, 1, 3), (3, 1, 2), (5, 1, 2), (2, 2, 3)];
    let mut branch_counts = [0u64, 0u64]; // [p | n, p coprime n]
    for (ti, (p, k, n)) in towers.iter().enumerate() {
        let tower = FieldTower::build(*p, *k, *n).unwrap();
        let fq_elems: Vec<Elem> = tower.enumerate(Level::Fq).unwrap().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + ti as u64);
        for _ in 0..200 {
            let f = rand_poly(&tower, Level::Fqn, *n as usize + 1, &mut rng);
            let h = rand_poly(&tower, Level::Fq, *n as usize, &mut rng);
            let kp = rand_unit_k(&tower, &fq_elems, 2, 1, &mut rng);
            let claimed = check_pp_trace(&tower, &f, &h, &kp).unwrap().is_pp;
            let spec = trace_spec(&tower, f.clone(), h.clone(), kp.clone()).unwrap();
            let actual = oracle::is_permutation_spec(&spec).unwrap();
            assert_eq!(claimed, actual, "criterion/oracle disagreement");
            if claimed {
                let inverse = invert_trace_pp(&tower, &f, &h, &kp).unwrap();
                assert!(
                    oracle::verify_inverse(&spec, &inverse).unwrap(),
                    "inverse round-trip failed"
                );
                branch_counts[usize::from(*n as u64 % p != 0)] += 1;
            }
        }
    }
    assert!(
        branch_counts[0] >= 50,
        "p|n branch exercised only {} times",
        branch_counts[0]
    );
    assert!(
        branch_counts[1] >= 50,
        "p∤n branch exercised only {} times",
        branch_counts[1]
    );
    pass(
        4,
        &format!(
            "trace criterion + inverse round-trips (p|n: {}, p∤n: {})",
            branch_counts[0], branch_counts[1]
        ),
        start,
    );
}

#[test]
fn criterion_05_solution_counting() {
    let start = Instant::now();
    for (p, k, n) in [(2u64, 1u32, 2u32), (2, 1, 3)] {
        let tower = FieldTower::build(p, k, n).unwrap();
        // Fixed (b, h, k) = (x, x, 1): target b - h(1)·k·x = 0.
        let b = Poly::x(&tower, Level::Fq);
        let h = Poly::x(&tower, Level::Fq);
        let kp = Poly::one(&tower, Level::Fq);
        let h1 = polyring::eval(&tower, &h, &tower.one(Level::Fq)).unwrap();
        let kx = polyring::mul(&tower, &kp, &Poly::x(&tower, Level::Fq)).unwrap();
        let target = polyring::reduce_mod_xq_x(
            &tower,
            &polyring::sub(&tower, &b, &polyring::scalar_mul(&tower, &h1, &kx).unwrap())
                .unwrap(),
            tower.q(),
        )
        .unwrap();
        let solutions = enumerate_f_solutions(&tower, &target).unwrap();
        let expect = (tower.q() as u128)
            .pow((n - 1) * tower.q() as u32);
        assert_eq!(solutions.len() as u128, expect);
        // Every solution is a PP and the resulting permutation polynomials
        // are pairwise incongruent mod x^(q^n) - x.
        let mut reduced_forms = Vec::new();
        for f in &solutions {
            let spec = trace_spec(&tower, f.clone(), h.clone(), kp.clone()).unwrap();
            assert!(oracle::is_permutation_spec(&spec).unwrap());
            reduced_forms.push(expand_to_poly(&spec).unwrap());
        }
        for i in 0..solutions.len() {
            for j in i + 1..solutions.len() {
                assert_ne!(solutions[i], solutions[j], "duplicate f");
                assert_ne!(
                    reduced_forms[i], reduced_forms[j],
                    "congruent permutation polynomials"
                );
            }
        }
    }
    pass(5, "trace-congruence solution counts 4 and 16, all distinct PPs", start);
}

#[test]
fn criterion_06_cpp_suite() {
    let start = Instant::now();
    let towers = [(3u64, 1u32, 2u32), (5, 1, 2), (2, 2, 3)];
    for (ti, (p, k, n)) in towers.iter().enumerate() {
        let tower = FieldTower::build(*p, *k, *n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + ti as u64);
        for _ in 0..200 {
            let f = rand_poly(&tower, Level::Fqn, *n as usize + 1, &mut rng);
            let h = rand_poly(&tower, Level::Fq, *n as usize, &mut rng);
            let claimed = check_cpp_trace(&tower, &f, &h).unwrap();
            let spec = trace_spec(&tower, f, h, Poly::one(&tower, Level::Fq)).unwrap();
            let actual = oracle::is_cpp_spec(&spec).unwrap();
            assert_eq!(claimed, actual, "CPP criterion/oracle disagreement");
        }
    }
    // Constructions from base CPPs always pass the CPP oracle.
    let tw = FieldTower::build(3, 1, 2).unwrap();
    let b = Poly::x(&tw, Level::Fq);
    let h = Poly::one(&tw, Level::Fq);
    for seed in [0u64, 1, 2] {
        let (_, spec) = construct_cpp_from_base(&tw, &b, &h, seed).unwrap();
        assert!(oracle::is_cpp_spec(&spec).unwrap());
    }
    let tw = FieldTower::build(5, 1, 2).unwrap();
    let b = Poly::from_indices(&tw, Level::Fq, &[0, 2]).unwrap();
    let h = Poly::from_indices(&tw, Level::Fq, &[2]).unwrap();
    for seed in [0u64, 7] {
        let (_, spec) = construct_cpp_from_base(&tw, &b, &h, seed).unwrap();
        assert!(oracle::is_cpp_spec(&spec).unwrap());
    }
    let tw = FieldTower::build(2, 2, 3).unwrap();
    let omega = tw.elem_from_index(Level::Fq, 2).unwrap();
    let b = Poly::new(Level::Fq, vec![tw.zero(Level::Fq), omega]).unwrap();
    let h = Poly::x(&tw, Level::Fq);
    for seed in [0u64, 3] {
        let (_, spec) = construct_cpp_from_base(&tw, &b, &h, seed).unwrap();
        assert!(oracle::is_cpp_spec(&spec).unwrap());
    }
    pass(6, "CPP criterion matches oracle; CPP lifts verified", start);
}

#[test]
fn criterion_07_variant_suite() {
    let start = Instant::now();
    // (q, n, a): a = 2 in F_3, a = ω in F_4 (n = 3), a = 4 = -1 in F_5.
    let cases: [(u64, u32, u32, u128); 3] = [(3, 1, 2, 2), (2, 2, 3, 2), (5, 1, 2, 4)];
    for (ci, (p, k, n, a_idx)) in cases.iter().enumerate() {
        let tower = FieldTower::build(*p, *k, *n).unwrap();
        let a = tower.elem_from_index(Level::Fq, *a_idx).unwrap();

        // δ-solver postcondition, exact.
        let delta = tower.solve_delta(&a).unwrap();
        assert!(!delta.is_zero());
        assert_eq!(
            tower.pow(&delta, tower.q() as u128).unwrap(),
            tower
                .mul(&tower.embed(&a, Level::Fqn).unwrap(), &delta)
                .unwrap()
        );

        // Criterion vs oracle over 200 seeded specs.
        let config = SweepConfig::new(
            200,
            7000 + ci as u64,
            SweepMode::Variant { a: a.clone() },
            *n,
        );
        let report = oracle::agreement_sweep(&tower, &config).unwrap();
        assert_eq!(report.agreements, report.trials);

        // Variant inverses round-trip for every PP found in a fresh sample.
        let g = cyclo_factor::variant_divisor(&tower, &a).unwrap();
        let image = linearized::image_set(&tower, &g).unwrap();
        let mut ord = 1u32;
        let mut acc = a.clone();
        while acc != tower.one(Level::Fq) {
            acc = tower.mul(&acc, &a).unwrap();
            ord += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7100 + ci as u64);
        let mut inverted = 0u64;
        for _ in 0..200 {
            let f = rand_poly(&tower, Level::Fqn, *n as usize + 1, &mut rng);
            let h = rand_poly(&tower, Level::Fq, *n as usize, &mut rng);
            let kp = rand_unit_k(&tower, &image, 2, ord as usize, &mut rng);
            if !check_pp_variant(&tower, &f, &a, &h, &kp).unwrap().is_pp {
                continue;
            }
            let inverse = invert_variant_pp(&tower, &f, &a, &h, &kp).unwrap();
            let spec =
                PpSpec::new(Arc::clone(&tower), f, g.clone(), h, kp).unwrap();
            assert!(oracle::verify_inverse(&spec, &inverse).unwrap());
            inverted += 1;
        }
        assert!(inverted > 0, "no variant PPs found for case {ci}");

        // a = 1 specializes to the trace case, function for function.
        let one_fq = tower.one(Level::Fq);
        let mut rng = ChaCha8Rng::seed_from_u64(7200 + ci as u64);
        let fq_elems: Vec<Elem> = tower.enumerate(Level::Fq).unwrap().collect();
        for _ in 0..40 {
            let f = rand_poly(&tower, Level::Fqn, *n as usize + 1, &mut rng);
            let h = rand_poly(&tower, Level::Fq, *n as usize, &mut rng);
            let kp = rand_unit_k(&tower, &fq_elems, 2, 1, &mut rng);
            let via_variant = check_pp_variant(&tower, &f, &one_fq, &h, &kp)
                .unwrap()
                .is_pp;
            let via_trace = check_pp_trace(&tower, &f, &h, &kp).unwrap().is_pp;
            assert_eq!(via_variant, via_trace);
            if via_trace {
                let inv_t = invert_trace_pp(&tower, &f, &h, &kp).unwrap();
                let inv_v = invert_variant_pp(&tower, &f, &one_fq, &h, &kp).unwrap();
                for c in tower.enumerate(Level::Fqn).unwrap() {
                    assert_eq!(
                        evaluate_inverse(&inv_t, &c).unwrap(),
                        evaluate_inverse(&inv_v, &c).unwrap()
                    );
                }
            }
        }
    }
    pass(7, "twisted-divisor criterion, inverses, and a=1 specialization", start);
}

#[test]
fn criterion_08_factorization() {
    let start = Instant::now();
    for (p, k, n) in GRID {
        let tower = FieldTower::build(p, k, n).unwrap();
        let fs = cyclo_factor::factor_xn_minus_1(&tower).unwrap();
        // Product reconstructs x^n - 1 exactly.
        assert_eq!(
            fs.product().unwrap(),
            Poly::xn_minus_1(&tower, Level::Fq, n)
        );
        // Squarefree iff p does not divide n.
        let squarefree = fs.factors().iter().all(|(_, m)| *m == 1);
        assert_eq!(squarefree, n as u64 % p != 0);
        // Irreducibility by trial division over F_q.
        for (factor, _) in fs.factors() {
            let d = factor.degree().unwrap();
            assert!(d >= 1);
            assert!(factor.is_monic(&tower));
            for cand in monic_polys(&tower, (d / 2) as u32) {
                if cand.degree() == Some(0) {
                    continue;
                }
                assert!(
                    !polyring::divides(&tower, &cand, factor).unwrap(),
                    "({p},{k},{n}): reducible factor found"
                );
            }
        }
    }
    pass(8, "x^n-1 factorizations reconstruct, irreducible, squarefree iff p∤n", start);
}

#[test]
fn criterion_09_two_level_iteration() {
    let start = Instant::now();
    // (q, n) = (2, 2): F_4 then F_16.
    let tw = FieldTower::build(2, 1, 2).unwrap();
    let tw2 = FieldTower::build(2, 2, 2).unwrap();
    let chain = iterate_construction(
        &tw,
        &Poly::x(&tw, Level::Fq),
        &[
            (Poly::x(&tw, Level::Fq), Poly::one(&tw, Level::Fq), 90),
            (Poly::one(&tw2, Level::Fq), Poly::one(&tw2, Level::Fq), 91),
        ],
    )
    .unwrap();
    assert_eq!(chain.len(), 2);
    assert_eq!(chain[0].tower.qn(), 4);
    assert_eq!(chain[1].tower.qn(), 16);
    for level in &chain {
        assert!(oracle::is_permutation_spec(&level.spec).unwrap());
    }
    // (q, n) = (3, 2): F_9 then F_81.
    let tw = FieldTower::build(3, 1, 2).unwrap();
    let tw2 = FieldTower::build(3, 2, 2).unwrap();
    let chain = iterate_construction(
        &tw,
        &Poly::from_indices(&tw, Level::Fq, &[1, 2]).unwrap(),
        &[
            (Poly::one(&tw, Level::Fq), Poly::one(&tw, Level::Fq), 92),
            (Poly::x(&tw2, Level::Fq), Poly::one(&tw2, Level::Fq), 93),
        ],
    )
    .unwrap();
    assert_eq!(chain[1].tower.qn(), 81);
    for level in &chain {
        assert!(oracle::is_permutation_spec(&level.spec).unwrap());
    }
    pass(9, "two-level lifts verified over F_16 and F_81", start);
}

#[test]
fn criterion_10_cli_determinism_and_pipeline() {
    use std::process::Command;
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_linpp");
    let dir = tempdir();

    // Three seeded construct cases: (p,k,n), b, h, seed.
    let cases: [(&[&str], &str); 3] = [
        (&["--p", "2", "--n", "2"], "case_a"),
        (&["--p", "3", "--n", "2"], "case_b"),
        (&["--p", "2", "--k", "2", "--n", "3"], "case_c"),
    ];
    let params: [(&str, &str, &str); 3] = [
        ("0,1", "0,1", "3"),
        ("1,2", "1", "11"),
        ("0/0,1/0", "1/0", "5"),
    ];
    for ((tower_args, name), (b, h, seed)) in cases.iter().zip(params.iter()) {
        let mut args = vec!["construct"];
        args.extend_from_slice(tower_args);
        args.extend_from_slice(&["--b", b, "--h", h, "--seed", seed]);
        // Byte-identical artifacts across repeated invocations.
        let out1 = Command::new(bin).args(&args).output().unwrap();
        let out2 = Command::new(bin).args(&args).output().unwrap();
        assert!(out1.status.success(), "construct failed for {name}");
        assert_eq!(out1.stdout, out2.stdout, "{name} artifact not reproducible");

        let spec_path = dir.join(format!("{name}.json"));
        std::fs::write(&spec_path, &out1.stdout).unwrap();
        let spec_arg = spec_path.to_str().unwrap();

        // verify exits 0.
        let v = Command::new(bin)
            .args(["verify", "--spec", spec_arg])
            .output()
            .unwrap();
        assert!(v.status.success(), "verify failed for {name}");

        // invert, then compose the two tables into the identity.
        let inv_path = dir.join(format!("{name}_inv.json"));
        let inv = Command::new(bin)
            .args(["invert", "--spec", spec_arg])
            .output()
            .unwrap();
        assert!(inv.status.success());
        std::fs::write(&inv_path, &inv.stdout).unwrap();

        let fwd = table_of(bin, spec_arg);
        let bwd = table_of(bin, inv_path.to_str().unwrap());
        assert_eq!(fwd.len(), bwd.len());
        for (i, &v) in fwd.iter().enumerate() {
            assert_eq!(bwd[v as usize] as usize, i, "{name} did not close to identity");
        }
    }

    // Sweep artifacts are reproducible too.
    let sweep_args = [
        "sweep", "--p", "2", "--n", "3", "--trials", "40", "--seed", "9", "--mode", "trace",
    ];
    let s1 = Command::new(bin).args(sweep_args).output().unwrap();
    let s2 = Command::new(bin).args(sweep_args).output().unwrap();
    assert!(s1.status.success());
    assert_eq!(s1.stdout, s2.stdout);
    pass(10, "CLI artifacts byte-identical; pipeline closes to identity", start);
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("linpp-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn table_of(bin: &str, spec: &str) -> Vec<u64> {
    let out = std::process::Command::new(bin)
        .args(["table", "--spec", spec, "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).unwrap()
}
