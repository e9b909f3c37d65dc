//! Acceptance run: one line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::time::{Duration, Instant};

use lpq::arith::BezoutPair;
use lpq::classify::{verify_theorem1, FamilySpec};
use lpq::homogeneous::{
    curvature_report_with_bound, iota, kernel_basis, oneill_sec, oneill_terms, universal_bound,
    KernelBasis, LieAlgebraFrame, Vec7, VerticalSpace,
};
use lpq::homotopy::homotopy_equivalent;
use lpq::invariants::{invariant_set, invariant_set_with, invariant_triple, BundleParams, Sign, SmoothingChoice};
use lpq::rho::{monotonicity_check, rho_profile};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn params(p: i64, q: i64) -> BundleParams {
    BundleParams::new(p, q).unwrap()
}

const ADMISSIBLE_UP_TO_35: [i64; 11] = [5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35];

fn random_admissible(rng: &mut ChaCha8Rng) -> (i64, i64) {
    let r = ADMISSIBLE_UP_TO_35[rng.random_range(0..ADMISSIBLE_UP_TO_35.len())];
    common::random_params(rng, r, 50)
}

fn family_reproduction() -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0;
    for r in [5u64, 7, 11, 13, 25, 35] {
        for t in [0, 1, 2, r as i64 - 1] {
            total += 1;
            let v = verify_theorem1(&FamilySpec::new(r, t, -3, 3).unwrap()).unwrap();
            if let Some(c) = v.counterexample {
                failures.push(format!("r={r} t={t}: {} vs {}: {}", c.left, c.right, c.reason));
            } else if v.pairs_checked != 21 {
                failures.push(format!("r={r} t={t}: {} pairs checked", v.pairs_checked));
            }
        }
    }
    let detail = format!("{}/{total} families pass", total - failures.len());
    match failures.first() {
        None => outcome(true, detail),
        Some(first) => outcome(false, format!("{detail}; first failure {first}")),
    }
}

fn worked_example() -> Outcome {
    let mut checked = 0;
    for r in [5i64, 7, 11] {
        for t in 0..r {
            for l in [-2i64, 0, 1, 3] {
                let p = params(r, (t + l * r) * r);
                for (eps, e) in [(Sign::Plus, 1i64), (Sign::Minus, -1)] {
                    let choice = SmoothingChoice::new(1, eps, 0, BezoutPair::new(0, 1), r as u64).unwrap();
                    let [cubic, product, mixed] = invariant_triple(&p, &choice).unwrap().values();
                    let listed = [product, mixed, cubic];
                    let expected = [0, common::md(-e, r) as u64, common::md(t, r) as u64];
                    if listed != expected {
                        return outcome(false, format!("{p} ε={e}: {listed:?} ≠ {expected:?}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} cases equal (0, −ε, t) mod r"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut yes, mut no) = (0, 0);
    for r in (2..=15i64).filter(|&r| common::admissible(r)) {
        for _ in 0..50 {
            let a = common::random_params(&mut rng, r, 40);
            let b = common::random_params(&mut rng, r, 40);
            let ours = homotopy_equivalent(&params(a.0, a.1), &params(b.0, b.1)).unwrap().equivalent;
            if ours != common::exhaustive_equivalent(a, b) {
                return outcome(false, format!("{a:?} vs {b:?}: decision {ours} disagrees with search"));
            }
            if ours {
                yes += 1
            } else {
                no += 1
            }
        }
    }
    outcome(true, format!("{} pairs agree ({yes} equivalent, {no} not)", yes + no))
}

fn bezout_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (p, q) = random_admissible(&mut rng);
        let bp = params(p, q);
        let pairs: Vec<BezoutPair> = [0i64, 1, -1, 6]
            .iter()
            .map(|&c| bp.bezout().shifted(&BigInt::from(c), bp.p_bar(), bp.q_bar()))
            .collect();
        let base = invariant_set_with(&bp, &pairs[0]).unwrap();
        for pair in &pairs[1..] {
            if *pair == pairs[0] || !base.same_triples(&invariant_set_with(&bp, pair).unwrap()) {
                return outcome(false, format!("{bp} with {pair}"));
            }
        }
    }
    outcome(true, "100 params, 4 Bézout pairs each, identical sets")
}

fn swap_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let (p, q) = random_admissible(&mut rng);
        if !homotopy_equivalent(&params(p, q), &params(q, p)).unwrap().equivalent {
            return outcome(false, format!("L^{{{p},{q}}} vs L^{{{q},{p}}}"));
        }
    }
    outcome(true, "100 params equivalent to their swaps")
}

fn rho_soundness() -> Outcome {
    for r in (3..=199u64).step_by(2) {
        match monotonicity_check(r) {
            Ok(true) => {}
            other => return outcome(false, format!("monotonicity r={r}: {other:?}")),
        }
    }
    let (_, _, _, oracle) = common::RHO_ORACLE[0];
    let v = rho_profile(&params(5, 30)).unwrap().get(1).unwrap().abs_value();
    let pass = v.contains_decimal(oracle) && v.width_at_most(6);
    outcome(
        pass,
        format!(
            "odd r ≤ 199 monotone; |ρ(1)| of L^{{5,30}} in [{}, {}], oracle {}",
            v.lo_decimal(12),
            v.hi_decimal(12),
            &oracle[..16]
        ),
    )
}

fn random_horizontal(rng: &mut ChaCha8Rng, u: &Vec7, v: &Vec7) -> Vec7 {
    let w: Vec7 = std::array::from_fn(|_| rng.sample(StandardNormal));
    let p = common::oracle_project(&w, u, v);
    std::array::from_fn(|i| w[i] - p[i])
}

fn curvature() -> Outcome {
    let unit = kernel_basis(&params(1, 0));
    let (x, y) = (unit_vector(0), unit_vector(1));
    let hand = common::oracle_sec(&x, &y, &iota(&unit.a), &iota(&unit.b));
    let sec = oneill_sec(&unit, (&x, &y)).unwrap();
    if (sec - hand).abs() > 1e-9 || (hand - 2.5).abs() > 1e-12 {
        return outcome(false, format!("(X1, Y1) plane: {sec} vs hand value {hand}"));
    }

    let mut sweep: Vec<KernelBasis> = vec![unit];
    for r in [5i64, 7] {
        for t in [0i64, 1] {
            for k in -2..=2 {
                sweep.push(kernel_basis(&params(r, (t + k * r) * r)));
            }
        }
    }
    let frame = LieAlgebraFrame::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for kb in &sweep {
        let vertical = VerticalSpace::from_basis(kb).unwrap();
        let (u, v) = (iota(&kb.a), iota(&kb.b));
        for _ in 0..1000 {
            let x = random_horizontal(&mut rng, &u, &v);
            let y = random_horizontal(&mut rng, &u, &v);
            let terms = oneill_terms(&frame, &vertical, &x, &y);
            if terms.bi_invariant < 0.0 || terms.vertical < 0.0 {
                return outcome(false, format!("negative O'Neill term for {kb:?}"));
            }
        }
    }

    let samples = 100_000;
    let seed = 1;
    let bound = universal_bound(samples, seed);
    let mut worst_max = f64::NEG_INFINITY;
    let mut worst_min = f64::INFINITY;
    for kb in &sweep[1..] {
        let rep = curvature_report_with_bound(kb, samples, seed, bound.value).unwrap();
        worst_max = worst_max.max(rep.sec_max_sampled);
        worst_min = worst_min.min(rep.sec_min_sampled);
    }
    let pass = worst_max <= bound.value + 1e-9 && worst_min >= -1e-12;
    outcome(
        pass,
        format!(
            "(X1, Y1) plane {sec}; sweep of {} bases: max sec {worst_max:.12}, min sec {worst_min:.3e}, universal bound {:.12}",
            sweep.len() - 1,
            bound.value
        ),
    )
}

fn unit_vector(i: usize) -> Vec7 {
    let mut v = [0.0; 7];
    v[i] = 1.0;
    v
}

fn run_cli(args: &[&str], threads: Option<&str>) -> (u8, Vec<u8>) {
    match threads {
        Some(n) => std::env::set_var("LPQ_THREADS", n),
        None => std::env::remove_var("LPQ_THREADS"),
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = lpq::cli::run(std::iter::once("lpq").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["--format", "json", "classify", "5,5", "5,30", "5,10", "30,5", "7,7", "9,9", "-5,20"],
        &["--format", "csv", "classify", "5,5", "5,30", "5,10", "30,5", "7,7", "9,9", "-5,20"],
        &["--format", "json", "--seed", "11", "--samples", "20000", "curvature", "5", "30"],
        &["--format", "csv", "--seed", "11", "--samples", "20000", "curvature", "7", "-14"],
    ];
    for args in runs {
        let first = run_cli(args, None);
        if first.0 != 0 {
            return outcome(false, format!("{args:?} exited {}", first.0));
        }
        for threads in [None, Some("1"), Some("4")] {
            if run_cli(args, threads) != first {
                return outcome(false, format!("{args:?} differs with LPQ_THREADS={threads:?}"));
            }
        }
    }
    std::env::remove_var("LPQ_THREADS");
    outcome(true, "classify and curvature outputs byte-identical across repeats and thread counts")
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "family pairs equivalent and ρ-distinct", Some(Duration::from_secs(10)), family_reproduction),
        (2, "worked triple (0, −ε, t)", None, worked_example),
        (3, "fingerprint decision equals exhaustive search", Some(Duration::from_secs(60)), oracle_equivalence),
        (4, "Bézout independence", None, bezout_independence),
        (5, "swap symmetry", None, swap_symmetry),
        (6, "ρ soundness", Some(Duration::from_secs(5)), rho_soundness),
        (7, "curvature bounds", Some(Duration::from_secs(300)), curvature),
        (8, "determinism", None, determinism),
    ];
    // Warm up the shared thread pool so the first timed criterion is not charged for it.
    let _ = invariant_set(&params(5, 5));
    let mut failed = 0;
    for (n, title, limit, check) in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                result.pass = false;
                result.detail.push_str(&format!("; exceeded {}s", limit.as_secs()));
            }
        }
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {n} [{title}]: {} ({}; {:.2}s)",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
