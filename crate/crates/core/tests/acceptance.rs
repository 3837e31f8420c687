//! One pass/fail line per acceptance criterion. Run with `--nocapture` to see
//! the lines; the test fails if any criterion fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use bfc::bks::{gamma_search, majority_w1};
use bfc::enumeration::canonical::canonicalize;
use bfc::enumeration::{default_catalog_dir, enumerate_with, Catalog, Mode, Strategy};
use bfc::exact::from_f64;
use bfc::khintchine::{khintchine_constant, robust_scan, ScanConfig};
use bfc::tomaszewski::{reduce_dimension_t, t_exact, t_sphere};
use bfc::verify::{booleanization_errors, random_case_two_instances, run_suite, VerifyConfig};
use bfc::{TruthTable, WeightVector};
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    passed: bool,
    detail: String,
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

fn criterion_1() -> Outcome {
    let k_star = khintchine_constant(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut min = f64::INFINITY;
    for i in 0..100_000 {
        let w = random_unit(&mut rng, 1 + i % 16);
        min = min.min(khintchine_constant(&w).unwrap());
    }
    Outcome {
        passed: (k_star - FRAC_1_SQRT_2).abs() <= 1e-12 && min >= FRAC_1_SQRT_2 - 1e-12,
        detail: format!("K(w*) = {k_star:.15}, min over 1e5 vectors = {min:.9}"),
    }
}

fn criterion_2() -> Outcome {
    let (report, samples) = robust_scan(&ScanConfig::default()).unwrap();
    Outcome {
        passed: report.c_hat.is_some_and(|c| c > 0.0),
        detail: format!("{} grid vectors, ĉ = {:?}", samples.len(), report.c_hat),
    }
}

fn criterion_3() -> Outcome {
    let g2 = gamma_search(2).unwrap();
    let g3 = gamma_search(3).unwrap();
    let g5 = gamma_search(5).unwrap();
    let maj3 = canonicalize(&TruthTable::majority(3).unwrap()).unwrap().table;
    let dir = default_catalog_dir();
    let z2 = Catalog::load_or_build(2, Mode::ZeroThreshold, &dir).unwrap().full_count();
    let z3 = Catalog::load_or_build(3, Mode::ZeroThreshold, &dir).unwrap().full_count();
    let passed = g2.gamma == ratio(1, 1)
        && g3.gamma == ratio(3, 4)
        && g3.argmin.table == maj3
        && g5.gamma > ratio(1, 2)
        && g5.gamma <= majority_w1(5).unwrap()
        && majority_w1(5).unwrap() == ratio(45, 64)
        && (z2, z3) == (4, 14);
    Outcome {
        passed,
        detail: format!(
            "Γ2 = {}, Γ3 = {} (argmin weights {:?}), Γ5 = {}, zero-threshold counts n=2,3: {z2}, {z3}",
            g2.gamma, g3.gamma, g3.argmin.weights, g5.gamma
        ),
    }
}

fn criterion_4() -> Outcome {
    let expected = [4u64, 14, 104, 1882];
    let mut ab = Vec::new();
    for n in 1..=4 {
        let a = enumerate_with(n, Mode::All, &[Strategy::Scan]).unwrap();
        let b = enumerate_with(n, Mode::All, &[Strategy::Vertex]).unwrap();
        let classes = |c: &Catalog| -> Vec<_> { c.records.iter().map(|r| (r.table.clone(), r.orbit_size)).collect() };
        ab.push((a.full_count(), b.full_count(), classes(&a) == classes(&b)));
    }
    let ab_ok = ab.iter().zip(expected).all(|(&(a, b, same), e)| a == e && b == e && same);
    let dir = default_catalog_dir();
    let mut shifted = Vec::new();
    for n in 2..=5 {
        let z = Catalog::load_or_build(n, Mode::ZeroThreshold, &dir).unwrap().full_count();
        let all = Catalog::load_or_build(n - 1, Mode::All, &dir).unwrap().full_count();
        shifted.push((n, z, all));
    }
    Outcome {
        passed: ab_ok && shifted.iter().all(|&(_, z, a)| z == a),
        detail: format!("scan/vertex counts {ab:?}; (n, zero-threshold(n), all(n−1)) {shifted:?}"),
    }
}

fn criterion_5() -> Outcome {
    let w = WeightVector::from_integers(&[1, 1]);
    let t_w = t_exact(&w, &ratio(1, 1), true).unwrap().t_in;
    let s2 = t_sphere(2).unwrap().value;
    let s3 = t_sphere(3).unwrap().value;
    Outcome {
        passed: t_w == ratio(1, 2) && s2 == ratio(1, 2) && s3 >= ratio(3, 8) && s3 <= ratio(1, 2),
        detail: format!("T((1,1)/√2) = {t_w}, T(𝕊¹) = {s2}, T(𝕊²) = {s3}"),
    }
}

fn exact_t(w: &[f64]) -> BigRational {
    let exact = WeightVector::from_rationals(w.iter().map(|&x| from_f64(x)).collect());
    t_exact(&exact, &ratio(1, 1), true).unwrap().t_in
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = ratio(0, 1);
    let mut branches = std::collections::BTreeMap::new();
    for _ in 0..50 {
        let w = WeightVector::new(random_unit(&mut rng, 20));
        let r = reduce_dimension_t(&w, 0.25).unwrap();
        *branches.entry(format!("{:?}", r.branch)).or_insert(0) += 1;
        let gap = (exact_t(w.values()) - exact_t(r.v.values())).abs();
        worst = worst.max(gap);
    }
    Outcome {
        passed: worst <= ratio(1, 4),
        detail: format!("max |T(v) − T(w)| = {worst}, branches {branches:?}"),
    }
}

fn criterion_7() -> Outcome {
    // Same generator and default seed as the invariant suite.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    rng.set_stream(29);
    let instances = random_case_two_instances(&mut rng, 20);
    let mut worst_step2 = 0.0f64;
    let mut worst_cap = 0.0f64;
    let mut non_monotone = Vec::new();
    for (i, w) in instances.iter().enumerate() {
        let tr = bfc::bks::reduce_w1(w, 0.3, 16).unwrap();
        worst_step2 = worst_step2.max(tr.step2_error().expect("head/tail instance"));
        let e = booleanization_errors(w, 0.3, &[16, 256, 4096]).unwrap();
        worst_cap = worst_cap.max(e[2]);
        if !(e[0] > e[1] && e[1] > e[2]) {
            non_monotone.push((i, e));
        }
    }
    Outcome {
        passed: worst_step2 <= 1e-8 && worst_cap <= 0.05 && non_monotone.is_empty(),
        detail: format!(
            "step-2 error ≤ {worst_step2:.1e}, error at M=4096 ≤ {worst_cap:.1e}, non-monotone instances {non_monotone:?}"
        ),
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let results = run_suite(&VerifyConfig::default(), |_| true);
    let elapsed = start.elapsed();
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed && r.gating).map(|r| r.key).collect();
    Outcome {
        passed: failed.is_empty() && elapsed < Duration::from_secs(600),
        detail: format!("{} checks in {:.1}s, failed: {failed:?}", results.len(), elapsed.as_secs_f64()),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("Khintchine minimum", criterion_1, 60),
        ("robust scan positivity", criterion_2, 300),
        ("degree-1 weight search", criterion_3, 600),
        ("enumeration cross-check", criterion_4, 600),
        ("Tomaszewski values", criterion_5, 120),
        ("tail dimension reduction", criterion_6, 300),
        ("variable-reduction pipeline", criterion_7, 600),
        ("invariant suite", criterion_8, 600),
    ];
    let mut failures = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let passed = out.passed && secs < *budget as f64;
        println!(
            "criterion {} [{}] {name}: {} ({secs:.1}s of {budget}s)",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            out.detail
        );
        if !passed {
            failures.push(i + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
