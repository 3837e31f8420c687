//! Numerical invariant suite. Each check recomputes a known inequality or
//! identity on generated instances and reports pass/fail with a summary.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bks::{gamma_search_in, majority_w1, reduce_w1, Branch};
use crate::enumeration::{default_catalog_dir, enumerate_with, Catalog, Mode, Strategy};
use crate::error::Result;
use crate::exact::to_f64;
use crate::gaussian::{cdf, mu, w_func, SQRT_2_OVER_PI};
use crate::hypercube::{influence, wht, RealTable, TruthTable};
use crate::khintchine::{ell_moments, khintchine_constant, khintchine_numerator, robust_scan, ScanConfig};
use crate::ltf::{critical_index, integer_table, linear_form_values, make_proper, ChowParameters, Ltf, WeightVector};
use crate::rademacher::tail_counts_exact;
use crate::tomaszewski::{min_norm_feasibility, t_in, t_sphere_in};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub key: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    /// Gating checks decide the overall verdict; the rest are reported only.
    pub gating: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub catalog_dir: PathBuf,
    /// Random unit vectors for the Khintchine lower bound.
    pub khintchine_samples: usize,
    /// Random vectors for the `T_in ≥ 3/8` bound.
    pub tomaszewski_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            catalog_dir: default_catalog_dir(),
            khintchine_samples: 100_000,
            tomaszewski_samples: 10_000,
        }
    }
}

type Outcome = Result<(bool, String)>;

struct Check {
    key: &'static str,
    statement: &'static str,
    gating: bool,
    run: fn(&VerifyConfig, &mut ChaCha8Rng) -> Outcome,
}

const CHECKS: &[Check] = &[
    Check { key: "parseval", statement: "|Σ_S f̂(S)² − 1| ≤ 1e-10 for 1000 random LTFs, n ≤ 16", gating: true, run: parseval },
    Check { key: "transform_roundtrip", statement: "inverse transform is bit-exact on ±1 tables and within 1e-12 on real tables", gating: true, run: transform_roundtrip },
    Check { key: "influence_spectral_identity", statement: "Inf_i(f) = Σ_{S∋i} f̂(S)² within 1e-10", gating: true, run: influence_identity },
    Check { key: "plancherel", statement: "E[fg] = Σ_S f̂(S)ĝ(S) within 1e-10", gating: true, run: plancherel },
    Check { key: "poincare_even_ell", statement: "Var[ℓ] ≤ Inf(ℓ)/2 + 1e-12 for ℓ = |w·x|", gating: true, run: poincare_even },
    Check { key: "ell_influence_bound", statement: "Inf_i(ℓ) ≤ w_i² + 1e-12 on 1000 unit vectors, n ≤ 12", gating: true, run: ell_influence },
    Check { key: "ell_variance_bound", statement: "Var[ℓ] ≤ 1/2 + 1e-12", gating: true, run: ell_variance },
    Check { key: "proper_ltf_ordering", statement: "proper LTFs have Inf_1 ≥ Inf_i and w_i·f̂(i) ≥ 0", gating: true, run: proper_ordering },
    Check { key: "tail_decay_before_critical_index", statement: "σ_a < (1−τ²)^{(a−1)/2}·σ_1 for 1 < a ≤ c(w, τ)", gating: true, run: tail_decay },
    Check { key: "make_proper_invariance", statement: "K(w), T(w) and W^1[sign(w·x)] are unchanged by make_proper, n ≤ 12", gating: true, run: proper_invariance },
    Check { key: "berry_esseen_intervals", statement: "|Pr[w·x ∈ (a,b]] − Φ([a,b])| ≤ 2τ for τ-regular unit w, n = 20", gating: true, run: berry_esseen },
    Check { key: "mu_lipschitz", statement: "|μ(θ₁) − μ(θ₂)| ≤ √(2/π)|θ₁ − θ₂| on a grid", gating: true, run: mu_lipschitz },
    Check { key: "w_slope_bound", statement: "|W(ν₁) − W(ν₂)| ≤ |ν₁ − ν₂| on [−0.999, 0.999]", gating: true, run: w_slope },
    Check { key: "w_at_zero", statement: "W(0) = 2/π within 1e-12", gating: true, run: w_zero },
    Check { key: "regular_ltf_w1", statement: "|W^1[f] − W(E f)| ≤ τ^{1/6} + 0.05 for τ-regular LTFs, n = 20", gating: true, run: regular_w1 },
    Check { key: "regular_ltf_mean", statement: "|E_x[f] − μ(θ/‖w‖)| ≤ τ + 0.02 for τ-regular LTFs, n = 20", gating: true, run: regular_mean },
    Check { key: "khintchine_lower_bound", statement: "K(w) ≥ 1/√2 − 1e-12 on random unit vectors, n ≤ 16; K(w*) = 1/√2", gating: true, run: khintchine_lower },
    Check { key: "khintchine_squared_le_w1", statement: "K(w)² ≤ W^1[sign(w·x)] for every zero-threshold catalog record, n ≤ 5", gating: true, run: khintchine_sq },
    Check { key: "robust_scan", statement: "König bound on every grid sample and ĉ > 0, n ∈ {2,3,4}, denominator 8", gating: true, run: robust },
    Check { key: "tomaszewski_lower_bound", statement: "T_in(w, 1) ≥ 3/8 on random unit vectors", gating: true, run: tomaszewski_lower },
    Check { key: "tail_partition_identity", statement: "T_in + T_out ≥ 1, with equality iff no |w·x| equals a", gating: true, run: tail_partition },
    Check { key: "sphere_value_monotone", statement: "T(𝕊^{m−1}) is nonincreasing in m and lies in [3/8, 1/2] for 2 ≤ m ≤ 5", gating: true, run: sphere_monotone },
    Check { key: "feasibility_float_exact_agreement", statement: "float and exact min-norm verdicts agree on every candidate set", gating: true, run: feasibility_agreement },
    Check { key: "regular_tail_comparison", statement: "|Pr[w·x ≤ θ] − Pr[u·x ≤ θ]| ≤ 4η for unit vectors sharing a head with η-regular tails", gating: true, run: regular_tail },
    Check { key: "anticoncentration_large_critical_index", statement: "Pr[|w·x − w₀| ≤ √t·σ_K] ≤ 4·2^{−t} when c(w, η) > K", gating: true, run: anticoncentration },
    Check { key: "enumeration_counts", statement: "all-LTF counts 4, 14, 104, 1882 agree across strategies; zero-threshold(n) = all(n−1)", gating: true, run: enumeration_counts },
    Check { key: "gamma_bounds", statement: "1/2 < Γ_K, Γ_K nonincreasing for K = 2..5, Γ_3 = 3/4, Γ_5 ≤ 45/64", gating: true, run: gamma_bounds },
    Check { key: "collapse_exactness", statement: "|W̃¹[f] − W̃¹[F]| ≤ 1e-8 on 20 random head/tail instances", gating: true, run: collapse_exactness },
    Check { key: "booleanization_cap", statement: "|W̃¹[F] − W^1[g]| ≤ 0.05 at M = 4096 on 20 random instances", gating: true, run: booleanization_cap },
    Check { key: "booleanization_monotone", statement: "|W̃¹[F] − W^1[g]| strictly decreases over M ∈ {16, 256, 4096}", gating: false, run: booleanization_monotone },
];

/// Keys of every check, in run order.
pub fn check_keys() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.key).collect()
}

/// Runs the checks whose key is accepted by `filter`.
pub fn run_suite(cfg: &VerifyConfig, filter: impl Fn(&str) -> bool) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .filter(|(_, c)| filter(c.key))
        .map(|(i, c)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let start = Instant::now();
            let (passed, detail) = (c.run)(cfg, &mut rng).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckResult {
                key: c.key,
                statement: c.statement,
                passed,
                gating: c.gating,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

/// `true` when every gating check passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed || !r.gating)
}

fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    unit(gaussian_vec(rng, n))
}

/// Unit vector with entries of comparable size (near-flat, hence regular).
fn flat_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    unit((0..n).map(|_| rng.gen_range(0.5..1.0)).collect())
}

fn regularity(w: &[f64]) -> f64 {
    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    w.iter().fold(0.0f64, |m, x| m.max(x.abs())) / n
}

fn ltf_table(w: &[f64], theta: f64) -> Result<TruthTable> {
    Ltf::new(WeightVector::new(w.to_vec()), theta).to_truth_table()
}

fn parseval(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let n = 1 + i % 16;
        let w = gaussian_vec(rng, n);
        let theta = rng.gen_range(-1.0..1.0);
        let t = ltf_table(&w, theta)?;
        worst = worst.max((wht(&t).total_weight() - 1.0).abs());
    }
    Ok((worst <= 1e-10, format!("max deviation {worst:e}")))
}

fn transform_roundtrip(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut bits_ok = true;
    let mut worst = 0.0f64;
    for n in 1..=16 {
        let t = ltf_table(&gaussian_vec(rng, n), rng.gen_range(-1.0..1.0))?;
        bits_ok &= wht(&t).inverse_bits()? == t;
        let vals: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = RealTable::new(n, vals)?;
        let back = wht(&r).inverse();
        for (a, b) in r.values().iter().zip(back.values()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok((bits_ok && worst <= 1e-12, format!("bit-exact {bits_ok}, real max error {worst:e}")))
}

fn influence_identity(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = 1 + i % 12;
        let t = ltf_table(&gaussian_vec(rng, n), rng.gen_range(-1.0..1.0))?;
        let r = RealTable::abs_linear_form(&random_unit(rng, n))?;
        let (st, sr) = (wht(&t), wht(&r));
        for j in 0..n {
            worst = worst.max((influence(&t, j) - st.influence(j)).abs());
            worst = worst.max((influence(&r, j) - sr.influence(j)).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max deviation {worst:e}")))
}

fn plancherel(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = 1 + i % 14;
        let f: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let direct = f.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / f.len() as f64;
        let (sf, sg) = (wht(&RealTable::new(n, f)?), wht(&RealTable::new(n, g)?));
        let spectral: f64 = sf.coeffs().iter().zip(sg.coeffs()).map(|(a, b)| a * b).sum();
        worst = worst.max((direct - spectral).abs());
    }
    Ok((worst <= 1e-10, format!("max deviation {worst:e}")))
}

fn poincare_even(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..500 {
        let n = 1 + i % 12;
        let spec = wht(&RealTable::abs_linear_form(&random_unit(rng, n))?);
        worst = worst.max(spec.variance() - spec.total_influence() / 2.0);
    }
    Ok((worst <= 1e-12, format!("max Var − Inf/2 = {worst:e}")))
}

fn ell_influence(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000 {
        let w = random_unit(rng, 1 + i % 12);
        let m = ell_moments(&w)?;
        for (inf, wi) in m.influences.iter().zip(&w) {
            worst = worst.max(inf - wi * wi);
        }
    }
    Ok((worst <= 1e-12, format!("max Inf_i − w_i² = {worst:e}")))
}

fn ell_variance(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000 {
        let m = ell_moments(&random_unit(rng, 1 + i % 12))?;
        worst = worst.max(m.variance);
    }
    Ok((worst <= 0.5 + 1e-12, format!("max Var[ℓ] = {worst}")))
}

fn ordering_holds(t: &TruthTable, w: &[f64]) -> bool {
    let spec = wht(t);
    let inf1 = spec.influence(0);
    (0..w.len()).all(|i| spec.influence(i) <= inf1 + 1e-12 && w[i] * spec.degree1(i) >= -1e-12)
}

fn proper_ordering(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    for n in 1..=4 {
        let c = Catalog::load_or_build(n, Mode::All, &cfg.catalog_dir)?;
        for r in &c.records {
            let p = make_proper(&WeightVector::from_integers(&r.weights));
            let pw: Vec<i128> = p.weights.exact().unwrap().iter().map(|v| v.to_integer().try_into().unwrap()).collect();
            let t = integer_table(&pw, i128::from(r.threshold))?;
            let wf: Vec<f64> = pw.iter().map(|&v| v as f64).collect();
            checked += 1;
            failures += usize::from(!ordering_holds(&t, &wf));
        }
    }
    for i in 0..500 {
        let n = 1 + i % 10;
        let p = make_proper(&WeightVector::new(gaussian_vec(rng, n))).weights;
        let t = ltf_table(p.values(), rng.gen_range(-1.0..1.0))?;
        checked += 1;
        failures += usize::from(!ordering_holds(&t, p.values()));
    }
    Ok((failures == 0, format!("{failures} violations in {checked} LTFs")))
}

fn tail_decay(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    for i in 0..2000 {
        let n = 2 + i % 30;
        // Heavy-headed vectors so the critical index is often large.
        let v: Vec<f64> = (0..n).map(|k| rng.gen_range(0.2..1.0) * 0.6f64.powi(k as i32)).collect();
        let w = make_proper(&WeightVector::new(unit(v))).weights;
        for tau in [0.1, 0.3] {
            let ci = critical_index(&w, tau);
            let last = ci.index.unwrap_or(n);
            for a in 2..=last {
                checked += 1;
                let bound = (1.0 - tau * tau).powf((a as f64 - 1.0) / 2.0) * ci.sigma[0];
                failures += usize::from(ci.sigma[a - 1] >= bound);
            }
        }
    }
    Ok((failures == 0, format!("{failures} violations in {checked} comparisons")))
}

fn proper_invariance(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for i in 0..300 {
        let w = random_unit(rng, 1 + i % 12);
        let p = make_proper(&WeightVector::new(w.clone())).weights;
        let pv = p.values();
        worst = worst.max((khintchine_constant(&w)? - khintchine_constant(pv)?).abs());
        match (t_in(&w, 1.0), t_in(pv, 1.0)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
            _ => skipped += 1,
        }
        let w1 = |v: &[f64]| -> Result<f64> { Ok(ChowParameters::of(&ltf_table(v, 0.0)?).w1()) };
        worst = worst.max((w1(&w)? - w1(pv)?).abs());
    }
    Ok((worst <= 1e-12, format!("max change {worst:e}, {skipped} boundary cases skipped")))
}

/// Sorted values of `w·x` for probability queries.
fn sorted_forms(w: &[f64]) -> Vec<f64> {
    let mut v = linear_form_values(w);
    v.par_sort_unstable_by(f64::total_cmp);
    v
}

/// `Pr[w·x ≤ t]` from sorted values.
fn cdf_of(sorted: &[f64], t: f64) -> f64 {
    sorted.partition_point(|&v| v <= t) as f64 / sorted.len() as f64
}

fn berry_esseen(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut taus = (f64::INFINITY, 0.0f64);
    for _ in 0..5 {
        let w = flat_unit(rng, 20);
        let tau = regularity(&w);
        taus = (taus.0.min(tau), taus.1.max(tau));
        let s = sorted_forms(&w);
        for k in 0..100 {
            let a = -3.0 + 0.05 * k as f64;
            let b = a + 0.1 + 0.03 * (k % 20) as f64;
            let emp = cdf_of(&s, b) - cdf_of(&s, a);
            worst = worst.max((emp - (cdf(b) - cdf(a))).abs() - 2.0 * tau);
        }
    }
    Ok((
        worst <= 0.0,
        format!("τ ∈ [{:.3}, {:.3}], max (error − 2τ) = {worst:.4}", taus.0, taus.1),
    ))
}

fn mu_lipschitz(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let grid: Vec<f64> = (-4000..=4000).map(|k| k as f64 / 1000.0).collect();
    for pair in grid.windows(2) {
        let d = (mu(pair[1]) - mu(pair[0])).abs() - SQRT_2_OVER_PI * (pair[1] - pair[0]);
        worst = worst.max(d);
    }
    Ok((worst <= 1e-15, format!("max excess {worst:e}")))
}

fn w_slope(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let grid: Vec<f64> = (-999..=999).map(|k| k as f64 / 1000.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&v| w_func(v)).collect::<Result<_>>()?;
    let mut worst = f64::NEG_INFINITY;
    for i in 1..grid.len() {
        worst = worst.max((vals[i] - vals[i - 1]).abs() - (grid[i] - grid[i - 1]));
    }
    Ok((worst <= 1e-12, format!("max excess {worst:e}")))
}

fn w_zero(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let d = (w_func(0.0)? - 2.0 / PI).abs();
    Ok((d <= 1e-12, format!("|W(0) − 2/π| = {d:e}")))
}

fn regular_instances(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Vec<f64>, f64)> {
    (0..count)
        .map(|_| (flat_unit(rng, 20), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn regular_w1(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (w, theta) in regular_instances(rng, 50) {
        let chow = ChowParameters::of(&ltf_table(&w, theta)?);
        let gap = (chow.w1() - w_func(chow.mean())?).abs();
        worst = worst.max(gap - regularity(&w).powf(1.0 / 6.0) - 0.05);
    }
    Ok((worst <= 0.0, format!("max (gap − τ^(1/6) − 0.05) = {worst:.4}")))
}

fn regular_mean(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (w, theta) in regular_instances(rng, 50) {
        let mean = ChowParameters::of(&ltf_table(&w, theta)?).mean();
        worst = worst.max((mean - mu(theta)).abs() - regularity(&w) - 0.02);
    }
    Ok((worst <= 0.0, format!("max (gap − τ − 0.02) = {worst:.4}")))
}

fn khintchine_lower(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let at_star = (khintchine_constant(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])? - FRAC_1_SQRT_2).abs();
    let seeds: Vec<u64> = (0..cfg.khintchine_samples).map(|_| rng.gen()).collect();
    let min = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut r = ChaCha8Rng::seed_from_u64(s);
            khintchine_constant(&random_unit(&mut r, 1 + i % 16))
        })
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))?;
    Ok((
        at_star <= 1e-12 && min >= FRAC_1_SQRT_2 - 1e-12,
        format!("|K(w*) − 1/√2| = {at_star:e}; min K over {} vectors = {min:.6}", seeds.len()),
    ))
}

fn khintchine_sq(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=5 {
        let c = Catalog::load_or_build(n, Mode::ZeroThreshold, &cfg.catalog_dir)?;
        for r in &c.records {
            let num = khintchine_numerator(&r.weights)? as f64;
            let norm = r.weights.iter().map(|&v| (v * v) as f64).sum::<f64>().sqrt();
            let k = num / (n as f64).exp2() / norm;
            worst = worst.max(k * k - r.w1());
            checked += 1;
        }
    }
    for i in 0..300 {
        let w = random_unit(rng, 1 + i % 12);
        let t = ltf_table(&w, 0.0)?;
        let k = khintchine_constant(&w)?;
        worst = worst.max(k * k - ChowParameters::of(&t).w1());
        checked += 1;
    }
    Ok((worst <= 1e-12, format!("max K² − W^1 = {worst:e} over {checked} functions")))
}

fn robust(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let (report, samples) = robust_scan(&ScanConfig::default())?;
    let ok = report.koenig_violations == 0 && report.c_hat.is_some_and(|c| c > 0.0);
    Ok((
        ok,
        format!(
            "{} samples, König violations {}, ĉ = {:?}",
            samples.len(),
            report.koenig_violations,
            report.c_hat
        ),
    ))
}

fn tomaszewski_lower(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let seeds: Vec<u64> = (0..cfg.tomaszewski_samples).map(|_| rng.gen()).collect();
    let (min, skipped) = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut r = ChaCha8Rng::seed_from_u64(s);
            let w = random_unit(&mut r, 1 + i % 20);
            match t_in(&w, 1.0) {
                Ok(t) => (t, 0usize),
                Err(_) => (f64::INFINITY, 1),
            }
        })
        .reduce(|| (f64::INFINITY, 0), |a, b| (a.0.min(b.0), a.1 + b.1));
    // Monte Carlo beyond exhaustive reach, with 3σ slack.
    let mut mc_min_slack = f64::INFINITY;
    for _ in 0..10 {
        let w = random_unit(rng, 40);
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| {
                let s: f64 = w.iter().map(|&wi| if rng.gen::<bool>() { wi } else { -wi }).sum();
                s.abs() <= 1.0
            })
            .count();
        let p = hits as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        mc_min_slack = mc_min_slack.min(p + 3.0 * se - 0.375);
    }
    Ok((
        min >= 0.375 && mc_min_slack >= 0.0,
        format!("exhaustive min {min:.6} over {} vectors ({skipped} at the boundary), Monte Carlo n=40 slack {mc_min_slack:.4}", seeds.len()),
    ))
}

fn tail_partition(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = 0;
    let mut with_ties = 0;
    for i in 0..500 {
        let n = 1 + i % 12;
        let w: Vec<BigRational> = (0..n).map(|_| BigRational::from_integer(rng.gen_range(-5i64..=5).into())).collect();
        if w.iter().all(|v| *v == BigRational::from_integer(0.into())) {
            continue;
        }
        let a = BigRational::from_integer(rng.gen_range(0i64..=6).into());
        let c = tail_counts_exact(&w, &a, false)?;
        let sum = c.inside() + c.outside();
        let one = BigRational::from_integer(1.into());
        let ok = sum >= one && ((sum == one) == (c.equal == 0));
        failures += usize::from(!ok);
        with_ties += usize::from(c.equal > 0);
    }
    Ok((failures == 0, format!("{failures} violations, {with_ties} instances with boundary points")))
}

fn sphere_monotone(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let vals: Vec<BigRational> = (1..=5)
        .map(|m| t_sphere_in(m, Some(&cfg.catalog_dir)).map(|r| r.value))
        .collect::<Result<_>>()?;
    let lo = BigRational::new(3.into(), 8.into());
    let hi = BigRational::new(1.into(), 2.into());
    let monotone = vals.windows(2).all(|p| p[1] <= p[0]);
    let bounded = vals[1..].iter().all(|v| *v >= lo && *v <= hi);
    let shown: Vec<String> = vals.iter().map(ToString::to_string).collect();
    Ok((monotone && bounded, format!("T(𝕊^(m−1)) for m = 1..5: {}", shown.join(", "))))
}

fn feasibility_agreement(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let mut instances = 0;
    for m in 1..=3 {
        for mask in 0u32..1 << (1 << m) {
            let p: Vec<usize> = (0..1usize << m).filter(|b| mask >> b & 1 == 1).collect();
            min_norm_feasibility(m, &p)?;
            instances += 1;
        }
    }
    for m in 4..=5 {
        let c = Catalog::load_or_build(m, Mode::All, &cfg.catalog_dir)?;
        for r in &c.records {
            let p: Vec<usize> = (0..1usize << m).filter(|&b| r.table.get(b)).collect();
            min_norm_feasibility(m, &p)?;
            instances += 1;
        }
    }
    Ok((true, format!("{instances} instances, no disagreement")))
}

fn regular_tail(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let head: Vec<f64> = (0..3).map(|_| rng.gen_range(0.3..0.5)).collect();
        let head_sq: f64 = head.iter().map(|x| x * x).sum();
        let tail_norm = (1.0 - head_sq).sqrt();
        let mk = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            let t = unit((0..16).map(|_| rng.gen_range(0.7..1.0)).collect());
            let mut v = head.clone();
            v.extend(t.iter().map(|x| x * tail_norm));
            v
        };
        let (w, u) = (mk(rng), mk(rng));
        let eta = regularity(&w[3..]).max(regularity(&u[3..]));
        let (sw, su) = (sorted_forms(&w), sorted_forms(&u));
        for k in -30..=30 {
            let theta = k as f64 / 10.0;
            worst = worst.max((cdf_of(&sw, theta) - cdf_of(&su, theta)).abs() - 4.0 * eta);
        }
    }
    Ok((worst <= 0.0, format!("max (gap − 4η) = {worst:.4}")))
}

fn anticoncentration(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let n = 20;
    let w = unit((0..n).map(|i| 0.5f64.powi(i)).collect());
    let wv = WeightVector::new(w.clone());
    let ci = critical_index(&wv, 0.4);
    let s = sorted_forms(&w);
    let mut worst = f64::NEG_INFINITY;
    for t in [1.0f64, 2.0, 3.0, 4.0] {
        let k = t as usize + 2;
        if ci.index.is_some_and(|c| c <= k) {
            return Ok((false, format!("critical index {:?} not beyond K = {k}", ci.index)));
        }
        let radius = t.sqrt() * ci.sigma[k];
        for j in -150..=150 {
            let w0 = j as f64 / 100.0;
            let lo = s.partition_point(|&v| v < w0 - radius);
            let hi = s.partition_point(|&v| v <= w0 + radius);
            let p = (hi - lo) as f64 / s.len() as f64;
            worst = worst.max(p / (4.0 * (-t).exp2()));
        }
    }
    Ok((worst <= 1.0, format!("max probability / (4·2^−t) = {worst:.4}")))
}

fn enumeration_counts(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let expected = [4u64, 14, 104, 1882];
    let mut all = Vec::new();
    for n in 1..=4 {
        let c = enumerate_with(n, Mode::All, &[Strategy::Scan, Strategy::Vertex, Strategy::Walk])?;
        all.push(c.full_count());
    }
    let mut zero = Vec::new();
    for n in 2..=5 {
        zero.push(Catalog::load_or_build(n, Mode::ZeroThreshold, &cfg.catalog_dir)?.full_count());
    }
    let ok = all == expected && zero == expected;
    Ok((ok, format!("all-LTF {all:?}, zero-threshold n=2..5 {zero:?}")))
}

fn gamma_bounds(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Outcome {
    let gammas: Vec<BigRational> = (2..=5)
        .map(|k| gamma_search_in(k, Some(&cfg.catalog_dir)).map(|r| r.gamma))
        .collect::<Result<_>>()?;
    let half = BigRational::new(1.into(), 2.into());
    let ok = gammas.iter().all(|g| *g > half)
        && gammas.windows(2).all(|p| p[1] <= p[0])
        && gammas[1] == BigRational::new(3.into(), 4.into())
        && gammas[3] <= majority_w1(5)?;
    let shown: Vec<String> = gammas.iter().map(ToString::to_string).collect();
    Ok((ok, format!("Γ_2..Γ_5 = {}", shown.join(", "))))
}

/// Random head/tail instances: a few heavy coordinates and a flat tail.
pub fn random_case_two_instances(rng: &mut impl Rng, count: usize) -> Vec<WeightVector> {
    (0..count)
        .map(|_| {
            let h = rng.gen_range(1..=5);
            let mut v: Vec<f64> = (0..h).map(|_| rng.gen_range(1.0..4.0)).collect();
            v.extend((0..40).map(|_| rng.gen_range(0.5..1.0)));
            WeightVector::new(v).normalized()
        })
        .collect()
}

/// Booleanization errors at each `M` for one instance.
pub fn booleanization_errors(w: &WeightVector, delta: f64, ms: &[usize]) -> Result<Vec<f64>> {
    ms.iter()
        .map(|&m| {
            let tr = reduce_w1(w, delta, m)?;
            tr.booleanization_error()
                .ok_or_else(|| crate::Error::Domain("instance fell in the junta branch".into()))
        })
        .collect()
}

fn collapse_exactness(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for w in random_case_two_instances(rng, 20) {
        let tr = reduce_w1(&w, 0.3, 16)?;
        if !matches!(tr.branch, Branch::HeadTail { .. }) {
            return Ok((false, "instance fell in the junta branch".into()));
        }
        worst = worst.max(tr.step2_error().unwrap());
    }
    Ok((worst <= 1e-8, format!("max |W̃¹[f] − W̃¹[F]| = {worst:e}")))
}

fn booleanization_cap(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for w in random_case_two_instances(rng, 20) {
        worst = worst.max(booleanization_errors(&w, 0.3, &[4096])?[0]);
    }
    Ok((worst <= 0.05, format!("max error at M = 4096: {worst:e}")))
}

fn booleanization_monotone(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = Vec::new();
    for (i, w) in random_case_two_instances(rng, 20).iter().enumerate() {
        let e = booleanization_errors(w, 0.3, &[16, 256, 4096])?;
        if !(e[0] > e[1] && e[1] > e[2]) {
            bad.push(format!("#{i}: {:.2e}, {:.2e}, {:.2e}", e[0], e[1], e[2]));
        }
    }
    Ok((bad.is_empty(), format!("{} of 20 non-monotone {}", bad.len(), bad.join("; "))))
}

/// Converts an exact value for display.
pub fn rational_f64(r: &BigRational) -> f64 {
    to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_unique() {
        let mut k = check_keys();
        k.sort_unstable();
        k.dedup();
        assert_eq!(k.len(), CHECKS.len());
    }

    #[test]
    fn fast_checks_pass() {
        let cfg = VerifyConfig {
            catalog_dir: std::env::temp_dir().join(format!("bfc-verify-test-{}", std::process::id())),
            ..VerifyConfig::default()
        };
        let fast = ["w_at_zero", "mu_lipschitz", "w_slope_bound", "tail_partition_identity", "parseval"];
        let res = run_suite(&cfg, |k| fast.contains(&k));
        assert_eq!(res.len(), fast.len());
        for r in &res {
            assert!(r.passed, "{}: {}", r.key, r.detail);
        }
        let _ = std::fs::remove_dir_all(&cfg.catalog_dir);
    }
}
