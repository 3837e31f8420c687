//! The Khintchine constant `K(w) = E|w·x|`, the distance to the extremal
//! family, moments of `ℓ(x) = |w·x|`, and an empirical robustness scanner.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::gaussian::SQRT_2_OVER_PI;
use crate::hypercube::{self, degree_weight, wht, Level, RealTable};
use crate::ltf::{make_proper, WeightVector};
use crate::rademacher;

/// Largest dimension for [`ell_moments`].
pub const MAX_MOMENT_DIM: usize = 24;

/// `K(w) = E_x|w·x|`.
pub fn khintchine_constant(w: &[f64]) -> Result<f64> {
    rademacher::expect_abs(w)
}

/// `K(w)` for an integer vector, as the exact numerator `Σ_x |w·x|` over `2^n`.
pub fn khintchine_numerator(w: &[i64]) -> Result<i128> {
    let w: Vec<i128> = w.iter().map(|&v| i128::from(v)).collect();
    rademacher::sum_abs_integer(&w)
}

/// Distance from `w` to the nearest `(±e_i ± e_j)/√2`. Vectors of length 1 are
/// padded with a zero coordinate.
pub fn dist_to_extremal(w: &[f64]) -> f64 {
    let mut v = w.to_vec();
    if v.len() < 2 {
        v.resize(2, 0.0);
    }
    let norm_sq: f64 = v.iter().map(|x| x * x).sum();
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                // ‖w − (s_i e_i + s_j e_j)/√2‖² expanded
                let d2 = norm_sq + 1.0 - 2.0 * FRAC_1_SQRT_2 * (si * v[i] + sj * v[j]);
                best = best.min(d2);
            }
        }
    }
    best.max(0.0).sqrt()
}

/// `‖w − w*‖` with `w* = (1/√2, 1/√2, 0, …, 0)`.
pub fn dist_to_w_star(w: &[f64]) -> f64 {
    let mut d2 = 0.0;
    for i in 0..w.len().max(2) {
        let wi = w.get(i).copied().unwrap_or(0.0);
        let si = if i < 2 { FRAC_1_SQRT_2 } else { 0.0 };
        d2 += (wi - si) * (wi - si);
    }
    d2.sqrt()
}

/// Lower bound `√(2/π) − (1 − √(2/π))·w_1` on `K(w)` for proper unit `w`.
pub fn koenig_bound(w1: f64) -> f64 {
    SQRT_2_OVER_PI - (1.0 - SQRT_2_OVER_PI) * w1
}

/// A proper unit vector is canonical when `w_1 ∈ [0.3, 1/√2 + 1/100]` and
/// `‖w − w*‖ ≥ 2/5`.
pub fn is_canonical(w: &[f64]) -> bool {
    let w1 = w.first().copied().unwrap_or(0.0);
    (0.3..=FRAC_1_SQRT_2 + 0.01).contains(&w1) && dist_to_w_star(w) >= 0.4
}

/// Lower bound `1/√2 + ‖w − w*‖/1000` on `K(w)` for non-canonical vectors.
pub fn noncanonical_bound(w: &[f64]) -> f64 {
    FRAC_1_SQRT_2 + dist_to_w_star(w) / 1000.0
}

/// Moments of `ℓ(x) = |w·x|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllMoments {
    pub mean: f64,
    pub variance: f64,
    pub influences: Vec<f64>,
    pub weight_ge4: f64,
}

pub fn ell_moments(w: &[f64]) -> Result<EllMoments> {
    check_dim(w.len(), MAX_MOMENT_DIM)?;
    let table = RealTable::abs_linear_form(w)?;
    let spec = wht(&table);
    let n = w.len();
    Ok(EllMoments {
        mean: spec.coeff(0),
        variance: spec.variance(),
        influences: (0..n).map(|i| spec.influence(i)).collect(),
        weight_ge4: degree_weight(&spec, Level::AtLeast(4)),
    })
}

/// Where a scanned vector came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Grid,
    Sphere,
    Perturbation,
    Given,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_values: Vec<usize>,
    /// Exhaustive grid `8 ≥ a_1 ≥ … ≥ a_n ≥ 0` (normalized) with this denominator.
    pub grid_denominator: Option<u32>,
    /// Uniform sphere samples per dimension.
    pub sphere_samples: usize,
    /// Radii of perturbations around `w*`.
    pub perturbation_radii: Vec<f64>,
    pub perturbations_per_radius: usize,
    pub d_min: f64,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            n_values: vec![2, 3, 4],
            grid_denominator: Some(8),
            sphere_samples: 0,
            perturbation_radii: Vec::new(),
            perturbations_per_radius: 0,
            d_min: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub source: SampleSource,
    pub w: Vec<f64>,
    /// Integer direction, for grid samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integer: Option<Vec<i64>>,
    pub k: f64,
    pub d: f64,
    pub ratio: Option<f64>,
    pub koenig_ok: bool,
    /// `None` for canonical vectors.
    pub noncanonical_ok: Option<bool>,
    pub rechecked: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustScanReport {
    pub n_range: (usize, usize),
    pub samples: usize,
    pub d_min: f64,
    pub min_k: f64,
    pub min_k_vector: Vec<f64>,
    /// Empirical robustness constant `min (K(w) − 1/√2)/d(w)` over `d(w) ≥ d_min`.
    pub c_hat: Option<f64>,
    pub argmin: Option<Vec<f64>>,
    pub ratios_counted: usize,
    pub koenig_violations: usize,
    pub noncanonical_checked: usize,
    pub noncanonical_violations: usize,
    pub rechecked: usize,
    /// Set when a negative ratio survives re-evaluation.
    pub flagged: bool,
}

/// Integer vectors `den ≥ a_1 ≥ … ≥ a_n ≥ 0` with `gcd = 1`.
pub fn proper_grid(n: usize, den: u32) -> Vec<Vec<i64>> {
    fn rec(n: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            let g = cur.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g == 1 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=cap).rev() {
            cur.push(v);
            rec(n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, i64::from(den), &mut Vec::with_capacity(n), &mut out);
    out
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit_proper(v: Vec<f64>) -> Vec<f64> {
    let p = make_proper(&WeightVector::new(v));
    p.weights.normalized().values().to_vec()
}

fn random_direction(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if v.iter().any(|x| *x != 0.0) {
            return v;
        }
    }
}

enum Candidate {
    Grid(Vec<i64>),
    Float(SampleSource, Vec<f64>),
}

fn candidates(cfg: &ScanConfig) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut stream = 0u64;
    for &n in &cfg.n_values {
        if let Some(den) = cfg.grid_denominator {
            out.extend(proper_grid(n, den).into_iter().map(Candidate::Grid));
        }
        for _ in 0..cfg.sphere_samples {
            let mut rng = sample_rng(cfg.seed, stream);
            stream += 1;
            out.push(Candidate::Float(
                SampleSource::Sphere,
                unit_proper(random_direction(&mut rng, n)),
            ));
        }
        for &r in &cfg.perturbation_radii {
            for _ in 0..cfg.perturbations_per_radius {
                let mut rng = sample_rng(cfg.seed, stream);
                stream += 1;
                let dir = random_direction(&mut rng, n.max(2));
                let dn = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                let v: Vec<f64> = (0..n.max(2))
                    .map(|i| {
                        let base = if i < 2 { FRAC_1_SQRT_2 } else { 0.0 };
                        base + r * dir[i] / dn
                    })
                    .collect();
                out.push(Candidate::Float(SampleSource::Perturbation, unit_proper(v)));
            }
        }
    }
    out
}

/// Evaluates one proper unit vector.
pub fn evaluate_sample(source: SampleSource, w: Vec<f64>, integer: Option<Vec<i64>>, d_min: f64) -> Result<ScanSample> {
    let mut k = khintchine_constant(&w)?;
    let d = dist_to_extremal(&w);
    let mut ratio = (d >= d_min).then(|| (k - FRAC_1_SQRT_2) / d);
    let mut rechecked = false;
    if ratio.is_some_and(|r| r < 1e-6) {
        rechecked = true;
        k = match &integer {
            Some(a) => {
                let num = khintchine_numerator(a)? as f64;
                let norm = a.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
                num / (a.len() as f64).exp2() / norm
            }
            None => compensated_k(&w)?,
        };
        ratio = Some((k - FRAC_1_SQRT_2) / d);
    }
    let w1 = w.first().copied().unwrap_or(0.0);
    let koenig_ok = k >= koenig_bound(w1) - 1e-12;
    let noncanonical_ok = (!is_canonical(&w)).then(|| k >= noncanonical_bound(&w) - 1e-12);
    Ok(ScanSample {
        source,
        w,
        integer,
        k,
        d,
        ratio,
        koenig_ok,
        noncanonical_ok,
        rechecked,
    })
}

/// `K(w)` by compensated summation over every point.
fn compensated_k(w: &[f64]) -> Result<f64> {
    check_dim(w.len(), hypercube::MAX_DIM)?;
    let vals = crate::ltf::linear_form_values(w);
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for v in vals {
        let x = v.abs();
        let t = s + x;
        c += if s.abs() >= x { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    Ok((s + c) / (w.len() as f64).exp2())
}

/// Scans proper unit vectors and reports the empirical robustness constant.
pub fn robust_scan(cfg: &ScanConfig) -> Result<(RobustScanReport, Vec<ScanSample>)> {
    let cands = candidates(cfg);
    let samples: Vec<ScanSample> = cands
        .into_par_iter()
        .map(|c| match c {
            Candidate::Grid(a) => {
                let w = unit_from_integers(&a);
                evaluate_sample(SampleSource::Grid, w, Some(a), cfg.d_min)
            }
            Candidate::Float(src, w) => evaluate_sample(src, w, None, cfg.d_min),
        })
        .collect::<Result<_>>()?;
    Ok((summarize(cfg, &samples), samples))
}

fn unit_from_integers(a: &[i64]) -> Vec<f64> {
    let norm = a.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    a.iter().map(|&x| x as f64 / norm).collect()
}

/// Summary of a set of evaluated samples; ties resolve to the earliest sample.
pub fn summarize(cfg: &ScanConfig, samples: &[ScanSample]) -> RobustScanReport {
    let mut min_k = f64::INFINITY;
    let mut min_k_vector = Vec::new();
    let mut c_hat: Option<f64> = None;
    let mut argmin = None;
    let mut counted = 0;
    for s in samples {
        if s.k < min_k {
            min_k = s.k;
            min_k_vector = s.w.clone();
        }
        if let Some(r) = s.ratio {
            counted += 1;
            if c_hat.map_or(true, |c| r < c) {
                c_hat = Some(r);
                argmin = Some(s.w.clone());
            }
        }
    }
    let nmin = cfg.n_values.iter().copied().min().unwrap_or(0);
    let nmax = cfg.n_values.iter().copied().max().unwrap_or(0);
    RobustScanReport {
        n_range: (nmin, nmax),
        samples: samples.len(),
        d_min: cfg.d_min,
        min_k,
        min_k_vector,
        c_hat,
        argmin,
        ratios_counted: counted,
        koenig_violations: samples.iter().filter(|s| !s.koenig_ok).count(),
        noncanonical_checked: samples.iter().filter(|s| s.noncanonical_ok.is_some()).count(),
        noncanonical_violations: samples.iter().filter(|s| s.noncanonical_ok == Some(false)).count(),
        rechecked: samples.iter().filter(|s| s.rechecked).count(),
        flagged: c_hat.is_some_and(|c| c < 0.0),
    }
}

/// Writes samples as CSV with columns `w,K,d,ratio` (`w` is `;`-separated).
pub fn write_csv(samples: &[ScanSample], mut out: impl Write) -> Result<()> {
    writeln!(out, "w,K,d,ratio")?;
    for s in samples {
        let w: Vec<String> = s.w.iter().map(|x| format!("{x:.17}")).collect();
        let ratio = s.ratio.map_or(String::new(), |r| format!("{r:.17}"));
        writeln!(out, "{},{:.17},{:.17},{}", w.join(";"), s.k, s.d, ratio)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_examples() {
        assert_eq!(khintchine_constant(&[1.0]).unwrap(), 1.0);
        let k = khintchine_constant(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((k - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(khintchine_constant(&[0.5; 4]).unwrap(), 0.75);
        assert_eq!(khintchine_numerator(&[1, 1, 1, 1]).unwrap(), 24);
        let w = [0.3, -0.2, 0.9];
        let k = khintchine_constant(&w).unwrap();
        let k3 = khintchine_constant(&w.map(|x| -3.0 * x)).unwrap();
        assert!((k3 - 3.0 * k).abs() < 1e-14);
    }

    #[test]
    fn distance_examples() {
        assert!(dist_to_extremal(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]) < 1e-8);
        let e1 = dist_to_extremal(&[1.0, 0.0, 0.0]);
        assert!((e1 - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-12);
        // Independent oracle: explicit distance to each of the 12 candidates.
        let w = [1.0 / 3f64.sqrt(); 3];
        let mut best = f64::INFINITY;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for si in [-1.0, 1.0] {
                    for sj in [-1.0, 1.0] {
                        let mut c = [0.0; 3];
                        c[i] = si * FRAC_1_SQRT_2;
                        c[j] = sj * FRAC_1_SQRT_2;
                        let d: f64 = w.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum();
                        best = best.min(d.sqrt());
                    }
                }
            }
        }
        assert!((dist_to_extremal(&w) - best).abs() < 1e-12);
    }

    #[test]
    fn moments_examples() {
        let m = ell_moments(&[1.0]).unwrap();
        assert!(m.variance.abs() < 1e-15);
        let m = ell_moments(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((m.variance - 0.5).abs() < 1e-12);
        assert!(m.influences.iter().all(|i| (i - 0.5).abs() < 1e-12));
        let m = ell_moments(&[0.5; 4]).unwrap();
        assert!((m.variance - 7.0 / 16.0).abs() < 1e-12);
        assert!(m.weight_ge4 >= (-8f64).exp2() / 4.0);
        assert!((m.mean - 0.75).abs() < 1e-12);
    }

    #[test]
    fn grid_enumeration() {
        let g = proper_grid(2, 2);
        assert_eq!(g, vec![vec![2, 1], vec![1, 1], vec![1, 0]]);
        for v in proper_grid(4, 8) {
            assert!(v.windows(2).all(|p| p[0] >= p[1]) && v[3] >= 0);
        }
    }

    #[test]
    fn scan_with_only_extremal_vector() {
        let cfg = ScanConfig {
            n_values: vec![2],
            grid_denominator: None,
            ..Default::default()
        };
        let s = evaluate_sample(SampleSource::Given, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2], None, 0.1).unwrap();
        let r = summarize(&cfg, &[s]);
        assert!(r.c_hat.is_none());
        assert!((r.min_k - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn small_grid_scan_is_positive() {
        let cfg = ScanConfig {
            n_values: vec![2, 3],
            grid_denominator: Some(4),
            sphere_samples: 20,
            perturbation_radii: vec![0.05, 0.2],
            perturbations_per_radius: 5,
            d_min: 0.1,
            seed: 3,
        };
        let (r, samples) = robust_scan(&cfg).unwrap();
        assert!(r.c_hat.unwrap() > 0.0);
        assert_eq!(r.koenig_violations, 0);
        assert_eq!(r.noncanonical_violations, 0);
        let (r2, _) = robust_scan(&cfg).unwrap();
        assert_eq!(r, r2);
        let mut csv = Vec::new();
        write_csv(&samples, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), samples.len() + 1);
    }
}
