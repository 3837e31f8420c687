//! The degree-1 weight search over zero-threshold LTFs and the variable
//! reduction pipeline `f → f̃ → F → g`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::enumeration::{default_catalog_dir, Catalog, LtfRecord, Mode};
use crate::error::{check_dim, Error, Result};
use crate::gaussian::{mixed_degree1, mixed_degree1_independent, MAX_HEAD};
use crate::hypercube::{hamming_dist, wht, Level};
use crate::ltf::{critical_index, linear_form_values, make_proper, ChowParameters, Ltf, ProperForm, WeightVector};

/// Largest `K` reachable by [`gamma_search`].
pub const MAX_GAMMA_K: usize = 7;

/// Largest dimension for brute-force `W^1` and Hamming distances.
pub const MAX_BRUTE_DIM: usize = 24;

/// One `W^1` value and how many catalog entries attain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistogramBin {
    pub w1: BigRational,
    pub representatives: usize,
    pub functions: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BksReport {
    pub k: usize,
    /// Minimum `W^1` over nondegenerate zero-threshold `K`-variable LTFs.
    pub gamma: BigRational,
    /// Lexicographically least canonical minimizer.
    pub argmin: LtfRecord,
    /// Ascending in `W^1`.
    pub histogram: Vec<HistogramBin>,
    pub representatives: usize,
    pub full_count: u64,
}

impl BksReport {
    pub fn gamma_f64(&self) -> f64 {
        crate::exact::to_f64(&self.gamma)
    }
}

/// `Γ_K` over a zero-threshold catalog. Each exact `W^1` is cross-checked
/// against the Walsh–Hadamard spectrum.
pub fn gamma_from_catalog(c: &Catalog) -> Result<BksReport> {
    if c.mode != Mode::ZeroThreshold {
        return Err(Error::CatalogUnavailable(format!(
            "need a zero-threshold catalog, got mode {}",
            c.mode
        )));
    }
    if c.records.is_empty() {
        return Err(Error::CatalogUnavailable("catalog is empty".into()));
    }
    c.records.par_iter().try_for_each(|r| {
        let spectral = crate::hypercube::degree_weight(&wht(&r.table), Level::Exactly(1));
        let exact = crate::exact::to_f64(&r.w1_exact());
        if (spectral - exact).abs() > 1e-12 {
            return Err(Error::StrategyDisagreement(format!(
                "W^1 of {:?}: spectrum gives {spectral}, Chow parameters give {exact}",
                r.table
            )));
        }
        Ok(())
    })?;
    let mut bins: BTreeMap<u128, (usize, u64)> = BTreeMap::new();
    for r in &c.records {
        let e = bins.entry(r.w1_numerator()).or_default();
        e.0 += 1;
        e.1 += r.orbit_size;
    }
    // Records are in lex order, so the first minimizer is the least one.
    let min_num = *bins.keys().next().unwrap();
    let argmin = c.records.iter().find(|r| r.w1_numerator() == min_num).unwrap().clone();
    let denom = BigInt::one() << (2 * c.n);
    let histogram = bins
        .into_iter()
        .map(|(num, (representatives, functions))| HistogramBin {
            w1: BigRational::new(num.into(), denom.clone()),
            representatives,
            functions,
        })
        .collect();
    Ok(BksReport {
        k: c.n,
        gamma: argmin.w1_exact(),
        argmin,
        histogram,
        representatives: c.records.len(),
        full_count: c.full_count(),
    })
}

/// `Γ_K`, building or loading the zero-threshold catalog from `dir`
/// (the default cache directory when `None`).
pub fn gamma_search_in(k: usize, dir: Option<&std::path::Path>) -> Result<BksReport> {
    check_dim(k, MAX_GAMMA_K)?;
    if k == 0 {
        return Err(Error::Domain("K must be positive".into()));
    }
    let dir = dir.map_or_else(default_catalog_dir, |d| d.to_path_buf());
    let catalog = Catalog::load_or_build(k, Mode::ZeroThreshold, &dir)?;
    gamma_from_catalog(&catalog)
}

pub fn gamma_search(k: usize) -> Result<BksReport> {
    gamma_search_in(k, None)
}

/// `W^1[Maj_n] = n·(C(n−1, (n−1)/2) / 2^{n−1})²` for odd `n`.
pub fn majority_w1(n: usize) -> Result<BigRational> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("majority needs an odd number of inputs, got {n}")));
    }
    let h = (n - 1) / 2;
    let mut c = BigInt::one();
    for i in 0..h {
        c = c * BigInt::from(n - 1 - i) / BigInt::from(i + 1);
    }
    let denom = BigInt::one() << (n - 1);
    Ok(BigRational::from_integer(n.into()) * BigRational::new(c.clone() * c, denom.clone() * denom))
}

/// The ε-to-parameter map `K = M = ε^{-24}` with unit constants. Advisory
/// only: these values are far beyond exhaustive reach for any useful ε.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonParameters {
    pub epsilon: f64,
    pub k: f64,
    pub m: f64,
}

pub fn parameters_for_epsilon(epsilon: f64) -> Result<EpsilonParameters> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("ε must lie in (0, 1), got {epsilon}")));
    }
    let k = epsilon.powi(-24);
    Ok(EpsilonParameters { epsilon, k, m: k })
}

/// `L(δ) = ⌈(2/δ²)·ln(4/δ)⌉`, the critical-index cutoff between the two cases.
pub fn junta_cutoff(delta: f64) -> usize {
    ((2.0 / (delta * delta)) * (4.0 / delta).ln()).ceil() as usize
}

#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    /// Large critical index: `g = sign(w_H·x_H)` on the first `head_len`
    /// proper coordinates.
    Junta {
        head_len: usize,
        /// `Pr[f ≠ g]`, when `n ≤ MAX_BRUTE_DIM`.
        hamming_dist: Option<f64>,
    },
    /// Small critical index `c`: head `H` = first `c − 1` coordinates, the
    /// regular tail replaced by `‖w_T‖·Σ z_i/√M`.
    HeadTail {
        head_len: usize,
        tail_norm: f64,
        m: usize,
    },
}

/// Record of one pass of the reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    pub input: WeightVector,
    pub proper: ProperForm,
    pub delta: f64,
    pub cutoff: usize,
    /// `None` when every support coordinate is heavy.
    pub critical_index: Option<usize>,
    pub branch: Branch,
    /// `W^1[f]`, brute force.
    pub w1_f: Option<f64>,
    /// `W̃¹[f]`: tail coordinates replaced by independent Gaussians.
    pub w1_gaussianized: Option<f64>,
    /// `W̃¹[F]`: tail collapsed to one Gaussian of variance `‖w_T‖²`.
    pub w1_collapsed: Option<f64>,
    /// `W^1[g]`.
    pub w1_g: Option<f64>,
    /// Head weights of `g` in proper coordinates.
    pub g_head: Vec<f64>,
}

impl ReductionTrace {
    pub fn step2_error(&self) -> Option<f64> {
        Some((self.w1_gaussianized? - self.w1_collapsed?).abs())
    }

    pub fn booleanization_error(&self) -> Option<f64> {
        Some((self.w1_collapsed? - self.w1_g?).abs())
    }
}

fn w1_brute(w: &[f64]) -> Result<f64> {
    let t = Ltf::zero_threshold(WeightVector::new(w.to_vec())).to_truth_table()?;
    Ok(ChowParameters::of(&t).w1())
}

/// `ln C(m, k) − m ln 2` for `k = 0..=m`, normalized to sum to one.
fn binomial_pmf(m: usize) -> Vec<f64> {
    let mf = m as f64;
    let base = libm::lgamma(mf + 1.0) - mf * std::f64::consts::LN_2;
    let mut p: Vec<f64> = (0..=m)
        .map(|k| (base - libm::lgamma(k as f64 + 1.0) - libm::lgamma((m - k) as f64 + 1.0)).exp())
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

/// Exact `W^1` of `g(x_H, z) = sign(w_H·x_H + σ·Σ_{i≤M} z_i/√M)`, using that
/// `Σ z_i = 2k − M` with `k ~ Bin(M, 1/2)` and `E[z_j | Σz] = Σz/M`.
pub fn booleanized_w1(w_head: &[f64], sigma: f64, m: usize) -> Result<f64> {
    if w_head.len() > MAX_HEAD {
        return Err(Error::HeadTooLarge(w_head.len()));
    }
    if m == 0 || !(sigma > 0.0) {
        return Err(Error::Domain("need M ≥ 1 and a positive tail norm".into()));
    }
    let pmf = binomial_pmf(m);
    let scale = sigma / (m as f64).sqrt();
    let y = |k: usize| 2.0 * k as f64 - m as f64;
    // Suffix sums of P(k) and of E[Y·1{k}].
    let mut tail_p = vec![0.0; m + 2];
    let mut tail_y = vec![0.0; m + 2];
    for k in (0..=m).rev() {
        tail_p[k] = tail_p[k + 1] + pmf[k];
        tail_y[k] = tail_y[k + 1] + pmf[k] * y(k);
    }
    let s = linear_form_values(w_head);
    let h = w_head.len();
    let mut head = vec![0.0; h];
    let mut tail = 0.0;
    for (b, &sb) in s.iter().enumerate() {
        // Smallest k with sb + scale·y(k) ≥ 0, found from the estimate and
        // then corrected against the exact float predicate.
        let est = ((m as f64 - sb / scale) / 2.0).ceil().clamp(0.0, m as f64 + 1.0) as usize;
        let mut k = est;
        while k > 0 && sb + scale * y(k - 1) >= 0.0 {
            k -= 1;
        }
        while k <= m && sb + scale * y(k) < 0.0 {
            k += 1;
        }
        // E[sign] = 2P(k ≥ k*) − 1; E[Y sign] = 2E[Y; k ≥ k*] since E[Y] = 0.
        let e_sign = 2.0 * tail_p[k] - 1.0;
        let e_y = 2.0 * tail_y[k];
        for (i, c) in head.iter_mut().enumerate() {
            if b >> i & 1 == 1 {
                *c += e_sign;
            } else {
                *c -= e_sign;
            }
        }
        tail += e_y;
    }
    let norm = s.len() as f64;
    let head_w1: f64 = head.iter().map(|c| (c / norm).powi(2)).sum();
    let tail_total = tail / norm;
    Ok(head_w1 + tail_total * tail_total / m as f64)
}

/// One pass of the variable reduction for the zero-threshold LTF `sign(w·x)`.
pub fn reduce_w1(w: &WeightVector, delta: f64, m: usize) -> Result<ReductionTrace> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("δ must lie in (0, 1), got {delta}")));
    }
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    let n = w.len();
    if n == 0 || w.norm() == 0.0 {
        return Err(Error::Domain("weight vector must be nonzero".into()));
    }
    if n <= MAX_BRUTE_DIM {
        if let Some(witness) = match Ltf::zero_threshold(w.clone()).degeneracy()? {
            crate::ltf::Degeneracy::Degenerate { witness } => Some(witness),
            crate::ltf::Degeneracy::NonDegenerate => None,
        } {
            return Err(Error::Degenerate { witness });
        }
    }
    let proper = make_proper(w);
    let pw = proper.weights.values().to_vec();
    let cutoff = junta_cutoff(delta);
    let ci = critical_index(&proper.weights, delta);
    let w1_f = if n <= MAX_BRUTE_DIM { Some(w1_brute(&pw)?) } else { None };

    let case_one = ci.index.map_or(true, |c| c >= cutoff);
    if case_one {
        let head_len = cutoff.min(n);
        let g_head = pw[..head_len].to_vec();
        let (hd, w1_g) = if n <= MAX_BRUTE_DIM {
            let f = Ltf::zero_threshold(proper.weights.clone()).to_truth_table()?;
            let mut padded = g_head.clone();
            padded.resize(n, 0.0);
            let g = Ltf::zero_threshold(WeightVector::new(padded)).to_truth_table()?;
            (Some(hamming_dist(&f, &g)?), Some(ChowParameters::of(&g).w1()))
        } else if head_len <= MAX_BRUTE_DIM {
            (None, Some(w1_brute(&g_head)?))
        } else {
            (None, None)
        };
        return Ok(ReductionTrace {
            input: w.clone(),
            proper,
            delta,
            cutoff,
            critical_index: ci.index,
            branch: Branch::Junta {
                head_len,
                hamming_dist: hd,
            },
            w1_f,
            w1_gaussianized: None,
            w1_collapsed: None,
            w1_g,
            g_head,
        });
    }

    let c = ci.index.unwrap();
    let head_len = c - 1;
    if head_len > MAX_HEAD {
        return Err(Error::HeadTooLarge(head_len));
    }
    let (w_head, w_tail) = pw.split_at(head_len);
    let tail_norm = ci.sigma[head_len];
    let (_, _, w1_gaussianized) = mixed_degree1_independent(w_head, w_tail)?;
    let w1_collapsed = mixed_degree1(w_head, tail_norm)?.w1;
    let w1_g = booleanized_w1(w_head, tail_norm, m)?;
    Ok(ReductionTrace {
        input: w.clone(),
        proper,
        delta,
        cutoff,
        critical_index: ci.index,
        branch: Branch::HeadTail {
            head_len,
            tail_norm,
            m,
        },
        w1_f,
        w1_gaussianized: Some(w1_gaussianized),
        w1_collapsed: Some(w1_collapsed),
        w1_g: Some(w1_g),
        g_head: w_head.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::TruthTable;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn majority_formula_matches_spectrum() {
        for n in [1usize, 3, 5, 7, 9] {
            let t = TruthTable::majority(n).unwrap();
            let spectral = crate::hypercube::degree_weight(&wht(&t), Level::Exactly(1));
            assert!((spectral - crate::exact::to_f64(&majority_w1(n).unwrap())).abs() < 1e-13);
        }
        assert_eq!(majority_w1(3).unwrap(), q(3, 4));
        assert_eq!(majority_w1(5).unwrap(), q(45, 64));
    }

    #[test]
    fn small_gamma_values() {
        let dir = std::env::temp_dir().join(format!("bfc-bks-test-{}", std::process::id()));
        let g2 = gamma_search_in(2, Some(&dir)).unwrap();
        assert_eq!(g2.gamma, q(1, 1));
        assert_eq!(g2.full_count, 4);
        let g3 = gamma_search_in(3, Some(&dir)).unwrap();
        assert_eq!(g3.gamma, q(3, 4));
        assert_eq!(g3.full_count, 14);
        assert_eq!(g3.argmin.table, TruthTable::majority(3).unwrap());
        let hist: u64 = g3.histogram.iter().map(|b| b.functions).sum();
        assert_eq!(hist, 14);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(junta_cutoff(0.5), 17);
        assert!(junta_cutoff(0.1) > junta_cutoff(0.3));
    }

    /// `W^1[g]` by enumerating all `2^{|H|+M}` points of `g`.
    fn booleanized_brute(w_head: &[f64], sigma: f64, m: usize) -> f64 {
        let mut w = w_head.to_vec();
        w.extend(std::iter::repeat(sigma / (m as f64).sqrt()).take(m));
        w1_brute(&w).unwrap()
    }

    #[test]
    fn booleanized_matches_brute_force() {
        let cases: &[(&[f64], f64, usize)] = &[
            (&[], 1.0, 15),
            (&[0.7, 0.3], 0.5, 9),
            (&[0.9, 0.41, 0.2], 0.33, 12),
            (&[0.5], 0.8, 1),
        ];
        for &(h, s, m) in cases {
            let a = booleanized_w1(h, s, m).unwrap();
            let b = booleanized_brute(h, s, m);
            assert!((a - b).abs() < 1e-12, "{h:?} {s} {m}: {a} vs {b}");
        }
    }

    #[test]
    fn majority_nine_collapses_to_majority() {
        let w = WeightVector::new(vec![1.0; 9]).normalized();
        let tr = reduce_w1(&w, 0.5, 15).unwrap();
        assert_eq!(tr.critical_index, Some(1));
        assert!(matches!(tr.branch, Branch::HeadTail { head_len: 0, .. }));
        let w1_f = tr.w1_f.unwrap();
        let w1_g = tr.w1_g.unwrap();
        assert!((w1_f - crate::exact::to_f64(&majority_w1(9).unwrap())).abs() < 1e-12);
        assert!((w1_g - crate::exact::to_f64(&majority_w1(15).unwrap())).abs() < 1e-12);
        assert!((w1_f - w1_g).abs() <= 0.05);
        assert!(tr.step2_error().unwrap() <= 1e-8);
    }

    #[test]
    fn dominant_weight_gives_exact_junta() {
        let mut v = vec![100.0];
        v.extend(std::iter::repeat(1.0).take(9));
        let w = WeightVector::new(v).normalized();
        let tr = reduce_w1(&w, 0.05, 16).unwrap();
        match tr.branch {
            Branch::Junta { hamming_dist, .. } => assert_eq!(hamming_dist, Some(0.0)),
            _ => panic!("expected the junta branch"),
        }
        assert_eq!(tr.w1_f, tr.w1_g);
    }

    #[test]
    fn degenerate_input_rejected() {
        let w = WeightVector::from_integers(&[1, 1]);
        assert!(matches!(reduce_w1(&w, 0.3, 4), Err(Error::Degenerate { .. })));
    }
}
