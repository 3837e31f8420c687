//! Tail probabilities `T_in(w, a) = Pr[|w·x| ≤ a]`, the exact value of
//! `inf_{w ∈ 𝕊^{m−1}} T(w)` for small `m`, and the dimension reduction that
//! justifies computing it in bounded dimension.
//!
//! `T(𝕊^{m−1})` is found from the separable sets: `P ⊂ {−1,1}^m` is
//! separable when some unit `w` has `w·x > 1` on `P`, and by symmetry
//! `|w·x| > 1` exactly on `P ∪ −P`. Every such `P` is the positive side of an
//! affine threshold function. For a candidate `P` the least `‖w‖` with
//! `w·x ≥ 1` on `P` is `1/‖z‖`, where `z` is the minimum-norm point of the
//! convex hull of `P`, so `P` is separable iff `‖z‖² > 1`.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::enumeration::{default_catalog_dir, Catalog, Mode};
use crate::error::{Error, Result};
use crate::exact::{solve_square, to_f64};
use crate::hypercube::point;
use crate::ltf::{critical_index, make_proper, WeightVector};
use crate::rademacher::{prob_abs_le, tail_counts_exact, TailCounts};

/// Largest `m` accepted by [`t_sphere`].
pub const MAX_SPHERE_DIM: usize = 5;

/// Margin around `‖z‖² = 1` inside which the float pre-solve abstains.
const FLOAT_VERDICT_MARGIN: f64 = 1e-9;

/// Largest number of equal coordinates the small-critical-index branch may
/// append.
pub const MAX_LAMBDA: usize = 1 << 22;

/// `Pr[|w·x| ≤ a]` by exhaustive evaluation.
pub fn t_in(w: &[f64], a: f64) -> Result<f64> {
    prob_abs_le(w, a)
}

/// `Pr[|w·x| ≥ a]`. The boundary guard in [`t_in`] rules out points with
/// `|w·x| = a`, so this is `1 − T_in`.
pub fn t_out(w: &[f64], a: f64) -> Result<f64> {
    Ok(1.0 - prob_abs_le(w, a)?)
}

/// Exact tail probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTail {
    pub counts: TailCounts,
    pub t_in: BigRational,
    pub t_out: BigRational,
}

/// `T_in` and `T_out` in rational arithmetic. Unless `normalize` is set the
/// weights must have `‖w‖² = 1` exactly; otherwise `w` is scaled to unit
/// norm symbolically.
pub fn t_exact(w: &WeightVector, a: &BigRational, normalize: bool) -> Result<ExactTail> {
    let e = w
        .exact()
        .ok_or_else(|| Error::Domain("exact evaluation needs rational weights".into()))?;
    if !normalize {
        let norm_sq = w.norm_sq_exact().unwrap();
        if !norm_sq.is_one() {
            return Err(Error::Indeterminate(format!(
                "‖w‖² = {norm_sq} is not exactly 1; give exact unit weights or normalize"
            )));
        }
    }
    let counts = tail_counts_exact(e, a, normalize)?;
    Ok(ExactTail {
        t_in: counts.inside(),
        t_out: counts.outside(),
        counts,
    })
}

/// How a [`FeasibilityResult`] was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `P` is empty; `w = 0` works.
    Empty,
    /// `P` contains an antipodal pair, so no `w` exists.
    Antipodal,
    /// Exact optimality check on the support found by the float solver.
    FloatSupport,
    /// Exact optimality check on a support found by exhaustive search.
    ExhaustiveSupport,
}

/// Outcome of `min ‖w‖ s.t. w·x ≥ 1 for x ∈ P`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityResult {
    pub m: usize,
    pub points: Vec<usize>,
    /// Minimum-norm point of `conv(P)`.
    pub min_norm_point: Option<Vec<BigRational>>,
    /// `ν*²`, or `None` when infeasible.
    pub nu_sq: Option<BigRational>,
    /// Optimal `w = z/‖z‖²`.
    pub witness: Option<Vec<BigRational>>,
    /// `ν* < 1`.
    pub separable: bool,
    /// The float pre-solve verdict, `None` when within the margin of 1.
    pub float_verdict: Option<bool>,
    pub certificate: Certificate,
}

impl FeasibilityResult {
    pub fn nu(&self) -> f64 {
        self.nu_sq.as_ref().map_or(f64::INFINITY, |v| to_f64(v).sqrt())
    }

    /// The witness scaled to unit norm.
    pub fn unit_witness(&self) -> Option<Vec<f64>> {
        let w: Vec<f64> = self.witness.as_ref()?.iter().map(to_f64).collect();
        let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        (n > 0.0).then(|| w.iter().map(|v| v / n).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `[G 1; 1ᵀ 0]·(α, μ) = (0, 1)` for the affine minimum-norm point of
/// `pts[s]`, in floating point.
fn affine_min_norm_f64(pts: &[Vec<f64>], s: &[usize]) -> Option<Vec<f64>> {
    let k = s.len();
    let mut a = vec![vec![0.0; k + 2]; k + 1];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = dot(&pts[s[i]], &pts[s[j]]);
        }
        a[i][k] = 1.0;
        a[k][i] = 1.0;
    }
    a[k][k + 1] = 1.0;
    for col in 0..=k {
        let p = (col..=k).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[p][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, p);
        let piv = a[col][col];
        a[col].iter_mut().for_each(|v| *v /= piv);
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                row.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
            }
        }
    }
    Some(a[..k].iter().map(|r| r[k + 1]).collect())
}

/// Wolfe's minimum-norm-point algorithm; returns the final support.
fn wolfe_f64(pts: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let combine = |s: &[usize], lam: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; pts[0].len()];
        for (&i, &l) in s.iter().zip(lam) {
            x.iter_mut().zip(&pts[i]).for_each(|(a, b)| *a += l * b);
        }
        x
    };
    let first = (0..pts.len())
        .min_by(|&a, &b| dot(&pts[a], &pts[a]).total_cmp(&dot(&pts[b], &pts[b])))
        .unwrap();
    let mut s = vec![first];
    let mut lam = vec![1.0];
    let mut x = pts[first].clone();
    for _ in 0..1000 {
        let xx = dot(&x, &x);
        let (j, best) = (0..pts.len())
            .map(|j| (j, dot(&pts[j], &x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - best <= 1e-12 * xx.max(1.0) || s.contains(&j) {
            break;
        }
        s.push(j);
        lam.push(0.0);
        loop {
            let Some(alpha) = affine_min_norm_f64(pts, &s) else {
                break;
            };
            if alpha.iter().all(|&a| a > 1e-14) {
                lam = alpha;
                break;
            }
            let theta = lam
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= 1e-14)
                .map(|(&l, &a)| l / (l - a))
                .fold(f64::INFINITY, f64::min);
            lam = lam.iter().zip(&alpha).map(|(&l, &a)| theta * a + (1.0 - theta) * l).collect();
            let keep: Vec<bool> = lam.iter().map(|&l| l > 1e-14).collect();
            s = s.iter().zip(&keep).filter(|(_, &k)| k).map(|(&i, _)| i).collect();
            lam = lam.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();
        }
        x = combine(&s, &lam);
    }
    let xx = dot(&x, &x);
    (s, xx)
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact minimum-norm point of `conv(pts)` if `pts[s]` supports it.
fn certify(pts: &[Vec<i64>], s: &[usize]) -> Option<(Vec<BigRational>, BigRational)> {
    let k = s.len();
    let mut a = vec![vec![BigRational::zero(); k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = q(pts[s[i]].iter().zip(&pts[s[j]]).map(|(x, y)| x * y).sum());
        }
        a[i][k] = BigRational::one();
        a[k][i] = BigRational::one();
    }
    let mut b = vec![BigRational::zero(); k + 1];
    b[k] = BigRational::one();
    let sol = solve_square(&a, &b)?;
    if sol[..k].iter().any(Signed::is_negative) {
        return None;
    }
    let dim = pts[0].len();
    let z: Vec<BigRational> = (0..dim)
        .map(|c| s.iter().zip(&sol).map(|(&i, l)| l * q(pts[i][c])).sum())
        .collect();
    let zz: BigRational = z.iter().map(|v| v * v).sum();
    let optimal = pts.iter().all(|p| {
        let pz: BigRational = p.iter().zip(&z).map(|(&x, v)| v * q(x)).sum();
        pz >= zz
    });
    optimal.then_some((z, zz))
}

/// Exhaustive search for a certifiable support of size at most `dim + 1`.
fn certify_exhaustive(pts: &[Vec<i64>]) -> (Vec<BigRational>, BigRational) {
    use itertools::Itertools;
    let dim = pts[0].len();
    for k in 1..=(dim + 1).min(pts.len()) {
        for s in (0..pts.len()).combinations(k) {
            if let Some(r) = certify(pts, &s) {
                return r;
            }
        }
    }
    unreachable!("Carathéodory guarantees a support of size at most dim + 1")
}

/// Decides whether `P` (hypercube point indices in dimension `m`) is
/// separable, with an exact rational certificate.
pub fn min_norm_feasibility(m: usize, points: &[usize]) -> Result<FeasibilityResult> {
    crate::error::check_dim(m, crate::hypercube::MAX_DIM)?;
    let mut p: Vec<usize> = points.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.iter().any(|&b| b >> m != 0) {
        return Err(Error::Domain(format!("point index out of range for m={m}")));
    }
    let base = FeasibilityResult {
        m,
        points: p.clone(),
        min_norm_point: None,
        nu_sq: None,
        witness: None,
        separable: false,
        float_verdict: None,
        certificate: Certificate::Empty,
    };
    if p.is_empty() {
        return Ok(FeasibilityResult {
            nu_sq: Some(BigRational::zero()),
            witness: Some(vec![BigRational::zero(); m]),
            separable: true,
            float_verdict: Some(true),
            ..base
        });
    }
    let mask = (1usize << m) - 1;
    if p.iter().any(|&b| p.binary_search(&(!b & mask)).is_ok()) {
        return Ok(FeasibilityResult {
            float_verdict: Some(false),
            certificate: Certificate::Antipodal,
            ..base
        });
    }
    let pts: Vec<Vec<i64>> = p
        .iter()
        .map(|&b| point(b, m).into_iter().map(i64::from).collect())
        .collect();
    let pts_f: Vec<Vec<f64>> = pts.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect();
    let (support, zz_f) = wolfe_f64(&pts_f);
    let float_verdict = ((zz_f - 1.0).abs() > FLOAT_VERDICT_MARGIN).then_some(zz_f > 1.0);
    let (z, zz, certificate) = match certify(&pts, &support) {
        Some((z, zz)) => (z, zz, Certificate::FloatSupport),
        None => {
            let (z, zz) = certify_exhaustive(&pts);
            (z, zz, Certificate::ExhaustiveSupport)
        }
    };
    let separable = zz > BigRational::one();
    if float_verdict.is_some_and(|f| f != separable) {
        return Err(Error::StrategyDisagreement(format!(
            "float solve says ‖z‖² = {zz_f} but the exact certificate gives {zz} for {p:?}"
        )));
    }
    if zz.is_zero() {
        return Ok(FeasibilityResult {
            min_norm_point: Some(z),
            float_verdict,
            certificate,
            ..base
        });
    }
    let witness: Vec<BigRational> = z.iter().map(|v| v / &zz).collect();
    debug_assert!(pts.iter().all(|x| {
        let s: BigRational = x.iter().zip(&witness).map(|(&a, w)| w * q(a)).sum();
        s >= BigRational::one()
    }));
    Ok(FeasibilityResult {
        min_norm_point: Some(z),
        nu_sq: Some(zz.recip()),
        witness: Some(witness),
        separable,
        float_verdict,
        certificate,
        ..base
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SphereStats {
    /// Canonical threshold functions considered.
    pub candidates: usize,
    /// Candidates discarded for containing an antipodal pair.
    pub antipodal: usize,
    /// Calls to the min-norm solver.
    pub oracle_calls: usize,
    /// Certificates that needed the exhaustive fallback.
    pub exhaustive_fallbacks: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TomReport {
    pub m: usize,
    /// `T(𝕊^{m−1}) = 1 − 2|P|/2^m` for the largest separable `P`.
    pub value: BigRational,
    pub max_separable_size: usize,
    /// The lexicographically first maximum separable set among canonical
    /// representatives.
    pub separable_set: Vec<usize>,
    pub witness: Vec<BigRational>,
    pub witness_unit: Vec<f64>,
    pub stats: SphereStats,
}

impl TomReport {
    pub fn value_f64(&self) -> f64 {
        to_f64(&self.value)
    }
}

/// `T(𝕊^{m−1})` from the all-LTF catalog in `dir` (default cache when `None`).
pub fn t_sphere_in(m: usize, dir: Option<&Path>) -> Result<TomReport> {
    crate::error::check_dim(m, MAX_SPHERE_DIM)?;
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let dir = dir.map_or_else(default_catalog_dir, |d| d.to_path_buf());
    let catalog = Catalog::load_or_build(m, Mode::All, &dir)?;
    let mask = (1usize << m) - 1;
    let mut stats = SphereStats {
        candidates: catalog.records.len(),
        ..SphereStats::default()
    };
    // Separability and |P| are invariant under permutations and negations of
    // coordinates, so canonical representatives suffice.
    let mut by_size: Vec<(usize, Vec<usize>)> = Vec::new();
    for r in &catalog.records {
        let pos: Vec<usize> = (0..1usize << m).filter(|&b| r.table.get(b)).collect();
        if pos.iter().any(|&b| r.table.get(!b & mask)) {
            stats.antipodal += 1;
            continue;
        }
        by_size.push((pos.len(), pos));
    }
    // Stable sort keeps catalog order within each size.
    by_size.sort_by(|a, b| b.0.cmp(&a.0));
    let mut start = 0;
    while start < by_size.len() {
        let size = by_size[start].0;
        let end = start + by_size[start..].iter().take_while(|c| c.0 == size).count();
        let results: Vec<FeasibilityResult> = by_size[start..end]
            .par_iter()
            .map(|(_, pos)| min_norm_feasibility(m, pos))
            .collect::<Result<_>>()?;
        stats.oracle_calls += results.len();
        stats.exhaustive_fallbacks += results
            .iter()
            .filter(|r| r.certificate == Certificate::ExhaustiveSupport)
            .count();
        if let Some(best) = results.into_iter().find(|r| r.separable) {
            let value = BigRational::one()
                - BigRational::new(BigInt::from(2 * size), BigInt::one() << m);
            return Ok(TomReport {
                m,
                value,
                max_separable_size: size,
                witness_unit: best.unit_witness().unwrap_or_else(|| {
                    let mut e = vec![0.0; m];
                    e[0] = 1.0;
                    e
                }),
                witness: best.witness.clone().unwrap(),
                separable_set: best.points,
                stats,
            });
        }
        start = end;
    }
    unreachable!("the empty set is always separable")
}

pub fn t_sphere(m: usize) -> Result<TomReport> {
    t_sphere_in(m, None)
}

/// Constants of the dimension reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionParameters {
    pub eta: f64,
    pub t: f64,
    /// Critical-index cutoff `K`.
    pub k: usize,
    /// Number of equal coordinates `λ = ⌈4/η²⌉`.
    pub lambda: usize,
}

impl ReductionParameters {
    /// `η = ε/64`, `t = 8·log₂(16/η)`, `K = ⌈(t/η²)·log₂(t/η)⌉`.
    pub fn for_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Domain(format!("ε must lie in (0, 1], got {epsilon}")));
        }
        let eta = epsilon / 64.0;
        let t = 8.0 * (16.0 / eta).log2();
        let k = ((t / (eta * eta)) * (t / eta).log2()).ceil();
        Ok(Self::new(eta, t, if k >= usize::MAX as f64 { usize::MAX } else { k as usize }))
    }

    pub fn new(eta: f64, t: f64, k: usize) -> Self {
        let lambda = (4.0 / (eta * eta)).ceil();
        Self {
            eta,
            t,
            k,
            lambda: if lambda >= usize::MAX as f64 { usize::MAX } else { lambda as usize },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionBranch {
    /// Critical index beyond `K` and `n ≤ K`: `v = w`.
    Identity,
    /// Critical index beyond `K < n`: `v = (w_1, …, w_K, ‖(w_{K+1}, …)‖)`.
    LargeCriticalIndex,
    /// Critical index `c ≤ K`: head `w_1, …, w_{c−1}`, then `λ` equal
    /// coordinates, renormalized.
    SmallCriticalIndex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReduction {
    pub params: ReductionParameters,
    pub critical_index: Option<usize>,
    pub branch: DimensionBranch,
    /// In proper coordinates.
    pub v: WeightVector,
}

/// Maps a unit `w` to a unit `v` of bounded dimension with `T(v) ≈ T(w)`.
pub fn reduce_dimension_with(w: &WeightVector, params: ReductionParameters) -> Result<DimensionReduction> {
    if w.is_empty() || (w.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("w must be a unit vector, ‖w‖ = {}", w.norm())));
    }
    let proper = make_proper(w).weights;
    let pw = proper.values();
    let n = pw.len();
    let ci = critical_index(&proper, params.eta);
    let large = ci.index.map_or(true, |c| c > params.k);
    let (branch, v) = if large && n <= params.k {
        (DimensionBranch::Identity, pw.to_vec())
    } else if large {
        let k = params.k;
        let mut v = pw[..k].to_vec();
        v.push(ci.sigma[k]);
        (DimensionBranch::LargeCriticalIndex, v)
    } else {
        let c = ci.index.unwrap();
        if params.lambda > MAX_LAMBDA {
            return Err(Error::Domain(format!(
                "λ = {} equal coordinates exceeds the limit of {MAX_LAMBDA}",
                params.lambda
            )));
        }
        let mut v = pw[..c - 1].to_vec();
        let value = params.eta / 2.0 * ci.sigma[c - 1];
        v.extend(std::iter::repeat(value).take(params.lambda));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        (DimensionBranch::SmallCriticalIndex, v)
    };
    Ok(DimensionReduction {
        params,
        critical_index: ci.index,
        branch,
        v: WeightVector::new(v),
    })
}

/// [`reduce_dimension_with`] using the parameters for accuracy `ε`.
pub fn reduce_dimension_t(w: &WeightVector, epsilon: f64) -> Result<DimensionReduction> {
    reduce_dimension_with(w, ReductionParameters::for_epsilon(epsilon)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::index_of;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn idx(x: &[i8]) -> usize {
        index_of(x)
    }

    #[test]
    fn tail_examples() {
        assert_eq!(t_in(&[1.0], 1.0).ok(), None);
        let e = t_exact(&WeightVector::from_integers(&[1]), &r(1, 1), false).unwrap();
        assert_eq!(e.t_in, r(1, 1));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(t_in(&[h, h], 1.0).unwrap(), 0.5);
        let w = WeightVector::parse("3/5,4/5", true).unwrap();
        let e = t_exact(&w, &r(1, 1), false).unwrap();
        assert_eq!(e.t_in, r(1, 2));
        assert_eq!(e.t_out, r(1, 2));
        let e = t_exact(&WeightVector::from_integers(&[1, 1]), &r(1, 1), true).unwrap();
        assert_eq!(e.t_in, r(1, 2));
        let near = WeightVector::parse("0.70710678,0.70710678", true).unwrap();
        assert!(matches!(t_exact(&near, &r(1, 1), false), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn feasibility_examples() {
        let p = min_norm_feasibility(2, &[idx(&[1, 1])]).unwrap();
        assert!(p.separable);
        assert_eq!(p.nu_sq, Some(r(1, 2)));
        assert_eq!(p.witness, Some(vec![r(1, 2), r(1, 2)]));
        let p = min_norm_feasibility(2, &[idx(&[1, 1]), idx(&[-1, -1])]).unwrap();
        assert!(!p.separable && p.nu_sq.is_none());
        let p = min_norm_feasibility(2, &[idx(&[1, 1]), idx(&[1, -1])]).unwrap();
        assert_eq!(p.nu_sq, Some(r(1, 1)));
        assert_eq!(p.witness, Some(vec![r(1, 1), r(0, 1)]));
        assert!(!p.separable);
        assert_eq!(p.float_verdict, None);
    }

    /// Oracle: the min-norm point over all supports, by brute force.
    #[test]
    fn feasibility_matches_exhaustive_supports() {
        let m = 3;
        for mask in 1u32..1 << 8 {
            let p: Vec<usize> = (0..8).filter(|b| mask >> b & 1 == 1).collect();
            let res = min_norm_feasibility(m, &p).unwrap();
            if res.certificate == Certificate::Antipodal {
                continue;
            }
            let pts: Vec<Vec<i64>> = p
                .iter()
                .map(|&b| point(b, m).into_iter().map(i64::from).collect())
                .collect();
            let (z, zz) = certify_exhaustive(&pts);
            assert_eq!(res.min_norm_point, Some(z));
            assert_eq!(res.separable, zz > BigRational::one());
        }
    }

    #[test]
    fn sphere_values() {
        let dir = std::env::temp_dir().join(format!("bfc-tom-test-{}", std::process::id()));
        let t1 = t_sphere_in(1, Some(&dir)).unwrap();
        assert_eq!(t1.value, r(1, 1));
        let t2 = t_sphere_in(2, Some(&dir)).unwrap();
        assert_eq!(t2.value, r(1, 2));
        assert_eq!(t2.max_separable_size, 1);
        let t3 = t_sphere_in(3, Some(&dir)).unwrap();
        assert!(t3.value >= r(3, 8) && t3.value <= r(1, 2));
        assert!(t3.value <= t2.value);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let w: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = w.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
            let w: Vec<f64> = w.iter().map(|v| v / n).collect();
            if let Ok(t) = t_in(&w, 1.0) {
                assert!(t3.value_f64() <= t + 1e-15);
            }
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn reduction_branches() {
        let p = ReductionParameters::for_epsilon(0.25).unwrap();
        assert_eq!(p.lambda, 4 * 256 * 256);
        let w = WeightVector::new(vec![0.6, 0.8]);
        let red = reduce_dimension_t(&w, 0.25).unwrap();
        assert_eq!(red.branch, DimensionBranch::Identity);
        assert_eq!(red.v.values(), &[0.8, 0.6]);

        // Dominant head: the large branch keeps w_1..w_K and the tail norm.
        let mut v = vec![0.99f64];
        let rest = (1.0 - 0.99f64 * 0.99).sqrt() / 3.0;
        v.extend([rest; 9].iter().map(|x| x * (1.0 + 1e-3)));
        let w = WeightVector::new(v).normalized();
        let red = reduce_dimension_with(&w, ReductionParameters::new(0.05, 4.0, 1)).unwrap();
        assert_eq!(red.branch, DimensionBranch::LargeCriticalIndex);
        assert_eq!(red.v.values()[0], w.values()[0]);
        assert!((red.v.norm() - 1.0).abs() < 1e-12);
        let (tw, tv) = (t_in(w.values(), 1.0).unwrap(), t_in(red.v.values(), 1.0).unwrap());
        assert!((tw - tv).abs() <= 0.05, "{tw} vs {tv}");

        // Flat vector: the small branch fires at the first coordinate.
        let w = WeightVector::new(vec![1.0; 20]).normalized();
        let red = reduce_dimension_with(&w, ReductionParameters::new(0.3, 4.0, 10)).unwrap();
        assert_eq!(red.branch, DimensionBranch::SmallCriticalIndex);
        assert_eq!(red.v.len(), 45);
        let (tw, tv) = (t_in(w.values(), 1.0).unwrap(), t_in(red.v.values(), 1.0).unwrap());
        assert!((tw - tv).abs() <= 8.0 * 0.3, "{tw} vs {tv}");
    }
}
