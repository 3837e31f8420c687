//! Distribution of Rademacher sums `w·x` for uniform `x ∈ {-1,1}^n`.
//!
//! Up to [`DIRECT_DIM`] coordinates are enumerated directly in chunks. Longer
//! vectors are supported when all but at most [`MAX_DIM`] coordinates share a
//! common absolute value: that run is handled through the binomial law of its
//! partial sum.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::exact::primitive_integer_vector;
use crate::hypercube::MAX_DIM;
use crate::ltf::{integer_form_values, linear_form_values, FLOAT_BOUNDARY_TOL};

/// Dimension up to which every coordinate is enumerated individually.
pub const DIRECT_DIM: usize = 24;

const INNER: usize = 16;

/// Splits `w` into an inner block of at most 16 coordinates and an outer block.
fn split(w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k = w.len().min(INNER);
    (linear_form_values(&w[..k]), linear_form_values(&w[k..]))
}

fn split_int(w: &[i128]) -> (Vec<i128>, Vec<i128>) {
    let k = w.len().min(INNER);
    (integer_form_values(&w[..k]), integer_form_values(&w[k..]))
}

/// `Σ_b g(s_b)` over all head sums, parallel over outer offsets.
fn sum_over_heads<const N: usize>(w: &[f64], g: impl Fn(f64) -> [f64; N] + Sync) -> [f64; N] {
    let (inner, outer) = split(w);
    let reduce = |mut a: [f64; N], b: [f64; N]| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    let per_outer = |o: &f64| {
        inner
            .iter()
            .map(|&i| g(i + o))
            .fold([0.0; N], reduce)
    };
    if outer.len() > 1 {
        outer.par_iter().map(per_outer).reduce(|| [0.0; N], reduce)
    } else {
        outer.iter().map(per_outer).fold([0.0; N], reduce)
    }
}

/// Binomial law of `Y = Σ_{j<count} x_j` written as `2k − count`.
struct Bulk {
    c: f64,
    count: usize,
    /// `cdf[k] = P(K < k)`, length `count + 2`.
    cdf: Vec<f64>,
    /// `kcdf[k] = Σ_{j<k} j·P(K = j)`.
    kcdf: Vec<f64>,
}

impl Bulk {
    fn new(c: f64, count: usize) -> Self {
        // Recurrence outward from the mode, normalized at the end.
        let mode = count / 2;
        let mut pmf = vec![0.0f64; count + 1];
        pmf[mode] = 1.0;
        for k in mode..count {
            pmf[k + 1] = pmf[k] * (count - k) as f64 / (k + 1) as f64;
        }
        for k in (1..=mode).rev() {
            pmf[k - 1] = pmf[k] * k as f64 / (count - k + 1) as f64;
        }
        let total: f64 = pmf.iter().sum();
        pmf.iter_mut().for_each(|p| *p /= total);
        let mut cdf = vec![0.0; count + 2];
        let mut kcdf = vec![0.0; count + 2];
        for k in 0..=count {
            cdf[k + 1] = cdf[k] + pmf[k];
            kcdf[k + 1] = kcdf[k] + k as f64 * pmf[k];
        }
        Self {
            c,
            count,
            cdf,
            kcdf,
        }
    }

    fn value(&self, s: f64, k: usize) -> f64 {
        s + self.c * (2.0 * k as f64 - self.count as f64)
    }

    /// Smallest `k ∈ [0, count+1]` with `s + c(2k − count) ≥ t`.
    fn first_at_least(&self, s: f64, t: f64) -> usize {
        let guess = ((self.count as f64 + (t - s) / self.c) / 2.0).ceil();
        let mut k = guess.clamp(0.0, self.count as f64 + 1.0) as usize;
        while k > 0 && self.value(s, k - 1) >= t {
            k -= 1;
        }
        while k <= self.count && self.value(s, k) < t {
            k += 1;
        }
        k
    }

    fn expect_abs(&self, s: f64) -> f64 {
        let k = self.first_at_least(s, 0.0);
        let (p_lo, m_lo) = (self.cdf[k], self.kcdf[k]);
        let m = self.kcdf[self.count + 1];
        let base = s - self.c * self.count as f64;
        base * (1.0 - 2.0 * p_lo) + 2.0 * self.c * (m - 2.0 * m_lo)
    }

    /// `P(|s + cY| ≤ a)` and whether some atom lies within `tol` of `±a`.
    fn prob_abs_le(&self, s: f64, a: f64, tol: f64) -> (f64, bool) {
        let lo = self.first_at_least(s, -a);
        let mut hi_excl = self.first_at_least(s, a);
        while hi_excl <= self.count && self.value(s, hi_excl) <= a {
            hi_excl += 1;
        }
        let near = |k: usize| k <= self.count && ((self.value(s, k).abs() - a).abs() < tol);
        let mut suspicious = false;
        for k in [lo.wrapping_sub(1), lo, hi_excl.wrapping_sub(1), hi_excl] {
            if k != usize::MAX && near(k) {
                suspicious = true;
            }
        }
        let p = if hi_excl > lo {
            self.cdf[hi_excl] - self.cdf[lo]
        } else {
            0.0
        };
        (p, suspicious)
    }
}

/// Head coordinates plus an optional run of equal-magnitude coordinates.
struct Plan {
    head: Vec<f64>,
    bulk: Option<Bulk>,
}

fn plan(w: &[f64]) -> Result<Plan> {
    if w.len() <= DIRECT_DIM {
        return Ok(Plan {
            head: w.to_vec(),
            bulk: None,
        });
    }
    let mut mags: Vec<f64> = w.iter().map(|v| v.abs()).filter(|&v| v != 0.0).collect();
    mags.sort_by(f64::total_cmp);
    let mut best = (0.0, 0usize);
    let mut i = 0;
    while i < mags.len() {
        let j = mags[i..].iter().position(|&v| v != mags[i]).map_or(mags.len(), |p| i + p);
        if j - i > best.1 {
            best = (mags[i], j - i);
        }
        i = j;
    }
    let head: Vec<f64> = w
        .iter()
        .copied()
        .filter(|v| *v != 0.0 && v.abs() != best.0)
        .collect();
    let nonzero = w.iter().filter(|v| **v != 0.0).count();
    if head.len() + best.1 != nonzero || head.len() > MAX_DIM {
        return Err(Error::DimensionOverflow {
            n: w.len(),
            max: MAX_DIM,
        });
    }
    if best.1 < 2 {
        check_dim(nonzero, MAX_DIM)?;
        return Ok(Plan { head, bulk: None });
    }
    Ok(Plan {
        head,
        bulk: Some(Bulk::new(best.0, best.1)),
    })
}

/// `E|w·x|`.
pub fn expect_abs(w: &[f64]) -> Result<f64> {
    let p = plan(w)?;
    let scale = (p.head.len() as f64).exp2();
    let [total] = match &p.bulk {
        None => sum_over_heads(&p.head, |s| [s.abs()]),
        Some(b) => sum_over_heads(&p.head, |s| [b.expect_abs(s)]),
    };
    Ok(total / scale)
}

/// `Σ_x |w·x|` over all `2^n` points, exactly.
pub fn sum_abs_integer(w: &[i128]) -> Result<i128> {
    check_dim(w.len(), MAX_DIM)?;
    let (inner, outer) = split_int(w);
    Ok(outer
        .par_iter()
        .map(|o| inner.iter().map(|i| (i + o).abs()).sum::<i128>())
        .sum())
}

/// `P(|w·x| ≤ a)` in floating point; [`Error::Indeterminate`] when some
/// `|w·x|` lies within `1e-9·‖w‖` of `a`.
pub fn prob_abs_le(w: &[f64], a: f64) -> Result<f64> {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = FLOAT_BOUNDARY_TOL * norm.max(f64::MIN_POSITIVE);
    let p = plan(w)?;
    let scale = (p.head.len() as f64).exp2();
    let [inside, suspicious] = match &p.bulk {
        None => sum_over_heads(&p.head, |s| {
            let near = ((s.abs() - a).abs() < tol) as u8 as f64;
            [(s.abs() <= a) as u8 as f64, near]
        }),
        Some(b) => sum_over_heads(&p.head, |s| {
            let (q, near) = b.prob_abs_le(s, a, tol);
            [q, near as u8 as f64]
        }),
    };
    if suspicious > 0.0 {
        return Err(Error::Indeterminate(format!(
            "{suspicious} hypercube point(s) have |w·x| within {tol:e} of {a}; rerun with exact rational weights"
        )));
    }
    Ok(inside / scale)
}

/// Exact counts of `|w·x|` relative to a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailCounts {
    pub n: usize,
    /// Points with `|w·x| < a`.
    pub below: u64,
    /// Points with `|w·x| = a`.
    pub equal: u64,
    /// Points with `|w·x| > a`.
    pub above: u64,
}

impl TailCounts {
    pub fn total(&self) -> u64 {
        1u64 << self.n
    }

    /// `P(|w·x| ≤ a)`.
    pub fn inside(&self) -> BigRational {
        BigRational::new((self.below + self.equal).into(), self.total().into())
    }

    /// `P(|w·x| ≥ a)`.
    pub fn outside(&self) -> BigRational {
        BigRational::new((self.above + self.equal).into(), self.total().into())
    }
}

fn count_with(w: &[i128], cmp: impl Fn(i128) -> Ordering + Sync) -> TailCounts {
    let (inner, outer) = split_int(w);
    let [below, equal, above] = outer
        .par_iter()
        .map(|o| {
            let mut c = [0u64; 3];
            for i in &inner {
                match cmp(i + o) {
                    Ordering::Less => c[0] += 1,
                    Ordering::Equal => c[1] += 1,
                    Ordering::Greater => c[2] += 1,
                }
            }
            c
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    TailCounts {
        n: w.len(),
        below,
        equal,
        above,
    }
}

fn to_i128_vec(v: &[BigInt]) -> Option<Vec<i128>> {
    let bound = BigInt::from(i128::MAX >> 40);
    v.iter()
        .map(|x| if x.abs() > bound { None } else { x.to_i128() })
        .collect()
}

/// Exact comparison of `|w·x|` against `a` (or `a·‖w‖` when `normalize`).
pub fn tail_counts_exact(w: &[BigRational], a: &BigRational, normalize: bool) -> Result<TailCounts> {
    check_dim(w.len(), MAX_DIM)?;
    if a.is_negative() {
        return Err(Error::Domain("threshold must be nonnegative".into()));
    }
    if !normalize {
        let mut all = w.to_vec();
        all.push(a.clone());
        let ints = primitive_integer_vector(&all);
        let r = to_i128_vec(&ints[..w.len()])
            .ok_or_else(|| Error::Domain("weights too large for exact evaluation".into()))?;
        let t = ints[w.len()].to_i128().unwrap_or(i128::MAX);
        return Ok(count_with(&r, |v| v.abs().cmp(&t)));
    }
    // |R·x| ≤ (p/q)‖R‖  ⇔  q²(R·x)² ≤ p²‖R‖²
    let r_big = primitive_integer_vector(w);
    if r_big.iter().all(Zero::is_zero) {
        return Err(Error::Domain("cannot normalize the zero vector".into()));
    }
    let r = to_i128_vec(&r_big)
        .ok_or_else(|| Error::Domain("weights too large for exact evaluation".into()))?;
    let norm_sq: BigInt = r_big.iter().map(|x| x * x).sum();
    let q2 = a.denom() * a.denom();
    let rhs = a.numer() * a.numer() * norm_sq;
    let small = q2.to_i128().zip(rhs.to_i128());
    Ok(count_with(&r, |v| {
        let lhs = small.and_then(|(q2, _)| v.checked_mul(v).and_then(|s| s.checked_mul(q2)));
        match (lhs, small) {
            (Some(l), Some((_, rr))) => l.cmp(&rr),
            _ => {
                let v = BigInt::from(v);
                (&q2 * &v * &v).cmp(&rhs)
            }
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::point;

    fn brute_abs(w: &[f64]) -> f64 {
        let n = w.len();
        (0..1usize << n)
            .map(|b| {
                point(b, n)
                    .iter()
                    .zip(w)
                    .map(|(&x, wi)| f64::from(x) * wi)
                    .sum::<f64>()
                    .abs()
            })
            .sum::<f64>()
            / (1u64 << n) as f64
    }

    #[test]
    fn expectation_matches_brute_force() {
        let w = [0.9, -0.4, 0.33, 0.2, 0.11];
        assert!((expect_abs(&w).unwrap() - brute_abs(&w)).abs() < 1e-14);
        let w: Vec<f64> = (0..20).map(|i| 1.0 / (i as f64 + 1.5)).collect();
        let direct = expect_abs(&w).unwrap();
        let (inner, outer) = split(&w);
        let slow: f64 = outer
            .iter()
            .flat_map(|o| inner.iter().map(move |i| (i + o).abs()))
            .sum::<f64>()
            / (1u64 << 20) as f64;
        assert!((direct - slow).abs() < 1e-12);
    }

    #[test]
    fn bulk_matches_direct_enumeration() {
        // 3 head coordinates plus 24 equal coordinates: 27 in total.
        let mut w = vec![0.5, 0.31, 0.17];
        w.extend(std::iter::repeat(0.1).take(24));
        let p = plan(&w).unwrap();
        assert_eq!(p.head.len(), 3);
        let grouped = expect_abs(&w).unwrap();
        let [direct] = sum_over_heads(&w, |s| [s.abs()]);
        assert!((grouped - direct / (1u64 << 27) as f64).abs() < 1e-12);
        let a = 0.77;
        let grouped = prob_abs_le(&w, a).unwrap();
        let [inside] = sum_over_heads(&w, |s| [(s.abs() <= a) as u8 as f64]);
        assert!((grouped - inside / (1u64 << 27) as f64).abs() < 1e-12);
    }

    #[test]
    fn bulk_binomial_law() {
        let b = Bulk::new(1.0, 5);
        let expect = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0];
        for (k, e) in expect.iter().enumerate() {
            assert!(((b.cdf[k + 1] - b.cdf[k]) - e / 32.0).abs() < 1e-15);
        }
        // E|Y| for Y = sum of 5 signs is 15/8.
        assert!((b.expect_abs(0.0) - 15.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn large_equal_run() {
        // 40 equal coordinates: P(|Σx|/√40 ≤ 1) = P(|2K − 40| ≤ √40).
        let w = vec![1.0 / 40f64.sqrt(); 40];
        let got = prob_abs_le(&w, 1.0).unwrap();
        let mut c = 1.0f64;
        let mut total = 0.0;
        for k in 0..=40u32 {
            if ((2 * k as i32 - 40) as f64).abs() <= 40f64.sqrt() {
                total += c;
            }
            c = c * (40 - k) as f64 / (k + 1) as f64;
        }
        assert!((got - total / 2f64.powi(40)).abs() < 1e-13);
    }

    #[test]
    fn integer_sums_and_counts() {
        assert_eq!(sum_abs_integer(&[1, 1, 1, 1]).unwrap(), 24);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let c = tail_counts_exact(&[q(3, 5), q(4, 5)], &q(1, 1), false).unwrap();
        assert_eq!((c.below, c.equal, c.above), (2, 0, 2));
        let c = tail_counts_exact(&[q(1, 1), q(1, 1)], &q(1, 1), true).unwrap();
        // |x1 + x2|/√2 ∈ {0, √2}
        assert_eq!((c.below, c.equal, c.above), (2, 0, 2));
        let c = tail_counts_exact(&[q(1, 1)], &q(1, 1), false).unwrap();
        assert_eq!((c.below, c.equal, c.above), (0, 2, 0));
        assert_eq!(c.inside(), q(1, 1));
    }

    #[test]
    fn indeterminate_in_float_mode() {
        let w = [1.0];
        assert!(matches!(prob_abs_le(&w, 1.0), Err(Error::Indeterminate(_))));
        assert_eq!(prob_abs_le(&[0.6, 0.8], 1.0).unwrap(), 0.5);
    }
}
