//! Exact Fourier analysis on the Boolean hypercube `{-1,1}^n`.
//!
//! Inputs are indexed by integers `b` in `0..2^n`; coordinate `i` of the
//! point `x_b` is `+1` exactly when bit `i` of `b` is set. Subsets `S` of
//! `[n]` are encoded the same way, so `x_S = prod_{i in S} x_i` is
//! `(-1)^{popcount(!b & S)}`.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Largest dimension accepted by any dense table.
pub const MAX_DIM: usize = 28;

/// Largest dimension that may be exported to JSON.
pub const MAX_JSON_DIM: usize = 10;

const MAGIC: &[u8; 4] = b"BFC1";
const KIND_BITS: u8 = 0;
const KIND_REALS: u8 = 1;

// Below this size the butterfly runs sequentially.
const PAR_THRESHOLD: usize = 1 << 16;

/// Coordinates of the hypercube point with index `b`.
pub fn point(b: usize, n: usize) -> Vec<i8> {
    (0..n).map(|i| if b >> i & 1 == 1 { 1 } else { -1 }).collect()
}

/// Index of a hypercube point given as `±1` coordinates.
pub fn index_of(x: &[i8]) -> usize {
    x.iter()
        .enumerate()
        .fold(0, |acc, (i, &v)| if v > 0 { acc | 1 << i } else { acc })
}

/// `x_S` for the point with index `b` and subset mask `s`.
#[inline]
pub fn character(b: usize, s: usize) -> i32 {
    if (!b & s).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A `±1`-valued function on `{-1,1}^n`, packed one bit per input
/// (bit set means `+1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    n: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruthTable(n={}, ", self.n)?;
        for b in 0..self.len().min(64) {
            f.write_str(if self.get(b) { "+" } else { "-" })?;
        }
        if self.len() > 64 {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}

fn words_for(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

impl TruthTable {
    /// The constant `-1` function.
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n, MAX_DIM)?;
        Ok(Self {
            n,
            bits: vec![0; words_for(n)],
        })
    }

    /// Builds a table from a predicate that returns `true` for `+1`.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool + Sync) -> Result<Self> {
        check_dim(n, MAX_DIM)?;
        let len = 1usize << n;
        let mut bits = vec![0u64; words_for(n)];
        let fill = |(w, word): (usize, &mut u64)| {
            let base = w * 64;
            let mut acc = 0u64;
            for j in 0..64.min(len - base) {
                if f(base + j) {
                    acc |= 1 << j;
                }
            }
            *word = acc;
        };
        if len >= PAR_THRESHOLD {
            bits.par_iter_mut().enumerate().for_each(fill);
        } else {
            bits.iter_mut().enumerate().for_each(fill);
        }
        Ok(Self { n, bits })
    }

    /// Builds a table from explicit `±1` values in index order.
    pub fn from_signs(values: &[i8]) -> Result<Self> {
        let n = values.len().trailing_zeros() as usize;
        if values.len() != 1 << n {
            return Err(Error::Domain(format!(
                "table length {} is not a power of two",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| **v != 1 && **v != -1) {
            return Err(Error::Domain(format!("table value {v} is not ±1")));
        }
        Self::from_fn(n, |b| values[b] > 0)
    }

    /// Builds an `n`-variable table from its low `2^n` bits (`n ≤ 6`).
    pub fn from_u64(n: usize, word: u64) -> Self {
        assert!(n <= 6);
        let mask = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        Self {
            n,
            bits: vec![word & mask],
        }
    }

    /// Builds a table from packed words (bit `b` of the table is bit
    /// `b % 64` of word `b / 64`).
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        check_dim(n, MAX_DIM)?;
        if words.len() != words_for(n) {
            return Err(Error::Format(format!(
                "expected {} words for n={n}, got {}",
                words_for(n),
                words.len()
            )));
        }
        let mut t = Self { n, bits: words };
        t.clear_padding();
        Ok(t)
    }

    fn clear_padding(&mut self) {
        if self.n < 6 {
            self.bits[0] &= (1u64 << (1 << self.n)) - 1;
        }
    }

    /// Dictator `x_i` (0-based `i`).
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        Self::from_fn(n, |b| b >> i & 1 == 1)
    }

    /// Majority of `n` inputs, with ties broken to `+1`.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_fn(n, |b| 2 * b.count_ones() as usize >= n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of inputs, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    /// Low word of the table; the whole table when `n ≤ 6`.
    pub fn low_word(&self) -> u64 {
        self.bits[0]
    }

    /// `true` when `f(x_b) = +1`.
    #[inline]
    pub fn get(&self, b: usize) -> bool {
        self.bits[b / 64] >> (b % 64) & 1 == 1
    }

    /// `f(x_b)` as `±1`.
    #[inline]
    pub fn value(&self, b: usize) -> i32 {
        if self.get(b) {
            1
        } else {
            -1
        }
    }

    pub fn set(&mut self, b: usize, positive: bool) {
        if positive {
            self.bits[b / 64] |= 1 << (b % 64);
        } else {
            self.bits[b / 64] &= !(1 << (b % 64));
        }
    }

    /// Number of `+1` outputs.
    pub fn count_positive(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// The function `-f`.
    pub fn negated(&self) -> Self {
        let mut t = Self {
            n: self.n,
            bits: self.bits.iter().map(|w| !w).collect(),
        };
        t.clear_padding();
        t
    }

    /// The table as `±1` values in index order.
    pub fn signs(&self) -> Vec<i8> {
        (0..self.len()).map(|b| self.value(b) as i8).collect()
    }

    /// Lexicographic order of the value sequence `f(x_0), f(x_1), …` with
    /// `-1 < +1`. Tables of smaller dimension sort first.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (a, b) in self.bits.iter().zip(&other.bits) {
                let d = a ^ b;
                if d != 0 {
                    let low = d & d.wrapping_neg();
                    return if a & low == 0 {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    };
                }
            }
            std::cmp::Ordering::Equal
        })
    }

    /// Exports to JSON (`n ≤ 10`).
    pub fn to_json(&self) -> Result<String> {
        check_dim(self.n, MAX_JSON_DIM)?;
        Ok(serde_json::to_string(&TableJson {
            n: self.n,
            values: self.signs(),
        })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TableJson<i8> = serde_json::from_str(s)?;
        let t = Self::from_signs(&j.values)?;
        if t.n != j.n {
            return Err(Error::DimensionMismatch(j.n, t.n));
        }
        Ok(t)
    }

    /// Writes the binary container (`kind = 0`, packed bits, little-endian words).
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        write_header(&mut w, self.n, KIND_BITS)?;
        let nbytes = (self.len() + 7) / 8;
        let mut bytes = Vec::with_capacity(self.bits.len() * 8);
        for word in &self.bits {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        w.write_all(&bytes[..nbytes])?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let (n, kind) = read_header(&mut r)?;
        if kind != KIND_BITS {
            return Err(Error::Format(format!("expected bit payload, found kind {kind}")));
        }
        let nbytes = ((1usize << n) + 7) / 8;
        let mut bytes = vec![0u8; words_for(n) * 8];
        r.read_exact(&mut bytes[..nbytes])?;
        let words = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::from_words(n, words)
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson<T> {
    n: usize,
    values: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    n: usize,
    coeffs: Vec<f64>,
}

fn write_header(w: &mut impl Write, n: usize, kind: u8) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(n as u32).to_le_bytes())?;
    w.write_all(&[kind])?;
    Ok(())
}

fn read_header(r: &mut impl Read) -> Result<(usize, u8)> {
    let mut head = [0u8; 9];
    r.read_exact(&mut head)?;
    if &head[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(head[4..8].try_into().unwrap()) as usize;
    check_dim(n, MAX_DIM)?;
    Ok((n, head[8]))
}

fn write_reals(w: &mut impl Write, n: usize, values: &[f64]) -> Result<()> {
    write_header(w, n, KIND_REALS)?;
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&bytes)?;
    Ok(())
}

fn read_reals(r: &mut impl Read) -> Result<(usize, Vec<f64>)> {
    let (n, kind) = read_header(r)?;
    if kind != KIND_REALS {
        return Err(Error::Format(format!("expected real payload, found kind {kind}")));
    }
    let mut bytes = vec![0u8; 8 << n];
    r.read_exact(&mut bytes)?;
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((n, values))
}

/// A real-valued function on `{-1,1}^n`, same index convention as [`TruthTable`].
#[derive(Clone, Debug, PartialEq)]
pub struct RealTable {
    n: usize,
    values: Vec<f64>,
}

impl RealTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n, MAX_DIM)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch(1 << n, values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("table contains a non-finite value".into()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> Result<Self> {
        check_dim(n, MAX_DIM)?;
        let len = 1usize << n;
        let values: Vec<f64> = if len >= PAR_THRESHOLD {
            (0..len).into_par_iter().map(&f).collect()
        } else {
            (0..len).map(f).collect()
        };
        Self::new(n, values)
    }

    /// `ℓ(x) = |w·x|`.
    pub fn abs_linear_form(w: &[f64]) -> Result<Self> {
        let n = w.len();
        Self::from_fn(n, |b| {
            let mut s = 0.0;
            for (i, wi) in w.iter().enumerate() {
                if b >> i & 1 == 1 {
                    s += wi;
                } else {
                    s -= wi;
                }
            }
            s.abs()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn to_json(&self) -> Result<String> {
        check_dim(self.n, MAX_JSON_DIM)?;
        Ok(serde_json::to_string(&TableJson {
            n: self.n,
            values: self.values.clone(),
        })?)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        write_reals(&mut w, self.n, &self.values)
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let (n, values) = read_reals(&mut r)?;
        Self::new(n, values)
    }
}

impl From<&TruthTable> for RealTable {
    fn from(t: &TruthTable) -> Self {
        Self {
            n: t.n,
            values: (0..t.len()).map(|b| f64::from(t.value(b))).collect(),
        }
    }
}

/// Fourier coefficients `f̂(S)` indexed by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

/// Which levels a [`degree_weight`] query sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Exactly(usize),
    AtMost(usize),
    AtLeast(usize),
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n, MAX_DIM)?;
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch(1 << n, coeffs.len()));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f̂(S)` for the subset mask `s`.
    pub fn coeff(&self, s: usize) -> f64 {
        self.coeffs[s]
    }

    /// Degree-1 coefficient of coordinate `i` (0-based).
    pub fn degree1(&self, i: usize) -> f64 {
        self.coeffs[1 << i]
    }

    /// `Σ_S f̂(S)²`.
    pub fn total_weight(&self) -> f64 {
        pairwise_sum_sq(&self.coeffs)
    }

    /// `Var[f] = Σ_{S≠∅} f̂(S)²`.
    pub fn variance(&self) -> f64 {
        pairwise_sum_sq(&self.coeffs[1..])
    }

    /// `Inf_i(f) = Σ_{S∋i} f̂(S)²`.
    pub fn influence(&self, i: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| s >> i & 1 == 1)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// `Σ_S |S| f̂(S)²`.
    pub fn total_influence(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| f64::from(s.count_ones()) * c * c)
            .sum()
    }

    /// Reconstructs the real-valued function from its coefficients.
    pub fn inverse(&self) -> RealTable {
        let mut v = self.coeffs.clone();
        butterfly_f64(&mut v);
        // The forward transform maps f(x_b) to coefficient order with x_i = -1
        // at bit 0; undo the sign convention used there.
        let values = reorder_from_transform(v);
        RealTable {
            n: self.n,
            values,
        }
    }

    /// Reconstructs a `±1` table; fails unless every value is within `1e-9` of `±1`.
    pub fn inverse_bits(&self) -> Result<TruthTable> {
        let real = self.inverse();
        if let Some(v) = real.values.iter().find(|v| (v.abs() - 1.0).abs() > 1e-9) {
            return Err(Error::Domain(format!("spectrum is not Boolean: value {v}")));
        }
        TruthTable::from_fn(self.n, |b| real.values[b] > 0.0)
    }

    pub fn to_json(&self) -> Result<String> {
        check_dim(self.n, MAX_JSON_DIM)?;
        Ok(serde_json::to_string(&SpectrumJson {
            n: self.n,
            coeffs: self.coeffs.clone(),
        })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: SpectrumJson = serde_json::from_str(s)?;
        Self::new(j.n, j.coeffs)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        write_reals(&mut w, self.n, &self.coeffs)
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let (n, coeffs) = read_reals(&mut r)?;
        Self::new(n, coeffs)
    }
}

fn pairwise_sum_sq(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        v.iter().map(|c| c * c).sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum_sq(a) + pairwise_sum_sq(b)
    }
}

/// Anything that can be transformed into a [`FourierSpectrum`].
pub trait HypercubeFunction {
    fn dim(&self) -> usize;
    /// `f(x_b)` as a real number.
    fn eval(&self, b: usize) -> f64;
    fn spectrum(&self) -> FourierSpectrum;
}

impl HypercubeFunction for TruthTable {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, b: usize) -> f64 {
        f64::from(self.value(b))
    }
    fn spectrum(&self) -> FourierSpectrum {
        // Integer accumulation keeps the transform exact; |sums| ≤ 2^28.
        let len = self.len();
        let mut v: Vec<i32> = (0..len).map(|b| self.value(b)).collect();
        v = reorder_to_transform(v);
        butterfly_i32(&mut v);
        let scale = 1.0 / len as f64;
        FourierSpectrum {
            n: self.n,
            coeffs: v.into_iter().map(|c| f64::from(c) * scale).collect(),
        }
    }
}

impl HypercubeFunction for RealTable {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, b: usize) -> f64 {
        self.values[b]
    }
    fn spectrum(&self) -> FourierSpectrum {
        let len = self.values.len();
        let mut v = reorder_to_transform(self.values.clone());
        butterfly_f64(&mut v);
        let scale = 1.0 / len as f64;
        v.iter_mut().for_each(|c| *c *= scale);
        FourierSpectrum {
            n: self.n,
            coeffs: v,
        }
    }
}

/// Fast Walsh–Hadamard transform: `f̂(S) = E_x[f(x) x_S]`.
pub fn wht<F: HypercubeFunction + ?Sized>(f: &F) -> FourierSpectrum {
    f.spectrum()
}

// The plain Hadamard butterfly computes Σ_b v[b] (-1)^{popcount(b & s)}, i.e.
// characters that are -1 when x_i = +1. Our characters are -1 when x_i = -1
// (bit clear), so we index the input by the complemented point instead:
// x_S(b) = (-1)^{popcount(!b & s)}.
fn reorder_to_transform<T: Copy>(v: Vec<T>) -> Vec<T> {
    let mask = v.len() - 1;
    (0..v.len()).map(|b| v[!b & mask]).collect()
}

fn reorder_from_transform<T: Copy>(v: Vec<T>) -> Vec<T> {
    reorder_to_transform(v)
}

fn butterfly_f64(v: &mut [f64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        let step = |chunk: &mut [f64]| {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        if len >= PAR_THRESHOLD {
            v.par_chunks_mut(2 * h).for_each(step);
        } else {
            v.chunks_mut(2 * h).for_each(step);
        }
        h *= 2;
    }
}

fn butterfly_i32(v: &mut [i32]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        let step = |chunk: &mut [i32]| {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        if len >= PAR_THRESHOLD {
            v.par_chunks_mut(2 * h).for_each(step);
        } else {
            v.chunks_mut(2 * h).for_each(step);
        }
        h *= 2;
    }
}

/// Sum of squared coefficients at the selected levels.
pub fn degree_weight(spec: &FourierSpectrum, level: Level) -> f64 {
    let keep = |d: usize| match level {
        Level::Exactly(k) => d == k,
        Level::AtMost(k) => d <= k,
        Level::AtLeast(k) => d >= k,
    };
    spec.coeffs
        .iter()
        .enumerate()
        .filter(|(s, _)| keep(s.count_ones() as usize))
        .map(|(_, c)| c * c)
        .sum()
}

/// `Inf_i(f) = E_x[Var_{x_i} f]`, computed from the table directly.
pub fn influence<F: HypercubeFunction + ?Sized>(f: &F, i: usize) -> f64 {
    let n = f.dim();
    assert!(i < n, "coordinate {i} out of range for n={n}");
    let bit = 1usize << i;
    let total: f64 = (0..1usize << n)
        .filter(|b| b & bit == 0)
        .map(|b| {
            let d = (f.eval(b | bit) - f.eval(b)) / 2.0;
            d * d
        })
        .sum();
    total / (1usize << (n - 1)) as f64
}

/// `Σ_i Inf_i(f)`.
pub fn total_influence<F: HypercubeFunction + ?Sized>(f: &F) -> f64 {
    (0..f.dim()).map(|i| influence(f, i)).sum()
}

/// Relative Hamming distance `Pr_x[f(x) ≠ g(x)]`.
pub fn hamming_dist(f: &TruthTable, g: &TruthTable) -> Result<f64> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(f.n, g.n));
    }
    let diff: u64 = f
        .bits
        .iter()
        .zip(&g.bits)
        .map(|(a, b)| u64::from((a ^ b).count_ones()))
        .sum();
    Ok(diff as f64 / f.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj3() -> TruthTable {
        TruthTable::majority(3).unwrap()
    }

    // Direct E_x[f(x) x_S] by summation.
    fn naive_coeff(f: &dyn HypercubeFunction, s: usize) -> f64 {
        let n = f.dim();
        (0..1usize << n)
            .map(|b| f.eval(b) * f64::from(character(b, s)))
            .sum::<f64>()
            / (1usize << n) as f64
    }

    #[test]
    fn dictator_spectrum() {
        let f = TruthTable::dictator(3, 0).unwrap();
        let spec = wht(&f);
        for s in 0..8 {
            let want = if s == 1 { 1.0 } else { 0.0 };
            assert_eq!(spec.coeff(s), want, "S={s:b}");
        }
    }

    #[test]
    fn majority3_spectrum_matches_summation() {
        let f = maj3();
        let spec = wht(&f);
        for s in 0..8 {
            assert!((spec.coeff(s) - naive_coeff(&f, s)).abs() < 1e-15);
        }
        for i in 0..3 {
            assert_eq!(spec.degree1(i), 0.5);
        }
        assert_eq!(spec.coeff(0b111), -0.5);
        assert_eq!(spec.coeff(0), 0.0);
        assert_eq!(spec.coeff(0b011), 0.0);
    }

    #[test]
    fn abs_form_spectrum() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ell = RealTable::abs_linear_form(&[r, r]).unwrap();
        let spec = wht(&ell);
        assert!((spec.coeff(0) - r).abs() < 1e-15);
        assert!((spec.coeff(0b11) - r).abs() < 1e-15);
        assert!(spec.coeff(0b01).abs() < 1e-15);
        assert!(spec.coeff(0b10).abs() < 1e-15);
    }

    #[test]
    fn degree_weights() {
        let spec = wht(&maj3());
        assert_eq!(degree_weight(&spec, Level::Exactly(1)), 0.75);
        assert_eq!(degree_weight(&spec, Level::AtMost(1)), 0.75);
        assert_eq!(degree_weight(&spec, Level::AtLeast(2)), 0.25);
        let d = wht(&TruthTable::dictator(4, 2).unwrap());
        assert_eq!(degree_weight(&d, Level::Exactly(1)), 1.0);
    }

    #[test]
    fn ell4_high_degree_weight() {
        let ell = RealTable::abs_linear_form(&[0.5; 4]).unwrap();
        let w4 = degree_weight(&wht(&ell), Level::AtLeast(4));
        assert!(w4 >= 2f64.powi(-8) / 4.0, "W>=4 = {w4}");
    }

    #[test]
    fn influences() {
        let d = TruthTable::dictator(2, 0).unwrap();
        assert_eq!(influence(&d, 0), 1.0);
        assert_eq!(influence(&d, 1), 0.0);
        let m = maj3();
        for i in 0..3 {
            assert_eq!(influence(&m, i), 0.5);
            assert!((wht(&m).influence(i) - 0.5).abs() < 1e-15);
        }
        assert_eq!(total_influence(&m), 1.5);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ell = RealTable::abs_linear_form(&[r, r]).unwrap();
        assert!((influence(&ell, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hamming() {
        let m = maj3();
        let d = TruthTable::dictator(3, 0).unwrap();
        assert_eq!(hamming_dist(&m, &m).unwrap(), 0.0);
        assert_eq!(hamming_dist(&m, &m.negated()).unwrap(), 1.0);
        assert_eq!(hamming_dist(&m, &d).unwrap(), 0.25);
        assert!(matches!(
            hamming_dist(&m, &TruthTable::majority(5).unwrap()),
            Err(Error::DimensionMismatch(3, 5))
        ));
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            TruthTable::new(29),
            Err(Error::DimensionOverflow { n: 29, max: 28 })
        ));
    }

    #[test]
    fn binary_container_roundtrip() {
        let t = TruthTable::majority(9).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"BFC1");
        assert_eq!(buf[8], 0);
        assert_eq!(TruthTable::read_from(&buf[..]).unwrap(), t);

        let spec = wht(&t);
        let mut buf = Vec::new();
        spec.write_to(&mut buf).unwrap();
        assert_eq!(buf[8], 1);
        assert_eq!(buf.len(), 9 + 8 * 512);
        assert_eq!(FourierSpectrum::read_from(&buf[..]).unwrap(), spec);
        assert!(TruthTable::read_from(&buf[..]).is_err());
    }

    #[test]
    fn json_export_limits() {
        let t = maj3();
        assert_eq!(TruthTable::from_json(&t.to_json().unwrap()).unwrap(), t);
        assert!(TruthTable::majority(11).unwrap().to_json().is_err());
        let spec = wht(&t);
        assert_eq!(FourierSpectrum::from_json(&spec.to_json().unwrap()).unwrap(), spec);
    }

    #[test]
    fn inverse_of_real_table() {
        let ell = RealTable::abs_linear_form(&[0.3, -1.2, 0.7, 2.0, 0.1]).unwrap();
        let back = wht(&ell).inverse();
        for (a, b) in back.values().iter().zip(ell.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
