//! Linear threshold functions `f(x) = sign(w·x − θ)` with `sign(0) = +1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exact::{self, parse_rational, primitive_integer_vector};
use crate::hypercube::{self, TruthTable, MAX_DIM};

/// Relative tolerance below which float comparisons against a decision
/// boundary are reported as indeterminate.
pub const FLOAT_BOUNDARY_TOL: f64 = 1e-9;

/// A weight vector, optionally carrying exact rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    exact: Option<Vec<BigRational>>,
    norm: f64,
}

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Self {
        let norm = l2(&values);
        Self {
            values,
            exact: None,
            norm,
        }
    }

    /// Exact-mode vector. Floats are derived from the rationals.
    pub fn from_rationals(exact: Vec<BigRational>) -> Self {
        let values: Vec<f64> = exact.iter().map(exact::to_f64).collect();
        let norm = exact::to_f64(&norm_sq(&exact)).sqrt();
        Self {
            values,
            exact: Some(exact),
            norm,
        }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        Self::from_rationals(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Parses a comma-separated list. In exact mode every literal is read as
    /// an exact rational (`3/5`, `0.25`, `-2`).
    pub fn parse(s: &str, exact: bool) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        if parts.is_empty() {
            return Err(Error::Parse("empty weight list".into()));
        }
        if exact {
            Ok(Self::from_rationals(
                parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?,
            ))
        } else {
            let vals = parts
                .iter()
                .map(|p| match p.split_once('/') {
                    Some(_) => parse_rational(p).map(|r| exact::to_f64(&r)),
                    None => p
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("not a number: {p:?}"))),
                })
                .collect::<Result<Vec<f64>>>()?;
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse("weights must be finite".into()));
            }
            Ok(Self::new(vals))
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `‖w‖²` exactly, when in exact mode.
    pub fn norm_sq_exact(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|e| norm_sq(e))
    }

    /// Float unit vector in the same direction.
    pub fn normalized(&self) -> Self {
        Self::new(self.values.iter().map(|v| v / self.norm).collect())
    }

    /// `w_1 ≥ w_2 ≥ … ≥ w_n ≥ 0`.
    pub fn is_proper(&self) -> bool {
        match &self.exact {
            Some(e) => {
                e.iter().all(|v| !v.is_negative()) && e.windows(2).all(|p| p[0] >= p[1])
            }
            None => {
                self.values.iter().all(|&v| v >= 0.0)
                    && self.values.windows(2).all(|p| p[0] >= p[1])
            }
        }
    }

    /// Tail norms `σ_k = sqrt(Σ_{j≥k} w_j²)` for `k = 1..=n` (stored 0-based).
    pub fn tail_norms(&self) -> Vec<f64> {
        let mut sigma = vec![0.0; self.len()];
        let mut acc = 0.0;
        for k in (0..self.len()).rev() {
            acc += self.values[k] * self.values[k];
            sigma[k] = acc.sqrt();
        }
        sigma
    }

    /// The sub-vector `w_{range}`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        match &self.exact {
            Some(e) => Self::from_rationals(e[range].to_vec()),
            None => Self::new(self.values[range].to_vec()),
        }
    }

    pub fn to_text(&self) -> String {
        match &self.exact {
            Some(e) => e.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","),
            None => self.values.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","),
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_sq(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |s, x| s + x * x)
}

/// Values of the linear form `w·x_b` for every hypercube index `b`.
pub fn linear_form_values(w: &[f64]) -> Vec<f64> {
    let n = w.len();
    let mut v = Vec::with_capacity(1 << n);
    v.push(-w.iter().sum::<f64>());
    for (i, wi) in w.iter().enumerate() {
        let step = 2.0 * wi;
        for b in 0..1usize << i {
            let x = v[b] + step;
            v.push(x);
        }
    }
    v
}

/// Integer linear-form values `w·x_b` (exact).
pub fn integer_form_values(w: &[i128]) -> Vec<i128> {
    let n = w.len();
    let mut v = Vec::with_capacity(1 << n);
    v.push(-w.iter().sum::<i128>());
    for (i, wi) in w.iter().enumerate() {
        let step = 2 * wi;
        for b in 0..1usize << i {
            let x = v[b] + step;
            v.push(x);
        }
    }
    v
}

/// Scales a rational `(w, θ)` pair to integers sharing the same sign pattern.
/// Returns `None` if the integers do not fit in `i128` with room for sums.
pub(crate) fn integer_scaled(w: &[BigRational], theta: &BigRational) -> Option<(Vec<i128>, i128)> {
    let mut all = w.to_vec();
    all.push(theta.clone());
    let ints = primitive_integer_vector(&all);
    let bound = BigInt::from(i128::MAX >> 32);
    if ints.iter().any(|x| x.abs() > bound) {
        return None;
    }
    let mut v: Vec<i128> = ints.iter().map(|x| x.to_i128().unwrap()).collect();
    let t = v.pop().unwrap();
    Some((v, t))
}

/// `sign(w·x − θ)` with integer data.
pub fn integer_table(w: &[i128], theta: i128) -> Result<TruthTable> {
    check_dim(w.len(), MAX_DIM)?;
    let vals = integer_form_values(w);
    TruthTable::from_fn(w.len(), |b| vals[b] >= theta)
}

/// A linear threshold function.
#[derive(Clone, Debug, PartialEq)]
pub struct Ltf {
    pub weights: WeightVector,
    threshold: f64,
    threshold_exact: Option<BigRational>,
}

impl Ltf {
    pub fn new(weights: WeightVector, threshold: f64) -> Self {
        let threshold_exact = weights.is_exact().then(|| exact::from_f64(threshold));
        Self {
            weights,
            threshold,
            threshold_exact,
        }
    }

    pub fn exact(weights: Vec<BigRational>, threshold: BigRational) -> Self {
        Self {
            threshold: exact::to_f64(&threshold),
            weights: WeightVector::from_rationals(weights),
            threshold_exact: Some(threshold),
        }
    }

    pub fn from_integers(w: &[i64], theta: i64) -> Self {
        Self::exact(
            w.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
            BigRational::from_integer(theta.into()),
        )
    }

    /// Zero-threshold LTF `sign(w·x)`.
    pub fn zero_threshold(weights: WeightVector) -> Self {
        let threshold_exact = weights.is_exact().then(BigRational::zero);
        Self {
            weights,
            threshold: 0.0,
            threshold_exact,
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn threshold_exact(&self) -> Option<&BigRational> {
        self.threshold_exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.weights.is_exact() && self.threshold_exact.is_some()
    }

    /// Parses `"w1,w2,...,wn ; theta"`; the threshold part is optional.
    pub fn parse(s: &str, exact: bool) -> Result<Self> {
        let (w, t) = match s.split_once(';') {
            Some((w, t)) => (w, Some(t.trim())),
            None => (s, None),
        };
        let weights = WeightVector::parse(w, exact)?;
        match (t, exact) {
            (None, _) => Ok(Self::zero_threshold(weights)),
            (Some(t), true) => Ok(Self::exact(weights.exact.unwrap(), parse_rational(t)?)),
            (Some(t), false) => {
                let theta = t
                    .parse::<f64>()
                    .or_else(|_| parse_rational(t).map(|r| exact::to_f64(&r)))
                    .map_err(|_| Error::Parse(format!("bad threshold {t:?}")))?;
                Ok(Self::new(weights, theta))
            }
        }
    }

    /// The table of `sign(w·x − θ)` (`sign(0) = +1`).
    pub fn to_truth_table(&self) -> Result<TruthTable> {
        let n = self.n();
        check_dim(n, MAX_DIM)?;
        if let (Some(w), Some(t)) = (self.weights.exact(), &self.threshold_exact) {
            if let Some((wi, ti)) = integer_scaled(w, t) {
                return integer_table(&wi, ti);
            }
        }
        let vals = linear_form_values(self.weights.values());
        let theta = self.threshold;
        TruthTable::from_fn(n, |b| vals[b] - theta >= 0.0)
    }

    /// Checks whether some hypercube point lies on the hyperplane.
    ///
    /// Exact-mode LTFs get a definitive answer. In float mode a value within
    /// `1e-9·‖w‖` of the threshold yields [`Error::Indeterminate`].
    pub fn degeneracy(&self) -> Result<Degeneracy> {
        let n = self.n();
        check_dim(n, MAX_DIM)?;
        if let (Some(w), Some(t)) = (self.weights.exact(), &self.threshold_exact) {
            let (wi, ti) = integer_scaled(w, t)
                .ok_or_else(|| Error::Domain("weights too large for exact evaluation".into()))?;
            let vals = integer_form_values(&wi);
            return Ok(match vals.iter().position(|&v| v == ti) {
                Some(b) => Degeneracy::Degenerate {
                    witness: hypercube::point(b, n),
                },
                None => Degeneracy::NonDegenerate,
            });
        }
        let vals = linear_form_values(self.weights.values());
        let tol = FLOAT_BOUNDARY_TOL * self.weights.norm().max(f64::MIN_POSITIVE);
        match vals.iter().position(|&v| (v - self.threshold).abs() < tol) {
            Some(b) => Err(Error::Indeterminate(format!(
                "w·x − θ is within {tol:e} of zero at x = {:?}; use exact weights",
                hypercube::point(b, n)
            ))),
            None => Ok(Degeneracy::NonDegenerate),
        }
    }

    pub fn is_degenerate(&self) -> Result<bool> {
        Ok(matches!(self.degeneracy()?, Degeneracy::Degenerate { .. }))
    }

    /// Degree-0 and degree-1 Fourier coefficients as exact numerators over `2^n`.
    pub fn chow_parameters(&self) -> Result<ChowParameters> {
        Ok(ChowParameters::of(&self.to_truth_table()?))
    }

    /// The balanced `(n+1)`-variable LTF `g(x, y) = sign(w·x − θ·y)`, with
    /// `y` appended as the last coordinate.
    pub fn balanced_lift(&self) -> Result<Ltf> {
        if let Degeneracy::Degenerate { witness } = self.degeneracy()? {
            return Err(Error::Degenerate { witness });
        }
        let lifted = match (self.weights.exact(), &self.threshold_exact) {
            (Some(w), Some(t)) => {
                let mut w = w.to_vec();
                w.push(-t.clone());
                Ltf::zero_threshold(WeightVector::from_rationals(w))
            }
            _ => {
                let mut w = self.weights.values().to_vec();
                w.push(-self.threshold);
                Ltf::zero_threshold(WeightVector::new(w))
            }
        };
        Ok(lifted)
    }
}

impl fmt::Display for Ltf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.threshold_exact {
            Some(t) if self.weights.is_exact() => write!(f, "{} ; {}", self.weights.to_text(), t),
            _ => write!(f, "{} ; {}", self.weights.to_text(), self.threshold),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    NonDegenerate,
    Degenerate { witness: Vec<i8> },
}

/// Exact Chow parameters: `f̂(∅) = constant / 2^n`, `f̂(i) = degree1[i] / 2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowParameters {
    pub n: usize,
    pub constant: i64,
    pub degree1: Vec<i64>,
}

impl ChowParameters {
    pub fn of(t: &TruthTable) -> Self {
        let n = t.n();
        let mut constant = 0i64;
        let mut degree1 = vec![0i64; n];
        for b in 0..t.len() {
            let v = i64::from(t.value(b));
            constant += v;
            for (i, d) in degree1.iter_mut().enumerate() {
                if b >> i & 1 == 1 {
                    *d += v;
                } else {
                    *d -= v;
                }
            }
        }
        Self {
            n,
            constant,
            degree1,
        }
    }

    pub fn denominator(&self) -> i64 {
        1 << self.n
    }

    pub fn mean(&self) -> f64 {
        self.constant as f64 / self.denominator() as f64
    }

    pub fn degree1_f64(&self) -> Vec<f64> {
        let d = self.denominator() as f64;
        self.degree1.iter().map(|&c| c as f64 / d).collect()
    }

    /// `W^1[f] = Σ_i f̂(i)²`, exact as a ratio over `4^n`.
    pub fn w1(&self) -> f64 {
        let num: i128 = self.degree1.iter().map(|&c| i128::from(c) * i128::from(c)).sum();
        num as f64 / (self.denominator() as f64).powi(2)
    }

    /// `W^{≤1}[f] = f̂(∅)² + W^1[f]`.
    pub fn w_le1(&self) -> f64 {
        let num: i128 = self
            .degree1
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|&c| i128::from(c) * i128::from(c))
            .sum();
        num as f64 / (self.denominator() as f64).powi(2)
    }
}

/// A proper rearrangement of a weight vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProperForm {
    pub weights: WeightVector,
    /// `weights[k] = |w[perm[k]]|`.
    pub perm: Vec<usize>,
    /// `signs[i]` is `-1` where `w[i] < 0`, else `+1`.
    pub signs: Vec<i8>,
}

impl ProperForm {
    /// Recovers the original vector.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.perm.len()];
        for (k, &i) in self.perm.iter().enumerate() {
            w[i] = f64::from(self.signs[i]) * self.weights.values()[k];
        }
        w
    }
}

/// Negates coordinates to be nonnegative and sorts them nonincreasingly.
pub fn make_proper(w: &WeightVector) -> ProperForm {
    let n = w.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let signs: Vec<i8>;
    let weights = match w.exact() {
        Some(e) => {
            signs = e.iter().map(|v| if v.is_negative() { -1 } else { 1 }).collect();
            let abs: Vec<BigRational> = e.iter().map(|v| v.abs()).collect();
            perm.sort_by(|&a, &b| abs[b].cmp(&abs[a]));
            WeightVector::from_rationals(perm.iter().map(|&i| abs[i].clone()).collect())
        }
        None => {
            let v = w.values();
            signs = v.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect();
            perm.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()));
            WeightVector::new(perm.iter().map(|&i| v[i].abs()).collect())
        }
    };
    ProperForm {
        weights,
        perm,
        signs,
    }
}

/// Critical index and the tail norms computed along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalIndex {
    /// 1-based index, or `None` for infinity.
    pub index: Option<usize>,
    /// `sigma[k-1] = σ_k`.
    pub sigma: Vec<f64>,
}

/// `τ`-critical index of a proper vector: the smallest `i` with
/// `|w_i| ≤ τ·σ_i`. Trailing zero coordinates are ignored.
pub fn critical_index(w: &WeightVector, tau: f64) -> CriticalIndex {
    debug_assert!(tau > 0.0);
    let sigma = w.tail_norms();
    let support = w.values().iter().rposition(|&v| v != 0.0).map_or(0, |p| p + 1);
    let index = (0..support)
        .find(|&k| w.values()[k].abs() <= tau * sigma[k])
        .map(|k| k + 1);
    CriticalIndex { index, sigma }
}

/// `max_i |w_i| ≤ τ‖w‖`.
pub fn is_regular(w: &WeightVector, tau: f64) -> bool {
    let max = w.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    max <= tau * w.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{wht, Level};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn truth_tables_and_tie_convention() {
        let t = Ltf::from_integers(&[1], 0).to_truth_table().unwrap();
        assert_eq!(t.signs(), vec![-1, 1]);
        let maj = Ltf::from_integers(&[1, 1, 1], 0).to_truth_table().unwrap();
        assert_eq!(maj, TruthTable::majority(3).unwrap());
        let t = Ltf::from_integers(&[2, 1, 1], 0).to_truth_table().unwrap();
        // x = (−1, 1, 1) is index 0b110.
        assert!(t.get(0b110));
        // Float path agrees on the tie.
        let tf = Ltf::new(WeightVector::new(vec![2.0, 1.0, 1.0]), 0.0).to_truth_table().unwrap();
        assert_eq!(t, tf);
    }

    #[test]
    fn proper_form() {
        let p = make_proper(&WeightVector::new(vec![-0.6, 0.8]));
        assert_eq!(p.weights.values(), &[0.8, 0.6]);
        assert_eq!(p.signs, vec![-1, 1]);
        assert_eq!(p.perm, vec![1, 0]);
        assert_eq!(p.reconstruct(), vec![-0.6, 0.8]);

        let p = make_proper(&WeightVector::new(vec![0.5, 0.3, 0.1]));
        assert_eq!(p.perm, vec![0, 1, 2]);
        assert_eq!(p.signs, vec![1, 1, 1]);

        let p = make_proper(&WeightVector::from_integers(&[0, 0, 1]));
        assert_eq!(p.weights.values(), &[1.0, 0.0, 0.0]);
        assert!(p.weights.is_proper());
    }

    #[test]
    fn degeneracy_examples() {
        let d = Ltf::from_integers(&[1, 1], 0).degeneracy().unwrap();
        match d {
            Degeneracy::Degenerate { witness } => {
                let s: i32 = witness.iter().map(|&x| i32::from(x)).sum();
                assert_eq!(s, 0);
            }
            _ => panic!("expected degenerate"),
        }
        let d = Ltf::from_integers(&[3, 2, 1], 0).degeneracy().unwrap();
        match d {
            Degeneracy::Degenerate { witness } => {
                let v = 3 * witness[0] + 2 * witness[1] + witness[2];
                assert_eq!(v, 0);
            }
            _ => panic!("expected degenerate"),
        }
        assert_eq!(
            Ltf::from_integers(&[4, 2, 1], 0).degeneracy().unwrap(),
            Degeneracy::NonDegenerate
        );
        let float = Ltf::new(WeightVector::new(vec![1.0, 1.0]), 0.0);
        assert!(matches!(float.degeneracy(), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn critical_index_examples() {
        let w = WeightVector::new(vec![0.8, 0.6]);
        assert_eq!(critical_index(&w, 1.0).index, Some(1));
        assert_eq!(critical_index(&w, 0.5).index, None);
        let s = 22f64.sqrt();
        let w = WeightVector::new(vec![4.0 / s, 2.0 / s, 1.0 / s, 1.0 / s]);
        assert_eq!(critical_index(&w, 0.9).index, Some(1));
        // Trailing zeros do not create a spurious critical index.
        let w = WeightVector::new(vec![0.8, 0.6, 0.0, 0.0]);
        assert_eq!(critical_index(&w, 0.5).index, None);
    }

    #[test]
    fn regularity() {
        let n = 9;
        let w = WeightVector::new(vec![1.0 / 3.0; n]);
        assert!(is_regular(&w, 1.0 / 3.0 + 1e-15));
        assert!(!is_regular(&WeightVector::new(vec![1.0, 0.0, 0.0]), 0.5));
        let w = WeightVector::new(vec![0.5, 0.5, 0.5, 0.5]);
        assert_eq!(critical_index(&w, 0.5).index, Some(1));
        assert!(is_regular(&w, 0.5));
    }

    #[test]
    fn chow_examples() {
        let c = Ltf::from_integers(&[1, 1, 1], 0).chow_parameters().unwrap();
        assert_eq!((c.constant, c.degree1.clone()), (0, vec![4, 4, 4]));
        assert_eq!(c.denominator(), 8);
        let c = ChowParameters::of(&TruthTable::dictator(3, 0).unwrap());
        assert_eq!(c.degree1_f64(), vec![1.0, 0.0, 0.0]);
        let and = Ltf::exact(vec![q(1, 1), q(1, 1)], q(3, 2));
        let c = and.chow_parameters().unwrap();
        assert_eq!(c.mean(), -0.5);
        assert_eq!(c.degree1_f64(), vec![0.5, 0.5]);
    }

    #[test]
    fn balanced_lift_preserves_low_weight() {
        let and = Ltf::exact(vec![q(1, 1), q(1, 1)], q(3, 2));
        let lift = and.balanced_lift().unwrap();
        let f = and.to_truth_table().unwrap();
        let g = lift.to_truth_table().unwrap();
        let wf = crate::hypercube::degree_weight(&wht(&f), Level::AtMost(1));
        let wg1 = crate::hypercube::degree_weight(&wht(&g), Level::Exactly(1));
        let wg = crate::hypercube::degree_weight(&wht(&g), Level::AtMost(1));
        assert!((wf - 0.75).abs() < 1e-12);
        assert!((wg1 - 0.75).abs() < 1e-12);
        assert!((wg - wg1).abs() < 1e-12);
        assert_eq!(wht(&g).degree1(2), ChowParameters::of(&f).mean());

        let maj = Ltf::from_integers(&[1, 1, 1], 0).balanced_lift().unwrap();
        let g = maj.to_truth_table().unwrap();
        assert_eq!(g.n(), 4);
        assert!((crate::hypercube::degree_weight(&wht(&g), Level::Exactly(1)) - 0.75).abs() < 1e-12);

        assert!(matches!(
            Ltf::from_integers(&[1, 1], 0).balanced_lift(),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn text_form() {
        let f = Ltf::parse("3/5, 4/5 ; 1/2", true).unwrap();
        assert_eq!(f.weights.exact().unwrap(), &[q(3, 5), q(4, 5)]);
        assert_eq!(f.threshold_exact().unwrap(), &q(1, 2));
        assert_eq!(f.to_string(), "3/5,4/5 ; 1/2");
        let g = Ltf::parse("0.5,-1", false).unwrap();
        assert_eq!(g.threshold(), 0.0);
        assert_eq!(g.weights.values(), &[0.5, -1.0]);
        assert!(Ltf::parse("a,b", false).is_err());
    }

    #[test]
    fn form_values_match_definition() {
        let w = [0.3, -1.1, 2.5];
        let v = linear_form_values(&w);
        for (b, val) in v.iter().enumerate() {
            let x = hypercube::point(b, 3);
            let direct: f64 = w.iter().zip(&x).map(|(a, &xi)| a * f64::from(xi)).sum();
            assert!((val - direct).abs() < 1e-14);
        }
    }
}
