//! Exact rational arithmetic helpers and a small dense simplex used for
//! linear feasibility certificates.
//!
//! The simplex first runs over `i128` rationals with checked arithmetic and
//! falls back to arbitrary precision if any operation overflows. For the
//! `±1` constraint matrices that arise here every tableau entry is a ratio
//! of small minors, so the fallback is essentially never taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"3/5"`, `"-2"`, `"0.125"` or `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Extremely large numerators or denominators; scale down first.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// The exact value of a finite double.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Field operations with overflow detection.
pub trait ExactField: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn zero_value() -> Self {
        Self::from_i64(0)
    }
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigRational;
    fn lt(&self, o: &Self) -> bool;
}

pub type Q128 = Ratio<i128>;

impl ExactField for Q128 {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(i128::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

impl ExactField for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

/// A system of linear constraints with integer coefficients over free
/// real variables: `a·u ≥ b` and `a·u = b`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub dim: usize,
    pub inequalities: Vec<(Vec<i64>, i64)>,
    pub equalities: Vec<(Vec<i64>, i64)>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    pub fn at_least(&mut self, a: Vec<i64>, b: i64) -> &mut Self {
        debug_assert_eq!(a.len(), self.dim);
        self.inequalities.push((a, b));
        self
    }

    pub fn equal(&mut self, a: Vec<i64>, b: i64) -> &mut Self {
        debug_assert_eq!(a.len(), self.dim);
        self.equalities.push((a, b));
        self
    }

    /// Checks a candidate point exactly.
    pub fn satisfied_by(&self, u: &[BigRational]) -> bool {
        let dot = |a: &[i64]| -> BigRational {
            a.iter()
                .zip(u)
                .map(|(&ai, ui)| ui * BigInt::from(ai))
                .fold(BigRational::zero(), |s, t| s + t)
        };
        self.inequalities
            .iter()
            .all(|(a, b)| dot(a) >= BigRational::from_integer(BigInt::from(*b)))
            && self
                .equalities
                .iter()
                .all(|(a, b)| dot(a) == BigRational::from_integer(BigInt::from(*b)))
    }

    /// Finds a feasible point, or `None` when the system is infeasible.
    /// The returned point is re-verified exactly.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let sol = match phase_one::<Q128>(self) {
            Ok(s) => s,
            Err(Overflow) => phase_one::<BigRational>(self).expect("bignum arithmetic cannot overflow"),
        };
        if let Some(u) = &sol {
            assert!(self.satisfied_by(u), "simplex returned a point violating the system");
        }
        sol
    }
}

#[derive(Debug)]
struct Overflow;

/// Phase-one simplex with Bland's rule on
/// `u = u⁺ − u⁻`, `a·u − s = b`, `a·u = b`, with artificials where needed.
fn phase_one<F: ExactField>(sys: &LinearSystem) -> std::result::Result<Option<Vec<BigRational>>, Overflow> {
    let d = sys.dim;
    let m_ineq = sys.inequalities.len();
    let rows = m_ineq + sys.equalities.len();
    // Columns: u⁺ (d), u⁻ (d), slacks (m_ineq), artificials (one per row that needs one).
    let slack0 = 2 * d;
    let art0 = slack0 + m_ineq;

    struct Row {
        coeffs: Vec<i64>,
        rhs: i64,
        slack: Option<usize>,
    }
    let mut raw: Vec<Row> = Vec::with_capacity(rows);
    for (k, (a, b)) in sys.inequalities.iter().enumerate() {
        raw.push(Row {
            coeffs: a.clone(),
            rhs: *b,
            slack: Some(k),
        });
    }
    for (a, b) in &sys.equalities {
        raw.push(Row {
            coeffs: a.clone(),
            rhs: *b,
            slack: None,
        });
    }

    // Rows of the form a·u − s = b with b ≤ 0 flip to −a·u + s = −b and use s as basis.
    let mut needs_art = vec![false; rows];
    let mut n_art = 0;
    for (r, row) in raw.iter().enumerate() {
        let slack_basic = row.slack.is_some() && row.rhs <= 0;
        if !slack_basic {
            needs_art[r] = true;
            n_art += 1;
        }
    }
    let cols = art0 + n_art;
    let zero = F::zero_value();
    let mut tab: Vec<Vec<F>> = Vec::with_capacity(rows);
    let mut rhs: Vec<F> = Vec::with_capacity(rows);
    let mut basis: Vec<usize> = Vec::with_capacity(rows);
    let mut art_idx = art0;
    for (r, row) in raw.iter().enumerate() {
        let mut t = vec![zero.clone(); cols];
        // Sign so that rhs ≥ 0.
        let flip = row.rhs < 0 || (row.slack.is_some() && row.rhs == 0 && !needs_art[r]);
        let sgn = if flip { -1 } else { 1 };
        for j in 0..d {
            t[j] = F::from_i64(sgn * row.coeffs[j]);
            t[d + j] = F::from_i64(-sgn * row.coeffs[j]);
        }
        if let Some(k) = row.slack {
            t[slack0 + k] = F::from_i64(-sgn);
        }
        if needs_art[r] {
            t[art_idx] = F::from_i64(1);
            basis.push(art_idx);
            art_idx += 1;
        } else {
            basis.push(slack0 + row.slack.unwrap());
        }
        rhs.push(F::from_i64(sgn * row.rhs));
        tab.push(t);
    }

    // Reduced costs of the phase-one objective Σ artificials.
    let mut cost = vec![zero.clone(); cols];
    let mut obj = zero.clone();
    for r in 0..rows {
        if needs_art[r] {
            for j in 0..art0 {
                cost[j] = cost[j].sub(&tab[r][j]).ok_or(Overflow)?;
            }
            obj = obj.sub(&rhs[r]).ok_or(Overflow)?;
        }
    }

    loop {
        // Bland: lowest-index improving column.
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, F)> = None;
        for r in 0..rows {
            if tab[r][enter].is_positive() {
                let ratio = rhs[r].div(&tab[r][enter]).ok_or(Overflow)?;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio.lt(best) || (ratio == *best && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Phase one is bounded below by zero; an unbounded ray cannot occur.
            unreachable!("phase-one objective unbounded");
        };
        pivot(&mut tab, &mut rhs, &mut cost, &mut obj, pr, enter)?;
        basis[pr] = enter;
    }

    if !obj.is_zero() {
        return Ok(None);
    }
    let mut u = vec![BigRational::zero(); d];
    for (r, &b) in basis.iter().enumerate() {
        if b < d {
            u[b] += rhs[r].to_big();
        } else if b < 2 * d {
            u[b - d] -= rhs[r].to_big();
        }
    }
    Ok(Some(u))
}

fn pivot<F: ExactField>(
    tab: &mut [Vec<F>],
    rhs: &mut [F],
    cost: &mut [F],
    obj: &mut F,
    pr: usize,
    pc: usize,
) -> std::result::Result<(), Overflow> {
    let piv = tab[pr][pc].clone();
    for v in tab[pr].iter_mut() {
        if !v.is_zero() {
            *v = v.div(&piv).ok_or(Overflow)?;
        }
    }
    rhs[pr] = rhs[pr].div(&piv).ok_or(Overflow)?;
    let prow = tab[pr].clone();
    let prhs = rhs[pr].clone();
    for r in 0..tab.len() {
        if r == pr {
            continue;
        }
        let factor = tab[r][pc].clone();
        if factor.is_zero() {
            continue;
        }
        for (v, p) in tab[r].iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v = v.sub(&factor.mul(p).ok_or(Overflow)?).ok_or(Overflow)?;
            }
        }
        rhs[r] = rhs[r].sub(&factor.mul(&prhs).ok_or(Overflow)?).ok_or(Overflow)?;
    }
    let factor = cost[pc].clone();
    if !factor.is_zero() {
        for (v, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v = v.sub(&factor.mul(p).ok_or(Overflow)?).ok_or(Overflow)?;
            }
        }
        *obj = obj.sub(&factor.mul(&prhs).ok_or(Overflow)?).ok_or(Overflow)?;
    }
    Ok(())
}

/// Solves the square system `m·x = b` exactly; `None` if singular.
pub fn solve_square(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !Zero::is_zero(&a[r][col]))?;
        a.swap(col, p);
        let piv = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &piv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !Zero::is_zero(&row[col]) {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("3/5").unwrap(), q(3, 5));
        assert_eq!(parse_rational(" -2 ").unwrap(), q(-2, 1));
        assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational("0.70710678").unwrap(), q(35355339, 50000000));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[q(1, 2), q(3, 4), q(-1, 4)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3), BigInt::from(-1)]);
        let v = primitive_integer_vector(&[q(4, 1), q(6, 1)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn simplex_feasible_and_infeasible() {
        // u1 + u2 ≥ 1, u1 − u2 ≥ 1, −u1 ≥ −5
        let mut s = LinearSystem::new(2);
        s.at_least(vec![1, 1], 1).at_least(vec![1, -1], 1).at_least(vec![-1, 0], -5);
        let u = s.solve().unwrap();
        assert!(s.satisfied_by(&u));

        // u ≥ 1 and −u ≥ 0
        let mut s = LinearSystem::new(1);
        s.at_least(vec![1], 1).at_least(vec![-1], 0);
        assert!(s.solve().is_none());

        // XOR is not separable: constraints f(x)(w·x − θ) ≥ 1.
        let mut s = LinearSystem::new(3);
        for (x1, x2, f) in [(-1, -1, -1), (1, -1, 1), (-1, 1, 1), (1, 1, -1)] {
            s.at_least(vec![f * x1, f * x2, -f], 1);
        }
        assert!(s.solve().is_none());
    }

    #[test]
    fn simplex_with_equalities() {
        let mut s = LinearSystem::new(3);
        s.equal(vec![1, 1, 1], 3).at_least(vec![1, -1, 0], 1).at_least(vec![0, 0, 1], 2);
        let u = s.solve().unwrap();
        assert!(s.satisfied_by(&u));
        let mut s = LinearSystem::new(2);
        s.equal(vec![1, 1], 0).at_least(vec![1, 1], 1);
        assert!(s.solve().is_none());
    }

    #[test]
    fn square_solve() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let x = solve_square(&m, &[q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let sing = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve_square(&sing, &[q(1, 1), q(1, 1)]).is_none());
    }
}
