//! Gaussian special functions and mixed Boolean–Gaussian degree-1 weights.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ltf::linear_form_values;

/// Largest head handled by exact enumeration in [`mixed_degree1`].
pub const MAX_HEAD: usize = 24;

/// `√(2/π)`, the value of `2φ(0)`.
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Standard normal density.
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF.
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `μ(θ) = E[sign(X − θ)] = 1 − 2Φ(θ)`.
pub fn mu(theta: f64) -> f64 {
    if theta.abs() < 1.0 {
        -libm::erf(theta * FRAC_1_SQRT_2)
    } else {
        theta.signum() * (libm::erfc(theta.abs() * FRAC_1_SQRT_2) - 1.0)
    }
}

/// Inverse of [`mu`]: returns `θ` with `μ(θ) = ν`; `±1` map to `∓∞`.
pub fn mu_inv(nu: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&nu) || nu.is_nan() {
        return Err(Error::Domain(format!("mu_inv requires |ν| ≤ 1, got {nu}")));
    }
    if nu == 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if nu == -1.0 {
        return Ok(f64::INFINITY);
    }
    // μ is decreasing; |μ(±40)| rounds to 1.
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mu(mid) > nu {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    let d = -2.0 * phi(t);
    if d != 0.0 {
        let step = (mu(t) - nu) / d;
        if step.abs() < 1e-12 {
            t -= step;
        }
    }
    Ok(t)
}

/// `W(ν) = (2φ(μ⁻¹(ν)))²`.
pub fn w_func(nu: f64) -> Result<f64> {
    let t = mu_inv(nu)?;
    if t.is_infinite() {
        return Ok(0.0);
    }
    Ok((2.0 * phi(t)).powi(2))
}

/// `E|X − θ| = 2φ(θ) − θμ(θ)` for `X ~ N(0,1)`.
pub fn expected_abs_shift(theta: f64) -> f64 {
    2.0 * phi(theta) - theta * mu(theta)
}

/// Threshold, mean, and `W`-value of `sign(X − θ)` under the Gaussian measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianProfile {
    pub theta: f64,
    pub mu: f64,
    pub w: f64,
}

impl GaussianProfile {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            mu: mu(theta),
            w: (2.0 * phi(theta)).powi(2),
        }
    }
}

/// Gauss–Hermite rule for `E[g(Z)]`, `Z ~ N(0,1)`: nodes and weights summing to 1.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    // Physicists' Hermite roots by Newton iteration from asymptotic guesses.
    let n = order;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    let pim4 = PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2 - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let nodes = x.iter().map(|v| v * SQRT_2).collect();
    let weights = w.iter().map(|v| v / PI.sqrt()).collect();
    (nodes, weights)
}

fn gh64() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(64))
}

/// `E[g(Z)]` for `Z ~ N(0,1)` by 64-point Gauss–Hermite quadrature.
pub fn gaussian_expectation(g: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gh64();
    x.iter().zip(w).map(|(&xi, &wi)| wi * g(xi)).sum()
}

/// Degree-1 coefficients of `F(x_H, y) = sign(w_H·x_H + σ_T·y)` with
/// Boolean head `x_H` and standard Gaussian `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedDegree1 {
    /// `f̃(i)` for each head coordinate.
    pub head: Vec<f64>,
    /// `F̂(y)`.
    pub tail: f64,
    /// `Σ f̃(i)² + F̂(y)²`.
    pub w1: f64,
}

/// Exact head enumeration of the mixed degree-1 coefficients.
pub fn mixed_degree1(w_head: &[f64], sigma_tail: f64) -> Result<MixedDegree1> {
    let h = w_head.len();
    if h > MAX_HEAD {
        return Err(Error::HeadTooLarge(h));
    }
    if !(sigma_tail > 0.0) {
        return Err(Error::Domain(format!("tail norm must be positive, got {sigma_tail}")));
    }
    let s = linear_form_values(w_head);
    let mut head = vec![0.0; h];
    let mut tail = 0.0;
    for (b, &sb) in s.iter().enumerate() {
        let t = sb / sigma_tail;
        // E_y[sign(s + σ y)] = 1 − 2Φ(−s/σ) = −μ(t)
        let e = -mu(t);
        for (i, c) in head.iter_mut().enumerate() {
            if b >> i & 1 == 1 {
                *c += e;
            } else {
                *c -= e;
            }
        }
        tail += 2.0 * phi(t);
    }
    let norm = s.len() as f64;
    head.iter_mut().for_each(|c| *c /= norm);
    tail /= norm;
    let w1 = head.iter().map(|c| c * c).sum::<f64>() + tail * tail;
    Ok(MixedDegree1 { head, tail, w1 })
}

/// Mixed degree-1 weight of `f(x_H, g_T) = sign(w_H·x_H + w_T·g_T)` with one
/// independent Gaussian per tail coordinate. Each tail coefficient
/// `E[g_j f]` is computed by quadrature over `g_j`, integrating the
/// remaining tail in closed form.
pub fn mixed_degree1_independent(w_head: &[f64], w_tail: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let h = w_head.len();
    if h > MAX_HEAD {
        return Err(Error::HeadTooLarge(h));
    }
    let sigma_sq: f64 = w_tail.iter().map(|w| w * w).sum();
    if !(sigma_sq > 0.0) {
        return Err(Error::Domain("tail must be nonzero".into()));
    }
    let s = linear_form_values(w_head);
    let head = mixed_degree1(w_head, sigma_sq.sqrt())?.head;
    let tail: Vec<f64> = w_tail
        .iter()
        .map(|&wj| {
            let rest = (sigma_sq - wj * wj).max(0.0).sqrt();
            let total: f64 = s
                .iter()
                .map(|&sb| {
                    if rest <= 1e-12 * sigma_sq.sqrt() {
                        // E[g sign(s + w g)] = 2φ(s/|w|) sign(w)
                        if wj == 0.0 {
                            0.0
                        } else {
                            wj.signum() * 2.0 * phi(sb / wj.abs())
                        }
                    } else {
                        gaussian_expectation(|g| g * -mu((sb + wj * g) / rest))
                    }
                })
                .sum();
            total / s.len() as f64
        })
        .collect();
    let w1 = head.iter().chain(&tail).map(|c| c * c).sum();
    Ok((head, tail, w1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        assert_eq!(mu(0.0), 0.0);
        assert!((w_func(0.0).unwrap() - 2.0 / PI).abs() < 1e-14);
        assert_eq!(w_func(1.0).unwrap(), 0.0);
        assert_eq!(w_func(-1.0).unwrap(), 0.0);
        assert!((expected_abs_shift(0.0) - SQRT_2_OVER_PI).abs() < 1e-15);
        assert!((2.0 * phi(0.0) - SQRT_2_OVER_PI).abs() < 1e-15);
        assert!((cdf(1.959963984540054) - 0.975).abs() < 1e-14);
        assert!(mu_inv(1.5).is_err());
        assert!(mu(50.0) == -1.0 && mu(-50.0) == 1.0);
    }

    #[test]
    fn mu_inverse_roundtrip() {
        for k in -999..=999 {
            let nu = k as f64 / 1000.0;
            let t = mu_inv(nu).unwrap();
            assert!((mu(t) - nu).abs() <= 1e-12, "ν = {nu}");
        }
        for theta in [-5.0, -1.0, -0.3, 0.0, 0.7, 3.0] {
            let p = GaussianProfile::new(theta);
            assert!((w_func(p.mu).unwrap() - p.w).abs() < 1e-12);
        }
    }

    #[test]
    fn expected_abs_shift_matches_midpoint_rule() {
        for theta in [-2.0, -0.5, 0.0, 0.4, 1.3] {
            let steps = 400_000;
            let h = 24.0 / steps as f64;
            let q: f64 = (0..steps)
                .map(|k| {
                    let x = -12.0 + (k as f64 + 0.5) * h;
                    (x - theta).abs() * phi(x) * h
                })
                .sum();
            assert!((q - expected_abs_shift(theta)).abs() < 1e-9);
        }
    }

    #[test]
    fn hermite_rule_moments() {
        let (x, w) = gauss_hermite(64);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        let m2: f64 = x.iter().zip(&w).map(|(a, b)| a * a * b).sum();
        let m4: f64 = x.iter().zip(&w).map(|(a, b)| a.powi(4) * b).sum();
        assert!((m2 - 1.0).abs() < 1e-12);
        assert!((m4 - 3.0).abs() < 1e-11);
    }

    #[test]
    fn mixed_examples() {
        let m = mixed_degree1(&[], 1.0).unwrap();
        assert!((m.tail - SQRT_2_OVER_PI).abs() < 1e-15);
        assert!((m.w1 - 2.0 / PI).abs() < 1e-15);
        let q = gaussian_expectation(|y| y * y.signum());
        assert!((q - m.tail).abs() < 1e-2);

        let m = mixed_degree1(&[10.0], 1.0).unwrap();
        assert!((m.head[0] - 1.0).abs() < 1e-12);
        assert!(m.tail < 1e-20);
        assert!((m.w1 - 1.0).abs() < 1e-12);
        assert!(mixed_degree1(&[1.0; 25], 1.0).is_err());
    }

    #[test]
    fn collapsed_tail_matches_independent_tail() {
        let head = [0.5, 0.35, 0.2];
        let tail = [0.3, 0.25, 0.2, 0.1, 0.05];
        let sigma = tail.iter().map(|w| w * w).sum::<f64>().sqrt();
        let collapsed = mixed_degree1(&head, sigma).unwrap();
        let (_, tc, w1) = mixed_degree1_independent(&head, &tail).unwrap();
        assert!((w1 - collapsed.w1).abs() < 1e-10, "{w1} vs {}", collapsed.w1);
        for (j, c) in tc.iter().enumerate() {
            assert!((c - tail[j] / sigma * collapsed.tail).abs() < 1e-10);
        }
        // A single tail coordinate uses the closed form.
        let (_, tc, w1) = mixed_degree1_independent(&head, &[0.4]).unwrap();
        let c = mixed_degree1(&head, 0.4).unwrap();
        assert!((tc[0] - c.tail).abs() < 1e-14 && (w1 - c.w1).abs() < 1e-14);
    }
}
