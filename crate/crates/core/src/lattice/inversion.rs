//! Numerical inverse Laplace transforms.
//!
//! [`euler_inversion`] is the Fourier-series method with Euler summation
//! (Abate–Whitt); it only samples `F` on the vertical line `Re s = A/(2t)`.
//! [`talbot_inversion`] uses the fixed Talbot contour, which enters the
//! left half-plane and therefore needs the analytic continuation of `F`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of the Euler-summed Fourier-series inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParams {
    /// Contour abscissa times 2t; the discretization error is about `e^{−A}`.
    pub abscissa: f64,
    /// Plain partial-sum terms before Euler averaging.
    pub terms: usize,
    /// Binomial averaging depth.
    pub euler: usize,
}

impl EulerParams {
    /// `nodes` transform evaluations in total (`terms + euler + 1`).
    pub fn with_nodes(nodes: usize) -> Self {
        let euler = 12;
        Self {
            abscissa: 22.0,
            terms: nodes.saturating_sub(euler + 1).max(1),
            euler,
        }
    }

    pub fn nodes(&self) -> usize {
        self.terms + self.euler + 1
    }
}

impl Default for EulerParams {
    fn default() -> Self {
        Self::with_nodes(48)
    }
}

pub fn euler_inversion<F>(f: F, t: f64, params: EulerParams) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let a = params.abscissa;
    let scale = (0.5 * a).exp() / t;
    let total = params.terms + params.euler;
    // partial sums s_j of the alternating Fourier series
    let mut partial = Vec::with_capacity(total + 1);
    let mut acc = 0.5 * f(Complex64::new(a / (2.0 * t), 0.0)).re;
    partial.push(acc);
    for k in 1..=total {
        let s = Complex64::new(a, 2.0 * PI * k as f64) / (2.0 * t);
        let term = f(s).re;
        acc += if k % 2 == 0 { term } else { -term };
        partial.push(acc);
    }
    // binomial average of s_n … s_{n+m}
    let m = params.euler;
    let mut binom = 1.0;
    let mut avg = 0.0;
    for k in 0..=m {
        avg += binom * partial[params.terms + k];
        binom *= (m - k) as f64 / (k + 1) as f64;
    }
    scale * avg / 2f64.powi(m as i32)
}

/// Fixed Talbot contour with `nodes` points.
pub fn talbot_inversion<F>(f: F, t: f64, nodes: usize) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let m = nodes as f64;
    let r = 2.0 * m / (5.0 * t);
    let mut sum = 0.5 * (r * t).exp() * f(Complex64::new(r, 0.0)).re;
    for k in 1..nodes {
        let theta = k as f64 * PI / m;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        sum += ((s * t).exp() * f(s) * Complex64::new(1.0, sigma)).re;
    }
    r / m * sum
}

/// Tolerance between the `M`- and `2M`-node estimates.
pub const INVERSION_AGREEMENT_TOL: f64 = 1e-6;

/// Default inversion: Euler-summed Fourier series with 48 nodes, verified
/// against 96 nodes.
pub fn invert_laplace_numeric<F>(f: F, t: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "numerical inversion needs t > 0, got {t}"
        )));
    }
    let base = EulerParams::default();
    let coarse = euler_inversion(&f, t, base);
    let fine = euler_inversion(&f, t, EulerParams::with_nodes(2 * base.nodes()));
    let diff = (coarse - fine).abs();
    if !diff.is_finite() || diff > INVERSION_AGREEMENT_TOL {
        return Err(Error::NonConvergent { t, diff });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_pairs() {
        let r2 = 2f64.sqrt();
        let sine = |s: Complex64| 1.0 / (s * s + 2.0);
        let got = invert_laplace_numeric(sine, 1.0).unwrap();
        assert!((got - r2.sin() / r2).abs() < 1e-8, "{got}");

        let one = |s: Complex64| 1.0 / s;
        assert!((invert_laplace_numeric(one, 0.7).unwrap() - 1.0).abs() < 1e-9);

        let decay = |s: Complex64| 1.0 / (s + 1.0);
        for &t in &[0.1, 1.0, 4.0] {
            assert!((invert_laplace_numeric(decay, t).unwrap() - (-t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn talbot_known_pairs() {
        let cos = |s: Complex64| s / (s * s + 9.0);
        for &t in &[0.2, 1.0, 2.5] {
            assert!((talbot_inversion(cos, t, 32) - (3.0 * t).cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_positive_time() {
        assert!(invert_laplace_numeric(|s: Complex64| 1.0 / s, 0.0).is_err());
    }
}
