//! Small-time Taylor series of the lattice `P_r` and `P_fp`, obtained from
//! the large-`s` expansion of their Laplace transforms.
//!
//! With `x = 1/s²` and `κ(x) = (2/π) K(−16x) = Σ (−1)ᵏ C(2k,k)² xᵏ`,
//!
//! ```text
//! L[P_r]  = (2/s) κ/(1+κ)    = Σ 2 gₖ s^{−2k−1}   →  P_r  = Σ 2 gₖ t^{2k}/(2k)!
//! L[P_fp] = (1−κ)/(1+κ)      = Σ hₖ s^{−2k}       →  P_fp = Σ hₖ t^{2k−1}/(2k−1)!
//! ```

use crate::error::{Error, Result};

pub const MAX_SERIES_ORDER: usize = 20;

/// Polynomial coefficients in `t` (index = power).
#[derive(Debug, Clone, PartialEq)]
pub struct SmallTimeSeries {
    pub restricted: Vec<f64>,
    pub density: Vec<f64>,
}

impl SmallTimeSeries {
    pub fn restricted_at(&self, t: f64) -> f64 {
        horner(&self.restricted, t)
    }

    pub fn density_at(&self, t: f64) -> f64 {
        horner(&self.density, t)
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

/// Coefficients of `κ(x)` up to `xᵒʳᵈᵉʳ`.
fn kappa(order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut central = 1.0f64; // C(2k, k)
    for k in 0..=order {
        if k > 0 {
            central *= (2 * k * (2 * k - 1)) as f64 / (k * k) as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * central * central);
    }
    out
}

/// Power-series quotient `num / den` truncated to `num.len()` terms.
fn divide(num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; num.len()];
    for k in 0..num.len() {
        let mut v = num[k];
        for j in 1..=k.min(den.len() - 1) {
            v -= den[j] * q[k - j];
        }
        q[k] = v / den[0];
    }
    q
}

pub fn small_time_series(order: usize) -> Result<SmallTimeSeries> {
    if order == 0 || order > MAX_SERIES_ORDER {
        return Err(Error::Precondition(format!(
            "series order must lie in 1..={MAX_SERIES_ORDER}, got {order}"
        )));
    }
    let kap = kappa(order);
    let one_plus: Vec<f64> = kap
        .iter()
        .enumerate()
        .map(|(k, &c)| if k == 0 { 1.0 + c } else { c })
        .collect();
    let one_minus: Vec<f64> = kap
        .iter()
        .enumerate()
        .map(|(k, &c)| if k == 0 { 1.0 - c } else { -c })
        .collect();
    let g = divide(&kap, &one_plus);
    let h = divide(&one_minus, &one_plus);

    let mut restricted = vec![0.0; 2 * order + 1];
    let mut density = vec![0.0; 2 * order];
    let mut fact = 1.0; // running n!
    for n in 0..=2 * order {
        if n > 0 {
            fact *= n as f64;
        }
        if n % 2 == 0 {
            restricted[n] = 2.0 * g[n / 2] / fact;
        } else {
            density[n] = h[n.div_ceil(2)] / fact;
        }
    }
    Ok(SmallTimeSeries {
        restricted,
        density,
    })
}
