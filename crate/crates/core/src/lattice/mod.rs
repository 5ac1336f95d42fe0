//! The infinite tight-binding lattice with ω = {…, −1, 0} and ω̄ = {1, 2, …}.
//!
//! Starting from site 0, the unrestricted probabilities are Bessel
//! functions, `P_u(ω,t|0,0) = (1 + J₀²(2t))/2` and `K(τ) = (1 − J₀²(2τ))/2`.
//! With `L[J₀²(2t)] = (2/πs) K(−16/s²)` the renewal algebra gives closed
//! Laplace transforms of `P_r` and `P_fp` in terms of the complete elliptic
//! integral, which are inverted numerically or expanded at small times.

pub mod bessel;
pub mod elliptic;
pub mod inversion;
pub mod series;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use bessel::{bessel_j, bessel_j_orders};
pub use elliptic::{elliptic_k, elliptic_k_complex};
pub use inversion::{euler_inversion, invert_laplace_numeric, talbot_inversion, EulerParams};
pub use series::{small_time_series, SmallTimeSeries};

use crate::error::{Error, Result};
use crate::volterra::{solve_volterra, Differentiable, TimeGrid};

/// `P_u(ω, t | 0, 0) = (1 + J₀²(2t)) / 2`.
pub fn lattice_survival(t: f64) -> f64 {
    0.5 * (1.0 + bessel_j(0, 2.0 * t).powi(2))
}

/// `K(τ) = P_u(ω, τ | 1, 0) = (1 − J₀²(2τ)) / 2`.
pub fn lattice_kernel(tau: f64) -> f64 {
    0.5 * (1.0 - bessel_j(0, 2.0 * tau).powi(2))
}

/// `d/dt J₀²(2t) = −4 J₀(2t) J₁(2t)`.
fn j0_squared_derivative(t: f64) -> f64 {
    let j = bessel_j_orders(1, 2.0 * t);
    -4.0 * j[0] * j[1]
}

/// `L[J₀²(a t)](s) = (2/πs) K(−4a²/s²)`, valid off the imaginary segment
/// `[−2ia, 2ia]`.
pub fn laplace_j0_squared(a: f64, s: Complex64) -> Result<Complex64> {
    let m = -4.0 * a * a / (s * s);
    Ok(2.0 / (PI * s) * elliptic_k_complex(m)?)
}

fn check_half_plane(s: Complex64) -> Result<()> {
    if s.re > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Laplace variable {s} needs Re(s) > 0"
        )))
    }
}

/// `L[P_r](s) = (4/s) K(−16/s²) / (π + 2K(−16/s²))` for `Re s > 0`.
pub fn laplace_pr(s: Complex64) -> Result<Complex64> {
    check_half_plane(s)?;
    laplace_pr_continued(s)
}

/// `L[P_fp](s) = (π − 2K(−16/s²)) / (π + 2K(−16/s²))` for `Re s > 0`.
pub fn laplace_pfp(s: Complex64) -> Result<Complex64> {
    check_half_plane(s)?;
    laplace_pfp_continued(s)
}

/// Analytic continuation of [`laplace_pr`] to the plane cut along
/// `[−4i, 4i]`, for contours that enter the left half-plane.
pub fn laplace_pr_continued(s: Complex64) -> Result<Complex64> {
    let k = elliptic_k_complex(-16.0 / (s * s))?;
    Ok(4.0 / s * k / (PI + 2.0 * k))
}

/// Analytic continuation of [`laplace_pfp`]; see [`laplace_pr_continued`].
pub fn laplace_pfp_continued(s: Complex64) -> Result<Complex64> {
    let k = elliptic_k_complex(-16.0 / (s * s))?;
    Ok((PI - 2.0 * k) / (PI + 2.0 * k))
}

/// Which route produced a [`LatticeSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeMethod {
    Series,
    NumericInversion,
    Volterra,
}

/// Default truncation order for [`LatticeMethod::Series`].
pub const DEFAULT_SERIES_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution {
    pub grid: TimeGrid,
    pub restricted: Vec<f64>,
    pub density: Vec<f64>,
    pub method: LatticeMethod,
}

/// Samples the lattice `P_r` and `P_fp` on `grid` by the chosen route.
pub fn solve_lattice(method: LatticeMethod, grid: &TimeGrid) -> Result<LatticeSolution> {
    let (restricted, density) = match method {
        LatticeMethod::Series => {
            let series = small_time_series(DEFAULT_SERIES_ORDER)?;
            (
                grid.nodes().map(|t| series.restricted_at(t)).collect(),
                grid.nodes().map(|t| series.density_at(t)).collect(),
            )
        }
        LatticeMethod::NumericInversion => {
            let mut pr = Vec::with_capacity(grid.len());
            let mut pfp = Vec::with_capacity(grid.len());
            for t in grid.nodes() {
                if t == 0.0 {
                    pr.push(1.0);
                    pfp.push(0.0);
                    continue;
                }
                pr.push(invert_laplace_numeric(|s| eval_or_nan(laplace_pr(s)), t)?);
                pfp.push(invert_laplace_numeric(|s| eval_or_nan(laplace_pfp(s)), t)?);
            }
            (pr, pfp)
        }
        LatticeMethod::Volterra => {
            let survival = Differentiable(lattice_survival, |t| 0.5 * j0_squared_derivative(t));
            let kernel = Differentiable(lattice_kernel, |t| -0.5 * j0_squared_derivative(t));
            let sol = solve_volterra(&survival, &kernel, grid)?;
            (sol.restricted, sol.density)
        }
    };
    Ok(LatticeSolution {
        grid: *grid,
        restricted,
        density,
        method,
    })
}

fn eval_or_nan(v: Result<Complex64>) -> Complex64 {
    v.unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InitialState, Partition, TightBindingChain};
    use crate::propagator::survival_trigsum;

    #[test]
    fn initial_values() {
        assert_eq!(lattice_survival(0.0), 1.0);
        assert_eq!(lattice_kernel(0.0), 0.0);
    }

    #[test]
    fn survival_matches_brute_force_sum() {
        // Σ_{n≤0} |aₙ(t)|² with |aₙ(t)| = |J_{|n|}(2t)|
        let t = 1.0;
        let j = bessel_j_orders(60, 2.0 * t);
        let direct = j[0] * j[0] + j[1..].iter().map(|v| v * v).sum::<f64>();
        assert!((direct - lattice_survival(t)).abs() < 1e-10);
    }

    #[test]
    fn survival_matches_long_finite_chain() {
        // 121-site chain centred on the start site, propagated exactly
        let chain = TightBindingChain::uniform(121).unwrap();
        let p = Partition::new(&chain, 61).unwrap();
        let start = InitialState::new(&chain, &p, 61).unwrap();
        let finite = survival_trigsum(&chain, &p, &start).unwrap();
        for &t in &[0.3, 1.0, 3.0] {
            assert!(
                (finite.eval(t) - lattice_survival(t)).abs() < 1e-10,
                "t={t}"
            );
        }
    }

    #[test]
    fn survival_and_complement_sum_to_one() {
        for &t in &[0.2, 1.3, 7.0] {
            // ω̄ occupation from site 0 is the kernel by reflection symmetry
            assert!((lattice_survival(t) + lattice_kernel(t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn initial_value_theorem() {
        let s = Complex64::new(1e4, 0.0);
        assert!((laplace_pr(s).unwrap() * s - 1.0).norm() < 1e-6);
        assert!((laplace_pfp(s).unwrap() * s).norm() < 1e-3);
        assert!(laplace_pr(Complex64::new(0.0, 1.0)).is_err());
        assert!(laplace_pfp(Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn transforms_are_consistent() {
        // P_fp = −P_r′ with P_r(0) = 1  ⇔  L[P_fp] = 1 − s L[P_r]
        for s in [
            Complex64::new(0.5, 0.0),
            Complex64::new(2.0, 3.0),
            Complex64::new(-1.0, 5.0),
        ] {
            let lhs = laplace_pfp_continued(s).unwrap();
            let rhs = 1.0 - s * laplace_pr_continued(s).unwrap();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }
}
