//! Physical-validity layer.
//!
//! A first-passage description is meaningful on `[0, T]`, where `T` is the
//! first zero of the restricted probability. On that interval `P_r` must
//! fall monotonically from one, the density `P_fp = −P_r′` must stay
//! non-negative, and it must integrate to one. Violations are reported,
//! never raised.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::trigsum::TrigSum;
use crate::volterra::TimeGrid;

pub const MONOTONICITY_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-6;
pub const NORMALIZATION_TOL: f64 = 1e-6;
/// Default upper limit of the search for `T`.
pub const DEFAULT_SEARCH_MAX: f64 = 50.0;
/// Nodes used to test monotonicity and positivity of closed forms.
const CHECK_NODES: usize = 10_000;
const BISECTION_TOL: f64 = 1e-12;
/// Depth below zero a sampled `P_r` must reach for a sign change to count.
const SAMPLED_ZERO_DEPTH: f64 = 1e-6;

/// A function of time, either in closed form or sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Closed(TrigSum),
    Sampled { grid: TimeGrid, values: Vec<f64> },
}

impl Curve {
    pub fn sampled(grid: TimeGrid, values: Vec<f64>) -> Self {
        assert_eq!(grid.len(), values.len(), "one sample per grid node");
        Self::Sampled { grid, values }
    }

    /// Value at `t`; sampled curves interpolate linearly and clamp to their
    /// last node.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Closed(f) => f.eval(t),
            Self::Sampled { grid, values } => {
                let (i, w) = locate(grid, t);
                if w == 0.0 {
                    values[i]
                } else {
                    values[i] * (1.0 - w) + values[i + 1] * w
                }
            }
        }
    }

    /// Last time at which the curve is known.
    pub fn horizon(&self) -> Option<f64> {
        match self {
            Self::Closed(_) => None,
            Self::Sampled { grid, .. } => Some(grid.t_max()),
        }
    }

    /// `∫₀ᵇ f`, exact for closed forms and trapezoidal for samples.
    pub fn integral_to(&self, b: f64) -> f64 {
        match self {
            Self::Closed(f) => f.integral(0.0, b),
            Self::Sampled { .. } => self.trapezoid_to(b, |_, v| v),
        }
    }

    /// `∫₀ᵇ t f(t) dt`.
    pub fn first_moment_to(&self, b: f64) -> f64 {
        match self {
            Self::Closed(f) => f.first_moment(0.0, b),
            Self::Sampled { .. } => self.trapezoid_to(b, |t, v| t * v),
        }
    }

    fn trapezoid_to(&self, b: f64, g: impl Fn(f64, f64) -> f64) -> f64 {
        let Self::Sampled { grid, values } = self else {
            unreachable!("closed forms integrate exactly")
        };
        let h = grid.step();
        let (last, w) = locate(grid, b);
        let mut acc = 0.0;
        for i in 0..last {
            acc += 0.5 * h * (g(grid.node(i), values[i]) + g(grid.node(i + 1), values[i + 1]));
        }
        if w > 0.0 {
            let t0 = grid.node(last);
            acc += 0.5 * (b - t0) * (g(t0, values[last]) + g(b, self.eval(b)));
        }
        acc
    }

    /// Evaluation points on `[0, end]`: the native nodes for samples,
    /// [`CHECK_NODES`] uniform points for closed forms.
    fn check_points(&self, end: f64) -> Vec<(f64, f64)> {
        match self {
            Self::Closed(f) => (0..=CHECK_NODES)
                .map(|i| {
                    let t = end * i as f64 / CHECK_NODES as f64;
                    (t, f.eval(t))
                })
                .collect(),
            Self::Sampled { grid, values } => {
                let mut pts: Vec<(f64, f64)> = grid
                    .nodes()
                    .zip(values.iter().copied())
                    .take_while(|(t, _)| *t <= end)
                    .collect();
                if pts.last().is_some_and(|(t, _)| *t < end) && end <= grid.t_max() {
                    pts.push((end, self.eval(end)));
                }
                pts
            }
        }
    }
}

/// Node index `i` and fraction `w` with `t = tᵢ + w·h`, clamped to the grid.
fn locate(grid: &TimeGrid, t: f64) -> (usize, f64) {
    if t <= 0.0 {
        return (0, 0.0);
    }
    if t >= grid.t_max() {
        return (grid.steps(), 0.0);
    }
    let x = t / grid.step();
    let i = (x.floor() as usize).min(grid.steps() - 1);
    (i, (x - i as f64).clamp(0.0, 1.0))
}

/// First zero `T` of `P_r` in `(0, search_max]`, or `None`.
pub fn find_time_domain(restricted: &Curve, search_max: f64) -> Option<f64> {
    match restricted {
        Curve::Closed(f) => {
            let step = match f.max_frequency() {
                Some(w) => (2.0 * PI / w / 50.0).min(0.01),
                None => 0.01,
            };
            let mut prev = (0.0, f.eval(0.0));
            let mut i = 1usize;
            loop {
                let t = (i as f64 * step).min(search_max);
                let v = f.eval(t);
                if prev.1 > 0.0 && v <= 0.0 {
                    return Some(bisect(|x| f.eval(x), prev.0, t));
                }
                if t >= search_max {
                    return None;
                }
                prev = (t, v);
                i += 1;
            }
        }
        Curve::Sampled { grid, values } => {
            let last = (0..=grid.steps())
                .take_while(|&i| grid.node(i) <= search_max)
                .last()?;
            for i in 0..last {
                let (v0, v1) = (values[i], values[i + 1]);
                if v0 > 0.0 && v1 <= 0.0 {
                    // discretization drift can hover just below zero; a
                    // genuine zero carries the curve clearly negative
                    let dips = values[i + 1..=last]
                        .iter()
                        .take_while(|&&v| v <= 0.0)
                        .any(|&v| v < -SAMPLED_ZERO_DEPTH);
                    if dips {
                        let (t0, t1) = (grid.node(i), grid.node(i + 1));
                        return Some(t0 + (t1 - t0) * v0 / (v0 - v1));
                    }
                }
            }
            None
        }
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Shape of the density on the checked interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Mixed,
}

/// Outcome of the validity checks on `[0, T]` (or on the searched window
/// when no zero of `P_r` was found).
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub time_domain: Option<f64>,
    /// Right end of the checked interval.
    pub checked_to: f64,
    /// Largest increase of `P_r` between neighbouring check points.
    pub monotonicity_violation: f64,
    /// Most negative value of `P_fp` (zero if none).
    pub positivity_violation: f64,
    /// `|∫ P_fp − 1|` over the checked interval.
    pub normalization_residual: f64,
    pub density_trend: Trend,
}

impl ValidityReport {
    pub fn restricted_monotone(&self) -> bool {
        self.monotonicity_violation <= MONOTONICITY_TOL
    }

    pub fn density_positive(&self) -> bool {
        self.positivity_violation >= -POSITIVITY_TOL
    }

    /// Normalization is only required on a finite time domain.
    pub fn normalized(&self) -> bool {
        self.time_domain.is_none() || self.normalization_residual <= NORMALIZATION_TOL
    }

    pub fn conditions_hold(&self) -> bool {
        self.restricted_monotone() && self.density_positive() && self.normalized()
    }
}

/// Runs the monotonicity, positivity and normalization checks on
/// `[0, T]`, or on `[0, horizon]` when `T` is unknown.
pub fn check_conditions(
    restricted: &Curve,
    density: &Curve,
    time_domain: Option<f64>,
    horizon: f64,
) -> ValidityReport {
    let end = time_domain.unwrap_or(horizon);
    let pr = restricted.check_points(end);
    let pfp = density.check_points(end);

    let monotonicity_violation = pr
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(0.0f64, f64::max);
    let positivity_violation = pfp.iter().map(|p| p.1).fold(0.0f64, f64::min);
    let normalization_residual = (density.integral_to(end) - 1.0).abs();

    let (mut up, mut down) = (false, false);
    for w in pfp.windows(2) {
        let d = w[1].1 - w[0].1;
        up |= d > 1e-12;
        down |= d < -1e-12;
    }
    let density_trend = match (up, down) {
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        _ => Trend::Mixed,
    };

    ValidityReport {
        time_domain,
        checked_to: end,
        monotonicity_violation,
        positivity_violation,
        normalization_residual,
        density_trend,
    }
}

/// A solved first-passage problem with its validity diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FptSolution {
    pub system: String,
    pub restricted: Curve,
    pub density: Curve,
    pub report: ValidityReport,
}

impl FptSolution {
    /// Locates `T` (searching up to `search_max`, or the sample horizon if
    /// shorter) and runs the validity checks.
    pub fn assemble(
        system: impl Into<String>,
        restricted: Curve,
        density: Curve,
        search_max: f64,
    ) -> Self {
        let horizon = restricted
            .horizon()
            .map_or(search_max, |h| h.min(search_max));
        let time_domain = find_time_domain(&restricted, horizon);
        let report = check_conditions(&restricted, &density, time_domain, horizon);
        Self {
            system: system.into(),
            restricted,
            density,
            report,
        }
    }

    pub fn time_domain(&self) -> Option<f64> {
        self.report.time_domain
    }
}

/// Tail mass above which an infinite-domain mean is undefined.
pub const TAIL_MASS_TOL: f64 = 1e-6;

/// Mean first-passage time `∫₀ᵀ t P_fp(t) dt`.
pub fn mean_fpt(solution: &FptSolution) -> Result<f64> {
    let end = match solution.report.time_domain {
        Some(t) => t,
        None => {
            let end = solution.report.checked_to;
            let tail_mass = (1.0 - solution.density.integral_to(end)).abs();
            if tail_mass > TAIL_MASS_TOL {
                return Err(Error::Undefined { tail_mass });
            }
            end
        }
    };
    Ok(solution.density.first_moment_to(end))
}

/// `max |a(t) − b(t)|` over `nodes + 1` uniform points of `[0, end]`.
pub fn max_deviation(a: &Curve, b: &Curve, end: f64, nodes: usize) -> f64 {
    (0..=nodes)
        .map(|i| {
            let t = end * i as f64 / nodes as f64;
            (a.eval(t) - b.eval(t)).abs()
        })
        .fold(0.0, f64::max)
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.time_domain {
            Some(t) => writeln!(f, "T={t:.6}")?,
            None => writeln!(f, "T=none")?,
        }
        writeln!(
            f,
            "normalization_residual={:.3e}",
            self.normalization_residual
        )?;
        writeln!(f, "positivity_violation={:.3e}", self.positivity_violation)?;
        write!(
            f,
            "monotonicity_violation={:.3e}",
            self.monotonicity_violation
        )
    }
}
