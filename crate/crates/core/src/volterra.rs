//! Direct numerical solution of the renewal (Schrödinger) integral equation
//!
//! ```text
//! P_u(t) = P_r(t) + ∫₀ᵗ K(t − t′) P_fp(t′) dt′,    P_fp = −P_r′
//! ```
//!
//! Differentiating once and using `K(0) = 0` turns this first-kind equation
//! into the second-kind equation
//!
//! ```text
//! P_fp(t) = −P_u′(t) + ∫₀ᵗ K′(t − t′) P_fp(t′) dt′,
//! ```
//!
//! which is discretized with the trapezoidal rule on a uniform grid. The
//! original equation is checked a posteriori on every node.

use crate::error::{Error, Result};
use crate::trigsum::TrigSum;

/// Uniform grid `tᵢ = i·h`, `i = 0..=N`, with `N·h = t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    step: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, step: f64) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "t_max = {t_max} and h = {step} must be positive"
            )));
        }
        let steps = (t_max / step).round();
        if steps < 1.0 || (steps * step - t_max).abs() > 1e-12 * t_max.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "t_max = {t_max} is not a whole multiple of h = {step}"
            )));
        }
        Ok(Self {
            t_max,
            step,
            steps: steps as usize,
        })
    }

    pub fn with_steps(t_max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidGrid("need at least one step".into()));
        }
        Self::new(t_max, t_max / steps as f64)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of intervals N.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of nodes, N + 1.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }
}

/// A function of time, optionally with an analytic derivative.
pub trait TimeFunction {
    fn value(&self, t: f64) -> f64;

    /// `None` makes the solver fall back to central differences.
    fn derivative(&self, _t: f64) -> Option<f64> {
        None
    }
}

impl TimeFunction for TrigSum {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn derivative(&self, t: f64) -> Option<f64> {
        Some(self.eval_derivative(t))
    }
}

/// Wraps a closure with no derivative information.
pub struct Sampled<F>(pub F);

impl<F: Fn(f64) -> f64> TimeFunction for Sampled<F> {
    fn value(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

/// Wraps a closure together with its analytic derivative.
pub struct Differentiable<F, G>(pub F, pub G);

impl<F: Fn(f64) -> f64, G: Fn(f64) -> f64> TimeFunction for Differentiable<F, G> {
    fn value(&self, t: f64) -> f64 {
        (self.0)(t)
    }

    fn derivative(&self, t: f64) -> Option<f64> {
        Some((self.1)(t))
    }
}

fn derivative_at(f: &dyn TimeFunction, t: f64, delta: f64) -> f64 {
    if let Some(d) = f.derivative(t) {
        return d;
    }
    if t >= delta {
        (f.value(t + delta) - f.value(t - delta)) / (2.0 * delta)
    } else {
        // second-order one-sided difference; callables need not accept t < 0
        (-3.0 * f.value(t) + 4.0 * f.value(t + delta) - f.value(t + 2.0 * delta)) / (2.0 * delta)
    }
}

/// Restricted probability and first-passage density on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VolterraSolution {
    pub grid: TimeGrid,
    pub restricted: Vec<f64>,
    pub density: Vec<f64>,
    /// Largest a-posteriori residual of the first-kind equation.
    pub residual: f64,
}

const RANGE_TOL: f64 = 1e-6;
const INITIAL_TOL: f64 = 1e-9;

/// Solves the renewal equation for `P_fp` and `P_r` on `grid`.
///
/// `survival` is `P_u(ω, t | ν, 0)` and `kernel` is the return kernel
/// `K(τ) = P_u(ω, τ | b+1, 0)`.
pub fn solve_volterra(
    survival: &dyn TimeFunction,
    kernel: &dyn TimeFunction,
    grid: &TimeGrid,
) -> Result<VolterraSolution> {
    let h = grid.step();
    let n = grid.len();

    let pu: Vec<f64> = grid.nodes().map(|t| survival.value(t)).collect();
    let k: Vec<f64> = grid.nodes().map(|t| kernel.value(t)).collect();
    if (pu[0] - 1.0).abs() > INITIAL_TOL {
        return Err(Error::Precondition(format!("P_u(0) = {} ≠ 1", pu[0])));
    }
    if k[0].abs() > INITIAL_TOL {
        return Err(Error::Precondition(format!("K(0) = {} ≠ 0", k[0])));
    }
    for (which, values) in [("P_u", &pu), ("K", &k)] {
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(*v))
        {
            return Err(Error::CallableRange {
                which,
                t: grid.node(i),
                value: v,
            });
        }
    }

    let delta = h / 10.0;
    let forcing: Vec<f64> = grid
        .nodes()
        .map(|t| -derivative_at(survival, t, delta))
        .collect();
    let dk: Vec<f64> = grid
        .nodes()
        .map(|t| derivative_at(kernel, t, delta))
        .collect();

    let mut density = vec![0.0; n];
    density[0] = forcing[0];
    let diag = 1.0 - 0.5 * h * dk[0];
    for i in 1..n {
        let mut acc = 0.5 * dk[i] * density[0];
        for j in 1..i {
            acc += dk[i - j] * density[j];
        }
        density[i] = (forcing[i] + h * acc) / diag;
    }

    let mut restricted = vec![1.0; n];
    for i in 1..n {
        restricted[i] = restricted[i - 1] - 0.5 * h * (density[i - 1] + density[i]);
    }

    // a-posteriori check of the undifferentiated equation
    let mut residual = 0.0f64;
    for i in 1..n {
        let mut conv = 0.5 * (k[i] * density[0] + k[0] * density[i]);
        for j in 1..i {
            conv += k[i - j] * density[j];
        }
        residual = residual.max((pu[i] - restricted[i] - h * conv).abs());
    }
    let bound = 10.0 * h * h;
    if residual > bound {
        return Err(Error::GridTooCoarse { residual, bound });
    }

    Ok(VolterraSolution {
        grid: *grid,
        restricted,
        density,
        residual,
    })
}

/// Classical two-site hopping at rate `p`; the master equation gives
/// `P_u(1,t|1,0) = (1 + e^{−2pt})/2` and `K(τ) = (1 − e^{−2pτ})/2`.
/// The exact answer is `P_fp = p e^{−pt}`.
pub fn classical_two_site(rate: f64, grid: &TimeGrid) -> Result<VolterraSolution> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::Precondition(format!(
            "hop rate {rate} must be positive"
        )));
    }
    let p = rate;
    let survival = Differentiable(
        move |t: f64| 0.5 * (1.0 + (-2.0 * p * t).exp()),
        move |t: f64| -p * (-2.0 * p * t).exp(),
    );
    let kernel = Differentiable(
        move |t: f64| 0.5 * (1.0 - (-2.0 * p * t).exp()),
        move |t: f64| p * (-2.0 * p * t).exp(),
    );
    solve_volterra(&survival, &kernel, grid)
}
