use thiserror::Error;

/// Errors raised by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operation that needs a finite matrix was handed the infinite lattice.
    #[error("operation requires a finite chain")]
    UnsupportedFiniteOp,

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    /// Boundary or start site outside the admissible range.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{count} couplings cross the boundary after site {boundary}; the method needs exactly one doorway")]
    MultiDoorway { boundary: usize, count: usize },

    #[error("no coupling crosses the boundary after site {boundary}")]
    Disconnected { boundary: usize },

    #[error("1 - s L[kernel] vanishes identically")]
    Degenerate,

    #[error("repeated pole near {re:+.3e}{im:+.3e}i")]
    RepeatedPole { re: f64, im: f64 },

    #[error("pole {re:+.3e}{im:+.3e}i has a non-negligible real part")]
    UnstablePole { re: f64, im: f64 },

    #[error("rational function is not strictly proper")]
    ImproperRational,

    #[error("root finder did not converge for a degree {degree} polynomial")]
    RootFinding { degree: usize },

    #[error("grid too coarse: a-posteriori residual {residual:.3e} exceeds {bound:.3e}")]
    GridTooCoarse { residual: f64, bound: f64 },

    #[error("{which} = {value} at t = {t} is outside [0, 1]")]
    CallableRange {
        which: &'static str,
        t: f64,
        value: f64,
    },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("numerical inversion did not converge at t = {t} (estimates differ by {diff:.3e})")]
    NonConvergent { t: f64, diff: f64 },

    #[error(
        "mean first-passage time undefined: tail mass {tail_mass:.3e} beyond the sampled window"
    )]
    Undefined { tail_mass: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
