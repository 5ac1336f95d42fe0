//! Quantum first-passage-time densities for tight-binding chains with a
//! single pair of doorway sites.
//!
//! The restricted probability `P_r` (never having left ω) and the
//! first-passage density `P_fp = −P_r′` follow from the renewal equation
//!
//! ```text
//! P_u(ω,t|ν,0) = P_r(t) + ∫₀ᵗ P_u(ω,t−t′|b+1,0) P_fp(t′) dt′,
//! ```
//!
//! whose unrestricted probabilities `P_u` come from free unitary evolution.
//! Two independent routes solve it: [`laplace_exact`] (closed forms via
//! rational Laplace transforms) and [`volterra`] (time stepping). The
//! [`lattice`] module treats the infinite chain and [`fptcore`] checks the
//! physical validity of a solution.

pub mod error;
pub mod fptcore;
pub mod laplace_exact;
pub mod lattice;
pub mod model;
pub mod poly;
pub mod propagator;
pub mod trigsum;
pub mod volterra;

pub use error::{Error, Result};
pub use fptcore::{
    check_conditions, find_time_domain, max_deviation, mean_fpt, Curve, FptSolution, Trend,
    ValidityReport,
};
pub use laplace_exact::{
    invert_rational, solve_exact, solve_fpt_laplace, trigsum_laplace, ExactFpt, RationalLaplace,
};
pub use lattice::{solve_lattice, LatticeMethod, LatticeSolution};
pub use model::{
    build_hamiltonian, spectral_decompose, validate_doorway, InitialState, Partition, Sites,
    SpectralDecomposition, TightBindingChain,
};
pub use poly::Poly;
pub use propagator::{evolve_amplitude, return_kernel_trigsum, survival_trigsum};
pub use trigsum::{Term, TrigSum};
pub use volterra::{classical_two_site, solve_volterra, TimeFunction, TimeGrid, VolterraSolution};
