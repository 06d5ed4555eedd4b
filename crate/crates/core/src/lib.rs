//! Exponential product formulas and the tools around them.
//!
//! The crate is organised in five layers:
//!
//! * [`ncalg`] exact truncated series in noncommuting generators, the series
//!   logarithm and projection onto the Lyndon basis of the free Lie algebra,
//!   plus matrix-level operator-differential utilities.
//! * [`schemes`] construction and flattening of splitting schemes (Trotter,
//!   Strang, fractal recursions, Ruth, hybrid and time-ordered variants).
//! * [`orders`] order-condition generation, order verification and a damped
//!   Gauss-Newton solver for scheme coefficients.
//! * [`propagate`] unitary, symplectic and time-ordered stepping together with
//!   the non-structure-preserving baselines.
//! * [`qmc`] the Suzuki-Trotter mapping of the transverse-field Ising model,
//!   world-line Metropolis sampling, exact references and annealing.

pub mod error;
pub mod fmt;
pub mod ncalg;
pub mod orders;
pub mod propagate;
pub mod qmc;
pub mod schemes;

pub use error::{Error, Result};
pub use ncalg::{
    lie_project, product_log, series_log, series_mul, stage_exp, Bracket, Coeff, LieCombination,
    NcSeries, Poly, Rational, StageGenerator, Word,
};
pub use orders::{order_conditions, solve, verify_order, OrderConditionSet, SolveReport};
pub use qmc::{IsingModel, RunStats, TrotterCouplings, WorldlineConfig};
pub use schemes::{Scheme, Stage, StageCoeff, StageKind};
