//! Applying schemes to concrete dynamics.
//!
//! Quantum stages are exact unitaries from cached eigendecompositions;
//! classical stages are the exact kick and drift maps of a separable
//! Hamiltonian. The first-order Taylor step and explicit Euler are kept as
//! non-structure-preserving baselines.

mod classical;
mod composition;
mod converge;
mod precession;
mod quantum;
mod timedep;

pub use classical::{
    drift, euler_step, jacobian_det, kick, linear_slope, run_umeno, symplectic_step, umeno_csv,
    umeno_initial, ClassicalMethod, HarmonicOscillator, PhasePoint, SeparableHamiltonian, SlotMap,
    SymplecticStepper, Umeno, UmenoSample,
};
pub use composition::{perturbational_composition, phi, x_coth_x, CompositionRow, GAMMA_STEP, MAX_ABS_X};
pub use converge::{
    convergence_csv, convergence_sweep, error_floor, powers_of_two, propagate_with, random_hermitian,
    reference_state, ConvergencePoint, ConvergenceReport, TestSystem, ERROR_FLOOR, ROUNDOFF_PER_STAGE,
    REFERENCE_REFINEMENT,
};
pub use precession::{dominant_period, precession_csv, run_precession, Method, PrecessionSample};
pub use quantum::{
    bracket_matrix, commutator_generator, exact_evolution, perturbative_step, sigma_x, sigma_z,
    unitary_step, HermitianPart, QuantumState, SpinSystem, UnitaryStepper, C64, HERMITIAN_TOL,
};
pub use timedep::{timeordered_run, timeordered_step, TimeDependentParts};
