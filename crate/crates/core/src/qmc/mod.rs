//! Trotter mapping of the transverse-field Ising model onto a
//! classical Ising system with an extra Trotter axis, world-line Metropolis
//! sampling, exact references, Trotter extrapolation and annealing.

mod anneal;
mod exact;
mod extrapolate;
mod metropolis;
mod model;

pub use anneal::{anneal, geometric_schedule, AnnealResult, GAMMA_FLOOR};
pub use exact::{
    classical_ground_energy, diagonalize, enumerate, exact_reference, hamiltonian, trotter_trace, ExactObservables,
    TrotterNumber, MAX_ENUM_SPINS,
};
pub use extrapolate::{fit_trotter, trotter_extrapolate, Extrapolation, ExtrapolationFit, TrotterPoint};
pub use metropolis::{
    binned, metropolis_run, metropolis_stream, observable_names, sigma_x_estimate, Chain, ObservableStat, RunStats,
    MIN_BINS,
};
pub use model::{classical_action, couplings, flip_delta, IsingModel, TrotterCouplings, WorldlineConfig, MAX_ED_SITES};
