//! Global-error convergence sweeps and empirical orders.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quantum::{exact_evolution, HermitianPart, QuantumState, SpinSystem, UnitaryStepper, C64};
use super::timedep::{timeordered_run, TimeDependentParts};
use crate::error::{invalid, Result};
use crate::fmt::f64_17;
use crate::schemes::{g2, Scheme};

/// Errors at or below this level are treated as rounding and excluded from
/// slope fits.
pub const ERROR_FLOOR: f64 = 1e-13;

/// Rounding accumulated per applied stage exponential, used to raise the
/// floor for long runs of many-stage schemes.
pub const ROUNDOFF_PER_STAGE: f64 = 2.0 * f64::EPSILON;

/// Error floor of a run with `steps` steps of a scheme with `stages` stages.
pub fn error_floor(steps: usize, stages: usize) -> f64 {
    ERROR_FLOOR.max(ROUNDOFF_PER_STAGE * (steps * stages) as f64)
}

/// Ratio between the driven-system reference step and the finest step of a
/// sweep.
pub const REFERENCE_REFINEMENT: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestSystem {
    /// `σ_z + Γσ_x` over half a precession period. Over a whole period the
    /// error terms orthogonal to `H` (all even-degree brackets here) average
    /// out to leading order and the observed order is inflated.
    Spin { gamma: f64 },
    /// Random Hermitian `A`, `B` of the given dimension, evolved to `t = 1`.
    RandomHermitian { dim: usize, seed: u64 },
    /// `σ_z + ω cos(t) σ_x` from 0 to 1; time-ordered schemes only.
    Driven { omega: f64 },
}

impl TestSystem {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = |d: f64| if arg.is_empty() { Ok(d) } else { arg.parse::<f64>().map_err(|_| crate::Error::InvalidArgument(format!("bad system parameter {arg:?}"))) };
        match name {
            "spin" => Ok(TestSystem::Spin { gamma: num(0.75)? }),
            "random3" => Ok(TestSystem::RandomHermitian { dim: 3, seed: num(1.0)? as u64 }),
            "driven" => Ok(TestSystem::Driven { omega: num(1.0)? }),
            _ => invalid(format!("unknown system {s:?}; use spin[:Γ], random3[:seed] or driven[:ω]")),
        }
    }

    pub fn total_time(&self) -> f64 {
        match self {
            TestSystem::Spin { gamma } => 0.5 * SpinSystem::new(*gamma).period(),
            _ => 1.0,
        }
    }
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&m + m.adjoint()).scale(0.5)
}

/// Slot parts and initial state of a time-independent system.
fn static_parts(sys: &TestSystem) -> Option<(Vec<HermitianPart>, QuantumState)> {
    match sys {
        TestSystem::Spin { gamma } => Some((SpinSystem::new(*gamma).parts(), SpinSystem::initial_state())),
        TestSystem::RandomHermitian { dim, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let a = random_hermitian(*dim, &mut rng);
            let b = random_hermitian(*dim, &mut rng);
            let psi = QuantumState::basis(*dim, 0);
            Some((
                vec![HermitianPart::new(a).expect("Hermitian"), HermitianPart::new(b).expect("Hermitian")],
                psi,
            ))
        }
        TestSystem::Driven { .. } => None,
    }
}

fn time_dependent(sys: &TestSystem) -> Option<(TimeDependentParts, QuantumState)> {
    match sys {
        TestSystem::Driven { omega } => Some((TimeDependentParts::driven_two_level(*omega), QuantumState::basis(2, 0))),
        _ => {
            let (parts, psi) = static_parts(sys)?;
            Some((
                TimeDependentParts::constant(parts[0].matrix().clone(), parts[1].matrix().clone()),
                psi,
            ))
        }
    }
}

/// State after `steps` steps of `scheme` over the system's total time.
pub fn propagate_with(scheme: &Scheme, sys: &TestSystem, steps: usize) -> Result<QuantumState> {
    let dt = sys.total_time() / steps as f64;
    if scheme.slot_index("T").is_some() {
        let (parts, psi) = time_dependent(sys).expect("every system has a time-dependent form");
        return timeordered_run(scheme, &parts, 0.0, dt, steps, &psi);
    }
    let Some((parts, mut psi)) = static_parts(sys) else {
        return invalid("the driven system needs a scheme with a T slot");
    };
    let stepper = UnitaryStepper::new(scheme, &parts, dt)?;
    for _ in 0..steps {
        stepper.step(&mut psi)?;
    }
    Ok(psi)
}

/// Reference final state: exact evolution for time-independent systems, the
/// midpoint time-ordered scheme at `REFERENCE_REFINEMENT` times the finest
/// step count otherwise.
pub fn reference_state(sys: &TestSystem, finest_steps: usize) -> Result<QuantumState> {
    match static_parts(sys) {
        Some((parts, psi)) => {
            let h = HermitianPart::new(parts[0].matrix() + parts[1].matrix())?;
            Ok(exact_evolution(&h, sys.total_time(), &psi))
        }
        None => propagate_with(&g2(), sys, finest_steps * REFERENCE_REFINEMENT),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub steps: usize,
    pub dt: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub points: Vec<ConvergencePoint>,
    /// Log–log least-squares slope over the points above their
    /// [`error_floor`]; `None` when fewer than two remain.
    pub slope: Option<f64>,
    pub fitted: usize,
}

/// Final-state error `‖ψ_scheme − ψ_ref‖` for each step count.
pub fn convergence_sweep(scheme: &Scheme, sys: &TestSystem, step_counts: &[usize]) -> Result<ConvergenceReport> {
    if step_counts.is_empty() || step_counts.contains(&0) {
        return invalid("step counts must be positive");
    }
    let finest = *step_counts.iter().max().expect("nonempty");
    let reference = reference_state(sys, finest)?;
    let mut points = Vec::with_capacity(step_counts.len());
    for &n in step_counts {
        let psi = propagate_with(scheme, sys, n)?;
        points.push(ConvergencePoint {
            steps: n,
            dt: sys.total_time() / n as f64,
            error: psi.distance(&reference),
        });
    }
    let stages = scheme.stages().len();
    let kept: Vec<&ConvergencePoint> = points
        .iter()
        .filter(|p| p.error > error_floor(p.steps, stages))
        .collect();
    let slope = (kept.len() >= 2).then(|| {
        let x: Vec<f64> = kept.iter().map(|p| p.dt.ln()).collect();
        let y: Vec<f64> = kept.iter().map(|p| p.error.ln()).collect();
        super::classical::linear_slope(&x, &y)
    });
    Ok(ConvergenceReport {
        fitted: kept.len(),
        points,
        slope,
    })
}

/// Step counts `2^lo ..= 2^hi`.
pub fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from("steps,dt,error\n");
    for p in &report.points {
        s.push_str(&format!("{},{},{}\n", p.steps, f64_17(p.dt), f64_17(p.error)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{strang, trotter};

    #[test]
    fn trotter_is_first_order() {
        let r = convergence_sweep(&trotter(), &TestSystem::Spin { gamma: 0.75 }, &powers_of_two(6, 10)).unwrap();
        assert!((r.slope.unwrap() - 1.0).abs() < 0.2);
    }

    #[test]
    fn strang_is_second_order() {
        let r = convergence_sweep(&strang(), &TestSystem::Spin { gamma: 0.75 }, &powers_of_two(6, 10)).unwrap();
        assert!((r.slope.unwrap() - 2.0).abs() < 0.2);
    }

    #[test]
    fn driven_needs_time_slot() {
        assert!(convergence_sweep(&strang(), &TestSystem::Driven { omega: 1.0 }, &[4]).is_err());
    }

    #[test]
    fn parse_systems() {
        assert_eq!(TestSystem::parse("spin").unwrap(), TestSystem::Spin { gamma: 0.75 });
        assert_eq!(TestSystem::parse("driven:2").unwrap(), TestSystem::Driven { omega: 2.0 });
        assert!(TestSystem::parse("nope").is_err());
    }
}
