//! Quantum annealing by lowering the transverse field between Metropolis stages.

use serde::Serialize;

use super::metropolis::Chain;
use super::model::IsingModel;
use crate::error::{invalid, Result};

/// Smallest transverse field used; lower schedule values are clamped to it.
pub const GAMMA_FLOOR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnealResult {
    /// `Σ −J σσ` of the best layer at the end of the schedule.
    pub energy: f64,
    pub config: Vec<i8>,
    pub layer: usize,
    /// Fields actually used, after clamping.
    pub schedule: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Runs `sweeps_per_stage` sweeps at each field of a strictly decreasing
/// schedule, starting from random spins.
pub fn anneal(
    model: &IsingModel,
    n: usize,
    schedule: &[f64],
    sweeps_per_stage: usize,
    seed: u64,
) -> Result<AnnealResult> {
    if schedule.is_empty() {
        return invalid("annealing schedule is empty");
    }
    if schedule.iter().any(|g| !g.is_finite()) {
        return invalid("annealing schedule has a non-finite field");
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("annealing schedule must be strictly decreasing");
    }
    let mut warnings = Vec::new();
    let used: Vec<f64> = schedule
        .iter()
        .map(|g| {
            if *g < GAMMA_FLOOR {
                warnings.push(format!("field {g} clamped to the floor {GAMMA_FLOOR}"));
                GAMMA_FLOOR
            } else {
                *g
            }
        })
        .collect();
    let mut chain = Chain::random_start(&model.with_gamma(used[0]), n, seed, 0)?;
    for g in &used {
        chain.set_gamma(*g)?;
        for _ in 0..sweeps_per_stage {
            chain.sweep();
        }
    }
    let cfg = chain.config();
    let (layer, energy) = (0..n)
        .map(|m| (m, model.diagonal_energy(cfg.layer(m))))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(AnnealResult {
        energy,
        config: cfg.layer(layer).to_vec(),
        layer,
        schedule: used,
        warnings,
    })
}

/// `stages` fields decreasing geometrically from `start` to `end`.
pub fn geometric_schedule(start: f64, end: f64, stages: usize) -> Vec<f64> {
    if stages == 1 {
        return vec![end];
    }
    let r = (end / start).powf(1.0 / (stages - 1) as f64);
    (0..stages).map(|k| start * r.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_validation() {
        let m = IsingModel::chain(3, 1.0, 1.0, 4.0).unwrap();
        assert!(anneal(&m, 4, &[], 1, 0).is_err());
        assert!(anneal(&m, 4, &[1.0, 1.0], 1, 0).is_err());
        let r = anneal(&m, 4, &[1.0, 0.0], 2, 0).unwrap();
        assert_eq!(r.schedule, vec![1.0, GAMMA_FLOOR]);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn geometric() {
        let s = geometric_schedule(3.0, 0.01, 5);
        assert_eq!(s.len(), 5);
        assert!((s[4] - 0.01).abs() < 1e-15 && s[0] == 3.0);
        assert_eq!(geometric_schedule(3.0, 0.01, 1), vec![0.01]);
    }
}
