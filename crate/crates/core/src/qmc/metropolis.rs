//! Single-spin-flip Metropolis sampling of world-line configurations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::model::{classical_action, couplings, flip_delta, IsingModel, TrotterCouplings, WorldlineConfig};
use crate::error::{invalid, Result};

/// Minimum number of bins behind every standard error.
pub const MIN_BINS: usize = 20;

/// One Markov chain over world-line configurations.
#[derive(Clone, Debug)]
pub struct Chain {
    model: IsingModel,
    neighbours: Vec<Vec<(usize, f64)>>,
    couplings: TrotterCouplings,
    config: WorldlineConfig,
    action: f64,
    rng: ChaCha8Rng,
    attempts: u64,
    accepted: u64,
}

impl Chain {
    /// Chain started from all spins up.
    pub fn new(model: &IsingModel, n: usize, seed: u64, stream: u64) -> Result<Self> {
        Self::from_config(model, n, WorldlineConfig::uniform(model.sites, n, 1), seed, stream)
    }

    /// Chain started from independent random spins.
    pub fn random_start(model: &IsingModel, n: usize, seed: u64, stream: u64) -> Result<Self> {
        let mut rng = rng_for(seed, stream);
        let spins = (0..model.sites * n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let mut chain = Self::from_config(model, n, WorldlineConfig::from_spins(model.sites, n, spins)?, seed, stream)?;
        chain.rng = rng;
        Ok(chain)
    }

    pub fn from_config(model: &IsingModel, n: usize, config: WorldlineConfig, seed: u64, stream: u64) -> Result<Self> {
        model.validate()?;
        let c = couplings(model, n)?;
        let action = classical_action(model, &c, &config)?;
        Ok(Chain {
            model: model.clone(),
            neighbours: model.neighbours(),
            couplings: c,
            config,
            action,
            rng: rng_for(seed, stream),
            attempts: 0,
            accepted: 0,
        })
    }

    /// `N·n` single-spin-flip attempts at uniformly drawn sites.
    pub fn sweep(&mut self) {
        let (sites, layers) = (self.model.sites, self.couplings.n);
        for _ in 0..sites * layers {
            let i = self.rng.gen_range(0..sites);
            let m = self.rng.gen_range(0..layers);
            let d = flip_delta(&self.neighbours, &self.couplings, &self.config, i, m);
            self.attempts += 1;
            if d >= 0.0 || self.rng.gen::<f64>() < d.exp() {
                self.config.flip(i, m);
                self.action += d;
                self.accepted += 1;
            }
        }
    }

    /// Changes the transverse field, keeping the configuration.
    pub fn set_gamma(&mut self, gamma: f64) -> Result<()> {
        self.model.gamma = gamma;
        self.couplings = couplings(&self.model, self.couplings.n)?;
        self.action = classical_action(&self.model, &self.couplings, &self.config)?;
        Ok(())
    }

    pub fn config(&self) -> &WorldlineConfig {
        &self.config
    }

    pub fn couplings(&self) -> &TrotterCouplings {
        &self.couplings
    }

    pub fn model(&self) -> &IsingModel {
        &self.model
    }

    /// Action accumulated from Metropolis deltas.
    pub fn running_action(&self) -> f64 {
        self.action
    }

    pub fn acceptance(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }

    /// Observables of the current configuration, in [`observable_names`] order.
    pub fn measure(&self) -> Vec<f64> {
        let (sites, n) = (self.model.sites, self.couplings.n);
        let cfg = &self.config;
        let nb = self.model.bonds.len();
        let mut out = vec![0.0; nb + 6];
        for m in 0..n {
            let layer = cfg.layer(m);
            for (b, &(i, j, _)) in self.model.bonds.iter().enumerate() {
                out[b] += (layer[i] * layer[j]) as f64;
            }
            let mag = layer.iter().map(|s| *s as f64).sum::<f64>() / sites as f64;
            out[nb] += mag;
            out[nb + 1] += mag * mag;
            out[nb + 2] += (0..sites)
                .map(|i| (cfg.get(i, m as isize) * cfg.get(i, m as isize + 1)) as f64)
                .sum::<f64>()
                / sites as f64;
        }
        for v in out.iter_mut().take(nb + 3) {
            *v /= n as f64;
        }
        out[nb + 3] = self
            .model
            .bonds
            .iter()
            .zip(&out[..nb])
            .map(|(&(_, _, j), zz)| -j * zz)
            .sum();
        out[nb + 4] = sigma_x_estimate(&self.couplings, out[nb + 2]);
        out[nb + 5] = self.action;
        out
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `⟨σ^x⟩ = ∂(nδ_n + γ_n Σ_m σσ')/∂(βΓ)` per site:
/// `coth 2ε − csch 2ε · c` with `c` the Trotter-bond correlator.
pub fn sigma_x_estimate(c: &TrotterCouplings, trotter_corr: f64) -> f64 {
    let two_eps = 2.0 * c.epsilon;
    (1.0 / two_eps.tanh()) - trotter_corr / two_eps.sinh()
}

/// Names of the per-sweep observables for a model.
pub fn observable_names(model: &IsingModel) -> Vec<String> {
    let mut names: Vec<String> = model.bonds.iter().map(|(i, j, _)| format!("zz_{i}_{j}")).collect();
    names.extend(
        ["magnetization", "magnetization_sq", "trotter_corr", "diagonal_energy", "sigma_x", "action"]
            .iter()
            .map(|s| s.to_string()),
    );
    names
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableStat {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunStats {
    pub n: usize,
    pub sweeps: usize,
    pub therm: usize,
    pub seed: u64,
    pub bins: usize,
    pub acceptance: f64,
    pub observables: BTreeMap<String, ObservableStat>,
    /// Per-sweep measurements after thermalisation.
    #[serde(skip)]
    pub traces: BTreeMap<String, Vec<f64>>,
}

impl RunStats {
    pub fn get(&self, name: &str) -> Option<&ObservableStat> {
        self.observables.get(name)
    }

    /// Mean of `⟨σ^z_i σ^z_j⟩` for the bond `(i, j)`.
    pub fn zz(&self, i: usize, j: usize) -> Option<&ObservableStat> {
        self.get(&format!("zz_{i}_{j}")).or_else(|| self.get(&format!("zz_{j}_{i}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run stats serialise")
    }

    /// One column per observable, one row per measured sweep.
    pub fn traces_csv(&self) -> String {
        let names: Vec<&String> = self.traces.keys().collect();
        let mut out = String::from("sweep");
        for n in &names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        let len = self.traces.values().next().map_or(0, Vec::len);
        for k in 0..len {
            out.push_str(&(self.therm + k).to_string());
            for n in &names {
                out.push(',');
                out.push_str(&crate::fmt::f64_17(self.traces[*n][k]));
            }
            out.push('\n');
        }
        out
    }
}

/// Mean and standard error of `xs` from `bins` equal bins.
pub fn binned(xs: &[f64], bins: usize) -> ObservableStat {
    let per = xs.len() / bins;
    let means: Vec<f64> = (0..bins)
        .map(|b| xs[b * per..(b + 1) * per].iter().sum::<f64>() / per as f64)
        .collect();
    let mean = means.iter().sum::<f64>() / bins as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (bins as f64 * (bins - 1) as f64);
    ObservableStat {
        mean,
        stderr: var.sqrt(),
    }
}

/// Runs `sweeps` sweeps in total, discarding the first `therm`.
pub fn metropolis_run(model: &IsingModel, n: usize, sweeps: usize, therm: usize, seed: u64) -> Result<RunStats> {
    metropolis_stream(model, n, sweeps, therm, seed, 0)
}

/// [`metropolis_run`] on an explicit generator stream.
pub fn metropolis_stream(
    model: &IsingModel,
    n: usize,
    sweeps: usize,
    therm: usize,
    seed: u64,
    stream: u64,
) -> Result<RunStats> {
    if sweeps <= therm {
        return invalid(format!("sweeps ({sweeps}) must exceed thermalisation sweeps ({therm})"));
    }
    if sweeps - therm < MIN_BINS {
        return invalid(format!("at least {MIN_BINS} measured sweeps are needed"));
    }
    let mut chain = Chain::new(model, n, seed, stream)?;
    for _ in 0..therm {
        chain.sweep();
    }
    let names = observable_names(model);
    let mut traces: Vec<Vec<f64>> = vec![Vec::with_capacity(sweeps - therm); names.len()];
    for _ in therm..sweeps {
        chain.sweep();
        for (t, v) in traces.iter_mut().zip(chain.measure()) {
            t.push(v);
        }
    }
    let measured = sweeps - therm;
    let bins = MIN_BINS.max((measured / 1000).min(100));
    let bins = bins.min(measured);
    let observables = names
        .iter()
        .zip(&traces)
        .map(|(n, t)| (n.clone(), binned(t, bins)))
        .collect();
    Ok(RunStats {
        n,
        sweeps,
        therm,
        seed,
        bins,
        acceptance: chain.acceptance(),
        observables,
        traces: names.into_iter().zip(traces).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let m = IsingModel::chain(3, 1.0, 0.7, 2.0).unwrap();
        let a = metropolis_run(&m, 6, 400, 100, 9).unwrap();
        let b = metropolis_run(&m, 6, 400, 100, 9).unwrap();
        assert_eq!(a, b);
        let c = metropolis_run(&m, 6, 400, 100, 10).unwrap();
        assert_ne!(a.observables, c.observables);
    }

    #[test]
    fn running_action_stays_consistent() {
        let m = IsingModel::new(4, vec![(0, 1, 1.0), (1, 2, -0.7), (2, 3, 0.4), (3, 0, 1.1)], 0.9, 1.7).unwrap();
        let mut chain = Chain::new(&m, 8, 3, 0).unwrap();
        for _ in 0..10_000 {
            chain.sweep();
        }
        let full = classical_action(&m, chain.couplings(), chain.config()).unwrap();
        assert!((full - chain.running_action()).abs() < 1e-9);
    }

    #[test]
    fn decoupled_spins_are_uncorrelated() {
        let m = IsingModel::new(2, vec![(0, 1, 0.0)], 1.0, 1.0).unwrap();
        let s = metropolis_run(&m, 8, 20_000, 1000, 5).unwrap();
        let zz = s.zz(0, 1).unwrap();
        assert!(zz.mean.abs() < 3.0 * zz.stderr, "{zz:?}");
        assert!(s.bins >= MIN_BINS);
    }

    #[test]
    fn rejects_short_runs() {
        let m = IsingModel::chain(2, 1.0, 1.0, 1.0).unwrap();
        assert!(metropolis_run(&m, 4, 10, 10, 0).is_err());
        assert!(metropolis_run(&m, 4, 15, 0, 0).is_err());
    }

    #[test]
    fn binning() {
        let xs: Vec<f64> = (0..40).map(|k| (k % 2) as f64).collect();
        let s = binned(&xs, 20);
        assert_eq!(s.mean, 0.5);
        assert_eq!(s.stderr, 0.0);
    }

    #[test]
    fn traces_csv_shape() {
        let m = IsingModel::chain(2, 1.0, 1.0, 1.0).unwrap();
        let s = metropolis_run(&m, 2, 30, 5, 1).unwrap();
        let csv = s.traces_csv();
        assert_eq!(csv.lines().count(), 26);
        assert!(csv.starts_with("sweep,action,"));
    }
}
