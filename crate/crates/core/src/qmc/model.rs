//! The transverse-field Ising model and its Trotter image.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest site count accepted by dense diagonalisation (`2^12 = 4096`).
pub const MAX_ED_SITES: usize = 12;

/// `H = −Σ J_ij σ^z_i σ^z_j − Γ Σ σ^x_i` at inverse temperature `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingModel {
    pub sites: usize,
    /// `(i, j, J_ij)`.
    pub bonds: Vec<(usize, usize, f64)>,
    pub gamma: f64,
    pub beta: f64,
}

impl IsingModel {
    pub fn new(sites: usize, bonds: Vec<(usize, usize, f64)>, gamma: f64, beta: f64) -> Result<Self> {
        let m = IsingModel {
            sites,
            bonds,
            gamma,
            beta,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites == 0 {
            return invalid("model needs at least one site");
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return invalid(format!("transverse field must be finite and ≥ 0, got {}", self.gamma));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return invalid(format!("β must be finite and positive, got {}", self.beta));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, jij) in &self.bonds {
            if i >= self.sites || j >= self.sites || i == j {
                return invalid(format!("bond ({i},{j}) is not a pair of distinct sites"));
            }
            if !jij.is_finite() {
                return invalid(format!("bond ({i},{j}) has a non-finite coupling"));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return invalid(format!("duplicate bond ({i},{j})"));
            }
        }
        Ok(())
    }

    /// Open chain with uniform coupling.
    pub fn chain(sites: usize, j: f64, gamma: f64, beta: f64) -> Result<Self> {
        let bonds = (0..sites.saturating_sub(1)).map(|i| (i, i + 1, j)).collect();
        IsingModel::new(sites, bonds, gamma, beta)
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        IsingModel { gamma, ..self.clone() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: IsingModel = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// `Σ −J_ij σ_i σ_j` for one classical configuration.
    pub fn diagonal_energy(&self, spins: &[i8]) -> f64 {
        self.bonds
            .iter()
            .map(|&(i, j, jij)| -jij * (spins[i] * spins[j]) as f64)
            .sum()
    }

    /// Neighbour lists `(j, J_ij)` per site.
    pub fn neighbours(&self) -> Vec<Vec<(usize, f64)>> {
        let mut nb = vec![Vec::new(); self.sites];
        for &(i, j, jij) in &self.bonds {
            nb[i].push((j, jij));
            nb[j].push((i, jij));
        }
        nb
    }
}

/// Inter-layer coupling `γ_n` and constant `δ_n` for Trotter number `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrotterCouplings {
    pub n: usize,
    /// `β/n` (the intra-layer coupling is `(β/n) J_ij`).
    pub layer_beta: f64,
    /// `ε = βΓ/n`.
    pub epsilon: f64,
    /// `−½ ln tanh ε`.
    pub gamma_n: f64,
    /// `½ ln(½ sinh 2ε)`.
    pub delta_n: f64,
}

pub fn couplings(model: &IsingModel, n: usize) -> Result<TrotterCouplings> {
    if n == 0 {
        return invalid("Trotter number must be at least 1");
    }
    if model.gamma == 0.0 {
        return Err(Error::FrozenTrotter);
    }
    let eps = model.beta * model.gamma / n as f64;
    Ok(TrotterCouplings {
        n,
        layer_beta: model.beta / n as f64,
        epsilon: eps,
        gamma_n: -0.5 * eps.tanh().ln(),
        delta_n: 0.5 * (0.5 * (2.0 * eps).sinh()).ln(),
    })
}

/// Spins `σ_i^(m)`, periodic in the Trotter index `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldlineConfig {
    sites: usize,
    layers: usize,
    /// Layer-major: `spins[m * sites + i]`.
    spins: Vec<i8>,
}

impl WorldlineConfig {
    pub fn uniform(sites: usize, layers: usize, s: i8) -> Self {
        WorldlineConfig {
            sites,
            layers,
            spins: vec![s; sites * layers],
        }
    }

    pub fn from_spins(sites: usize, layers: usize, spins: Vec<i8>) -> Result<Self> {
        if spins.len() != sites * layers || spins.iter().any(|s| *s != 1 && *s != -1) {
            return invalid("configuration needs sites × layers entries of ±1");
        }
        Ok(WorldlineConfig { sites, layers, spins })
    }

    /// Configuration whose bit `m * sites + i` set means spin down.
    pub fn from_bits(sites: usize, layers: usize, bits: u64) -> Self {
        let spins = (0..sites * layers)
            .map(|k| if bits >> k & 1 == 1 { -1 } else { 1 })
            .collect();
        WorldlineConfig { sites, layers, spins }
    }

    pub fn to_bits(&self) -> u64 {
        self.spins
            .iter()
            .enumerate()
            .fold(0, |b, (k, s)| if *s < 0 { b | 1 << k } else { b })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    /// Trotter index with periodic wrap-around.
    pub fn get(&self, i: usize, m: isize) -> i8 {
        let l = self.layers as isize;
        let m = ((m % l) + l) % l;
        self.spins[m as usize * self.sites + i]
    }

    pub fn flip(&mut self, i: usize, m: usize) {
        self.spins[m * self.sites + i] *= -1;
    }

    pub fn layer(&self, m: usize) -> &[i8] {
        &self.spins[m * self.sites..(m + 1) * self.sites]
    }
}

/// `(β/n) Σ_m Σ_ij J_ij σ_i^(m) σ_j^(m) + γ_n Σ_m Σ_i σ_i^(m) σ_i^(m+1)`,
/// i.e. `−βH_n` without the `δ_n` constant.
pub fn classical_action(model: &IsingModel, c: &TrotterCouplings, config: &WorldlineConfig) -> Result<f64> {
    if config.sites != model.sites || config.layers != c.n {
        return invalid(format!(
            "configuration is {}×{} but the model needs {}×{}",
            config.sites, config.layers, model.sites, c.n
        ));
    }
    let mut intra = 0.0;
    let mut inter = 0i64;
    for m in 0..c.n {
        let layer = config.layer(m);
        intra += model
            .bonds
            .iter()
            .map(|&(i, j, jij)| jij * (layer[i] * layer[j]) as f64)
            .sum::<f64>();
        for i in 0..model.sites {
            inter += (config.get(i, m as isize) * config.get(i, m as isize + 1)) as i64;
        }
    }
    Ok(c.layer_beta * intra + c.gamma_n * inter as f64)
}

/// Change of the action when `σ_i^(m)` is flipped.
pub fn flip_delta(
    model_nb: &[Vec<(usize, f64)>],
    c: &TrotterCouplings,
    config: &WorldlineConfig,
    i: usize,
    m: usize,
) -> f64 {
    let s = config.get(i, m as isize) as f64;
    let field: f64 = model_nb[i]
        .iter()
        .map(|&(j, jij)| jij * config.get(j, m as isize) as f64)
        .sum();
    let trotter = if c.n == 1 {
        0.0
    } else {
        (config.get(i, m as isize - 1) + config.get(i, m as isize + 1)) as f64
    };
    -2.0 * s * (c.layer_beta * field + c.gamma_n * trotter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> IsingModel {
        IsingModel::new(2, vec![(0, 1, 1.0)], 1.0, 1.0).unwrap()
    }

    #[test]
    fn coupling_values() {
        let m = IsingModel::new(1, vec![], 0.5, 1.0).unwrap();
        let c = couplings(&m, 1).unwrap();
        assert!((c.gamma_n - 0.3859684164).abs() < 1e-10);
        for eps in [1e-3, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let c = couplings(&IsingModel::new(1, vec![], eps, 1.0).unwrap(), 1).unwrap();
            assert!(((c.gamma_n + c.delta_n).exp() / eps.cosh() - 1.0).abs() < 1e-14);
            assert!(((-c.gamma_n + c.delta_n).exp() / eps.sinh() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_field_is_frozen() {
        let m = pair().with_gamma(0.0);
        assert!(matches!(couplings(&m, 4), Err(Error::FrozenTrotter)));
    }

    #[test]
    fn layers_lock_as_n_grows() {
        let m = pair();
        let g: Vec<f64> = [1, 10, 100, 1000].iter().map(|n| couplings(&m, *n).unwrap().gamma_n).collect();
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(g[3] > 3.0);
    }

    #[test]
    fn uniform_action() {
        let m = IsingModel::chain(3, 0.7, 1.0, 2.0).unwrap();
        let c = couplings(&m, 4).unwrap();
        let a = classical_action(&m, &c, &WorldlineConfig::uniform(3, 4, 1)).unwrap();
        let expected = c.layer_beta * 4.0 * 1.4 + c.gamma_n * 4.0 * 3.0;
        assert!((a - expected).abs() < 1e-12);
    }

    #[test]
    fn single_site_two_layers() {
        let m = IsingModel::new(1, vec![], 1.0, 1.0).unwrap();
        let c = couplings(&m, 2).unwrap();
        let cfg = WorldlineConfig::from_spins(1, 2, vec![1, -1]).unwrap();
        assert!((classical_action(&m, &c, &cfg).unwrap() + 2.0 * c.gamma_n).abs() < 1e-15);
    }

    #[test]
    fn local_delta_matches_recompute() {
        let m = IsingModel::new(3, vec![(0, 1, 1.0), (1, 2, -0.5), (0, 2, 0.3)], 0.8, 1.5).unwrap();
        let nb = m.neighbours();
        for n in [1, 2, 5] {
            let c = couplings(&m, n).unwrap();
            let mut cfg = WorldlineConfig::from_bits(3, n, 0b1011_0110_1011 & ((1 << (3 * n)) - 1));
            for (i, l) in [(0, 0), (2, n - 1), (1, n / 2)] {
                let before = classical_action(&m, &c, &cfg).unwrap();
                let d = flip_delta(&nb, &c, &cfg, i, l);
                cfg.flip(i, l);
                let after = classical_action(&m, &c, &cfg).unwrap();
                assert!((after - before - d).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn rejects_bad_models() {
        assert!(IsingModel::new(2, vec![(0, 1, 1.0), (1, 0, 2.0)], 1.0, 1.0).is_err());
        assert!(IsingModel::new(2, vec![(0, 2, 1.0)], 1.0, 1.0).is_err());
        assert!(IsingModel::from_json(r#"{"sites":2,"bonds":[[0,1,1.0]],"gamma":1,"beta":1,"extra":0}"#).is_err());
        let m = IsingModel::from_json(r#"{"sites":2,"bonds":[[0,1,1.0]],"gamma":1.0,"beta":2.0}"#).unwrap();
        assert_eq!(m.bonds, vec![(0, 1, 1.0)]);
    }
}
