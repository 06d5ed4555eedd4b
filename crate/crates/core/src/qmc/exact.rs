//! Exact references: exhaustive world-line sums, the direct transfer-matrix
//! trace and dense diagonalisation of the quantum Hamiltonian.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::metropolis::sigma_x_estimate;
use super::model::{couplings, IsingModel, MAX_ED_SITES};
use crate::error::{invalid, Error, Result};

/// Largest `N·n` for exhaustive enumeration.
pub const MAX_ENUM_SPINS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrotterNumber {
    Finite(usize),
    Infinite,
}

impl std::str::FromStr for TrotterNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinite" | "∞" => Ok(TrotterNumber::Infinite),
            t => t
                .parse::<usize>()
                .map(TrotterNumber::Finite)
                .map_err(|_| Error::Parse(format!("Trotter number '{t}'"))),
        }
    }
}

/// Thermal averages, named as in the Monte Carlo output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactObservables {
    pub trotter: TrotterNumber,
    /// `ln Z` (for finite `n` the mapped partition function including `δ_n`).
    pub ln_z: f64,
    pub values: BTreeMap<String, f64>,
}

impl ExactObservables {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn zz(&self, i: usize, j: usize) -> Option<f64> {
        self.get(&format!("zz_{i}_{j}")).or_else(|| self.get(&format!("zz_{j}_{i}")))
    }
}

pub fn exact_reference(model: &IsingModel, n: TrotterNumber) -> Result<ExactObservables> {
    match n {
        TrotterNumber::Finite(n) => enumerate(model, n),
        TrotterNumber::Infinite => diagonalize(model),
    }
}

#[inline]
fn spin(bits: u64, k: usize) -> i32 {
    1 - 2 * (bits >> k & 1) as i32
}

/// Sums all `2^{N·n}` world-line configurations.
pub fn enumerate(model: &IsingModel, n: usize) -> Result<ExactObservables> {
    model.validate()?;
    let c = couplings(model, n)?;
    let sites = model.sites;
    if sites * n > MAX_ENUM_SPINS {
        return Err(Error::Resource(format!(
            "enumeration of N·n = {} spins exceeds the cap of {MAX_ENUM_SPINS}",
            sites * n
        )));
    }
    let nb = model.bonds.len();
    // zz per bond, magnetization, magnetization², trotter correlator
    let mut sums = vec![0.0; nb + 3];
    let mut obs = vec![0.0; nb + 3];
    let mut weight = 0.0;
    let mut shift = f64::NEG_INFINITY;
    for bits in 0u64..1 << (sites * n) {
        obs.iter_mut().for_each(|v| *v = 0.0);
        let mut intra = 0.0;
        let mut inter = 0i32;
        for m in 0..n {
            let base = m * sites;
            let next = ((m + 1) % n) * sites;
            let mut mag = 0i32;
            for (b, &(i, j, jij)) in model.bonds.iter().enumerate() {
                let ss = spin(bits, base + i) * spin(bits, base + j);
                intra += jij * ss as f64;
                obs[b] += ss as f64;
            }
            let mut corr = 0i32;
            for i in 0..sites {
                mag += spin(bits, base + i);
                corr += spin(bits, base + i) * spin(bits, next + i);
            }
            inter += corr;
            let mag = mag as f64 / sites as f64;
            obs[nb] += mag;
            obs[nb + 1] += mag * mag;
            obs[nb + 2] += corr as f64 / sites as f64;
        }
        let action = c.layer_beta * intra + c.gamma_n * inter as f64;
        if action > shift {
            let r = (shift - action).exp();
            weight *= r;
            sums.iter_mut().for_each(|s| *s *= r);
            shift = action;
        }
        let w = (action - shift).exp();
        weight += w;
        for (s, o) in sums.iter_mut().zip(&obs) {
            *s += w * o / n as f64;
        }
    }
    let mean: Vec<f64> = sums.iter().map(|s| s / weight).collect();
    let mut values = BTreeMap::new();
    for (b, &(i, j, _)) in model.bonds.iter().enumerate() {
        values.insert(format!("zz_{i}_{j}"), mean[b]);
    }
    values.insert("magnetization".into(), mean[nb]);
    values.insert("magnetization_sq".into(), mean[nb + 1]);
    values.insert("trotter_corr".into(), mean[nb + 2]);
    values.insert("diagonal_energy".into(), diagonal(model, &mean[..nb]));
    values.insert("sigma_x".into(), sigma_x_estimate(&c, mean[nb + 2]));
    Ok(ExactObservables {
        trotter: TrotterNumber::Finite(n),
        ln_z: (n * sites) as f64 * c.delta_n + shift + weight.ln(),
        values,
    })
}

fn diagonal(model: &IsingModel, zz: &[f64]) -> f64 {
    model.bonds.iter().zip(zz).map(|(&(_, _, j), v)| -j * v).sum()
}

fn check_ed_size(model: &IsingModel) -> Result<()> {
    if model.sites > MAX_ED_SITES {
        return Err(Error::Resource(format!(
            "dense matrices for {} sites exceed the cap of {MAX_ED_SITES}",
            model.sites
        )));
    }
    Ok(())
}

/// `Σ −J σσ` on every basis state; bit `i` set means spin `i` down.
fn diagonal_part(model: &IsingModel) -> Vec<f64> {
    (0u64..1 << model.sites)
        .map(|s| {
            model
                .bonds
                .iter()
                .map(|&(i, j, jij)| -jij * (spin(s, i) * spin(s, j)) as f64)
                .sum()
        })
        .collect()
}

/// `ln Tr (e^{−βA/n} e^{−βB/n})^n` from explicit `2^N × 2^N` matrices.
pub fn trotter_trace(model: &IsingModel, n: usize) -> Result<f64> {
    model.validate()?;
    check_ed_size(model)?;
    if n == 0 {
        return invalid("Trotter number must be at least 1");
    }
    let dim = 1usize << model.sites;
    let tau = model.beta / n as f64;
    let (ch, sh) = ((tau * model.gamma).cosh(), (tau * model.gamma).sinh());
    let diag = diagonal_part(model);
    let transfer = DMatrix::from_fn(dim, dim, |r, c| {
        let flips = (r ^ c).count_ones() as i32;
        (-tau * diag[r]).exp() * sh.powi(flips) * ch.powi(model.sites as i32 - flips)
    });
    let mut acc = DMatrix::<f64>::identity(dim, dim);
    let mut log_scale = 0.0;
    for _ in 0..n {
        acc = &acc * &transfer;
        let norm = acc.amax();
        acc /= norm;
        log_scale += norm.ln();
    }
    Ok(acc.trace().ln() + log_scale)
}

/// The quantum Hamiltonian `−Σ J σ^zσ^z − Γ Σ σ^x` as a dense matrix.
pub fn hamiltonian(model: &IsingModel) -> Result<DMatrix<f64>> {
    check_ed_size(model)?;
    let dim = 1usize << model.sites;
    let diag = diagonal_part(model);
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    for s in 0..dim {
        for i in 0..model.sites {
            h[(s ^ 1 << i, s)] -= model.gamma;
        }
    }
    Ok(h)
}

/// Thermal averages at `β` from the full spectrum.
pub fn diagonalize(model: &IsingModel) -> Result<ExactObservables> {
    model.validate()?;
    let h = hamiltonian(model)?;
    let dim = h.nrows();
    let sites = model.sites;
    let eig = h.symmetric_eigen();
    let e0 = eig.eigenvalues.min();
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|e| (-model.beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let nb = model.bonds.len();
    let mut zz = vec![0.0; nb];
    let (mut mag, mut mag2, mut sx) = (0.0, 0.0, 0.0);
    for (k, w) in weights.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        for s in 0..dim {
            let p = v[s] * v[s] * w;
            let total: i32 = (0..sites).map(|i| spin(s as u64, i)).sum();
            let m = total as f64 / sites as f64;
            mag += p * m;
            mag2 += p * m * m;
            for (b, &(i, j, _)) in model.bonds.iter().enumerate() {
                zz[b] += p * (spin(s as u64, i) * spin(s as u64, j)) as f64;
            }
            for i in 0..sites {
                sx += w * v[s] * v[s ^ 1 << i];
            }
        }
    }
    let zz: Vec<f64> = zz.iter().map(|x| x / z).collect();
    let mut values = BTreeMap::new();
    for (b, &(i, j, _)) in model.bonds.iter().enumerate() {
        values.insert(format!("zz_{i}_{j}"), zz[b]);
    }
    values.insert("magnetization".into(), mag / z);
    values.insert("magnetization_sq".into(), mag2 / z);
    values.insert("diagonal_energy".into(), diagonal(model, &zz));
    values.insert("sigma_x".into(), sx / (z * sites as f64));
    Ok(ExactObservables {
        trotter: TrotterNumber::Infinite,
        ln_z: z.ln() - model.beta * e0,
        values,
    })
}

/// Lowest diagonal energy `Σ −J σσ` over all `2^N` classical states.
pub fn classical_ground_energy(model: &IsingModel) -> Result<f64> {
    if model.sites > MAX_ENUM_SPINS {
        return Err(Error::Resource(format!("{} sites exceed the enumeration cap", model.sites)));
    }
    Ok(diagonal_part(model).into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> IsingModel {
        IsingModel::new(2, vec![(0, 1, 1.0)], 1.0, 1.0).unwrap()
    }

    #[test]
    fn single_spin_in_field() {
        let m = IsingModel::new(1, vec![], 1.0, 1.0).unwrap();
        let e = diagonalize(&m).unwrap();
        assert!((e.get("sigma_x").unwrap() - 0.7615941559557649).abs() < 1e-15);
        assert!((e.ln_z - (2.0 * 1f64.cosh()).ln()).abs() < 1e-14);
        // a lone spin has no Trotter error
        for n in [1, 2, 5] {
            let f = enumerate(&m, n).unwrap();
            assert!((f.get("sigma_x").unwrap() - 1f64.tanh()).abs() < 1e-13, "n={n}");
            assert!((f.ln_z - e.ln_z).abs() < 1e-13);
        }
    }

    #[test]
    fn enumeration_matches_trace() {
        let models = [
            IsingModel::new(1, vec![], 0.8, 1.3).unwrap(),
            pair(),
            IsingModel::new(2, vec![(0, 1, -0.6)], 0.4, 2.5).unwrap(),
        ];
        for m in &models {
            for n in 1..=6 {
                let a = enumerate(m, n).unwrap().ln_z;
                let b = trotter_trace(m, n).unwrap();
                assert!(((a - b) / b).abs() < 1e-12 || (a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn finite_n_approaches_diagonalization() {
        let m = pair();
        let exact = diagonalize(&m).unwrap().zz(0, 1).unwrap();
        let errs: Vec<f64> = [2, 4, 8]
            .iter()
            .map(|n| (enumerate(&m, *n).unwrap().zz(0, 1).unwrap() - exact).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn caps() {
        let m = IsingModel::chain(13, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(diagonalize(&m), Err(Error::Resource(_))));
        assert!(matches!(enumerate(&pair(), 13), Err(Error::Resource(_))));
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let m = IsingModel::new(3, vec![(0, 1, 1.0), (1, 2, -0.5)], 0.7, 1.0).unwrap();
        let h = hamiltonian(&m).unwrap();
        assert_eq!(h, h.transpose());
        assert_eq!(classical_ground_energy(&m).unwrap(), -1.5);
    }

    #[test]
    fn parse_trotter_number() {
        assert_eq!("16".parse::<TrotterNumber>().unwrap(), TrotterNumber::Finite(16));
        assert_eq!("inf".parse::<TrotterNumber>().unwrap(), TrotterNumber::Infinite);
        assert!("x".parse::<TrotterNumber>().is_err());
    }
}
