//! Fits of finite-Trotter-number data to `c₀ + c₁/n + c₂/n²`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::metropolis::{metropolis_stream, RunStats};
use super::model::IsingModel;
use crate::error::{invalid, Result};

/// Relative singular-value cutoff below which the fit is reported singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrotterPoint {
    pub n: usize,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtrapolationFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Standard error of `c₀` propagated from the point errors.
    pub c0_stderr: f64,
    /// `value − fit` per point.
    pub residuals: Vec<f64>,
    /// 1 if the `c₁/n` term outweighs `c₂/n²` at the smallest `n`, else 2.
    pub dominant_power: u32,
    pub singular: bool,
    pub points: Vec<TrotterPoint>,
}

/// Least squares, weighted by `1/σ²` when every point carries an error.
pub fn fit_trotter(points: &[TrotterPoint]) -> Result<ExtrapolationFit> {
    if points.len() < 3 {
        return invalid(format!("extrapolation needs at least 3 Trotter numbers, got {}", points.len()));
    }
    let mut ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return invalid("Trotter numbers in an extrapolation must be distinct");
    }
    if ns[0] == 0 {
        return invalid("Trotter numbers must be at least 1");
    }
    let weighted = points.iter().all(|p| p.stderr > 0.0);
    let w: Vec<f64> = points.iter().map(|p| if weighted { 1.0 / p.stderr } else { 1.0 }).collect();
    let k = points.len();
    let x = DMatrix::from_fn(k, 3, |r, c| w[r] * (points[r].n as f64).powi(-(c as i32)));
    let y = DVector::from_fn(k, |r, _| w[r] * points[r].value);
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let singular = svd.singular_values.iter().any(|s| *s <= SINGULAR_RCOND * smax);
    if singular {
        return Ok(ExtrapolationFit {
            c0: f64::NAN,
            c1: f64::NAN,
            c2: f64::NAN,
            c0_stderr: f64::NAN,
            residuals: vec![f64::NAN; k],
            dominant_power: 0,
            singular,
            points: points.to_vec(),
        });
    }
    // c = L y with L the pseudo-inverse; var(c₀) = Σ (L₀ᵣ w_r σ_r)²
    let pinv = svd.pseudo_inverse(0.0).expect("svd with vectors");
    let c = &pinv * &y;
    let c0_var: f64 = (0..k).map(|r| (pinv[(0, r)] * w[r] * points[r].stderr).powi(2)).sum();
    let residuals = points
        .iter()
        .map(|p| {
            let n = p.n as f64;
            p.value - (c[0] + c[1] / n + c[2] / (n * n))
        })
        .collect();
    let nmin = ns[0] as f64;
    let dominant_power = if (c[1] / nmin).abs() >= (c[2] / (nmin * nmin)).abs() { 1 } else { 2 };
    Ok(ExtrapolationFit {
        c0: c[0],
        c1: c[1],
        c2: c[2],
        c0_stderr: c0_var.sqrt(),
        residuals,
        dominant_power,
        singular,
        points: points.to_vec(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Extrapolation {
    pub fits: BTreeMap<String, ExtrapolationFit>,
    pub runs: Vec<RunStats>,
}

/// Runs one chain per Trotter number (stream = position in `n_list`) and
/// extrapolates every observable except the action.
pub fn trotter_extrapolate(
    model: &IsingModel,
    n_list: &[usize],
    sweeps: usize,
    therm: usize,
    seed: u64,
) -> Result<Extrapolation> {
    let dummy: Vec<TrotterPoint> = n_list
        .iter()
        .map(|n| TrotterPoint {
            n: *n,
            value: 0.0,
            stderr: 0.0,
        })
        .collect();
    fit_trotter(&dummy)?;
    let runs: Vec<Result<RunStats>> = std::thread::scope(|scope| {
        let handles: Vec<_> = n_list
            .iter()
            .enumerate()
            .map(|(k, n)| scope.spawn(move || metropolis_stream(model, *n, sweeps, therm, seed, k as u64)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("chain thread")).collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut fits = BTreeMap::new();
    for name in runs[0].observables.keys().filter(|k| *k != "action") {
        let points: Vec<TrotterPoint> = runs
            .iter()
            .map(|r| TrotterPoint {
                n: r.n,
                value: r.observables[name].mean,
                stderr: r.observables[name].stderr,
            })
            .collect();
        fits.insert(name.clone(), fit_trotter(&points)?);
    }
    Ok(Extrapolation { fits, runs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmc::exact::{diagonalize, enumerate};

    #[test]
    fn recovers_quadratic() {
        let pts: Vec<TrotterPoint> = [2, 3, 5, 9]
            .iter()
            .map(|n| {
                let x = 1.0 / *n as f64;
                TrotterPoint {
                    n: *n,
                    value: 0.25 - 0.5 * x + 2.0 * x * x,
                    stderr: 0.0,
                }
            })
            .collect();
        let f = fit_trotter(&pts).unwrap();
        assert!((f.c0 - 0.25).abs() < 1e-12 && (f.c1 + 0.5).abs() < 1e-11 && (f.c2 - 2.0).abs() < 1e-10);
        assert_eq!(f.dominant_power, 2);
        assert_eq!(f.c0_stderr, 0.0);
    }

    #[test]
    fn rejects_bad_lists() {
        let p = |n| TrotterPoint { n, value: 1.0, stderr: 0.1 };
        assert!(fit_trotter(&[p(2), p(4)]).is_err());
        assert!(fit_trotter(&[p(2), p(4), p(4)]).is_err());
    }

    #[test]
    fn exact_values_extrapolate_to_diagonalization() {
        let m = IsingModel::new(2, vec![(0, 1, 1.0)], 1.0, 1.0).unwrap();
        let pts: Vec<TrotterPoint> = [8, 10, 12]
            .iter()
            .map(|n| TrotterPoint {
                n: *n,
                value: enumerate(&m, *n).unwrap().zz(0, 1).unwrap(),
                stderr: 0.0,
            })
            .collect();
        let f = fit_trotter(&pts).unwrap();
        let exact = diagonalize(&m).unwrap().zz(0, 1).unwrap();
        assert!((f.c0 - exact).abs() < 1e-4, "{} vs {exact}", f.c0);
        assert_eq!(f.dominant_power, 2);
    }
}
