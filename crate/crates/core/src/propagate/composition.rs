//! First-order coefficient of a weak transverse field in a symmetric product.

use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// Step of the central difference in `γ`.
pub const GAMMA_STEP: f64 = 1e-6;

/// Largest `|x|` accepted: beyond it the small eigenvalue `≈ e^{−|x|}` of the
/// product is lost to rounding relative to the large one and the logarithm is
/// meaningless.
pub const MAX_ABS_X: f64 = 12.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompositionRow {
    pub x: f64,
    /// `x coth x` (1 at `x = 0`).
    pub analytic: f64,
    /// Extracted from the matrix logarithm.
    pub numeric: f64,
}

pub fn x_coth_x(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + x * x / 3.0
    } else {
        x / x.tanh()
    }
}

fn sym_exp(h: &Matrix2<f64>) -> Matrix2<f64> {
    let e = h.symmetric_eigen();
    e.eigenvectors * Matrix2::from_diagonal(&e.eigenvalues.map(f64::exp)) * e.eigenvectors.transpose()
}

/// `Φ(x, γ) = log(e^{xγσ_x/2} e^{xσ_z} e^{xγσ_x/2})`.
///
/// The product is real symmetric positive definite, so its principal
/// logarithm comes from the symmetric eigendecomposition.
pub fn phi(x: f64, gamma: f64) -> Result<Matrix2<f64>> {
    if !x.is_finite() || x.abs() > MAX_ABS_X {
        return Err(Error::Branch(format!(
            "x = {x} is outside |x| ≤ {MAX_ABS_X}; the product's eigenvalues e^(±x) are not both resolvable, reduce x"
        )));
    }
    let sx = Matrix2::new(0.0, 1.0, 1.0, 0.0);
    let sz = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let side = sym_exp(&(sx * (0.5 * x * gamma)));
    let m = side * sym_exp(&(sz * x)) * side;
    let m = (m + m.transpose()) * 0.5;
    let e = m.symmetric_eigen();
    if e.eigenvalues.iter().any(|v| *v <= 0.0) {
        return Err(Error::Branch("product has a non-positive eigenvalue; reduce x".into()));
    }
    Ok(e.eigenvectors * Matrix2::from_diagonal(&e.eigenvalues.map(f64::ln)) * e.eigenvectors.transpose())
}

/// Table of `x coth x` next to the coefficient extracted as the `σ_x`
/// component of `∂Φ/∂γ` at `γ = 0`, divided by `x`.
pub fn perturbational_composition(xs: &[f64]) -> Result<Vec<CompositionRow>> {
    xs.iter()
        .map(|&x| {
            let numeric = if x == 0.0 {
                1.0
            } else {
                let d = (phi(x, GAMMA_STEP)? - phi(x, -GAMMA_STEP)?) / (2.0 * GAMMA_STEP);
                0.5 * (d[(0, 1)] + d[(1, 0)]) / x
            };
            Ok(CompositionRow {
                x,
                analytic: x_coth_x(x),
                numeric,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coth_one() {
        let r = perturbational_composition(&[1.0]).unwrap()[0];
        assert!((r.analytic - 1.3130352854993312).abs() < 1e-15);
        assert!((r.numeric - r.analytic).abs() < 1e-6);
    }

    #[test]
    fn small_x_limit() {
        let rows = perturbational_composition(&[0.0, 1e-3]).unwrap();
        assert_eq!(rows[0].numeric, 1.0);
        assert!((rows[1].numeric - 1.0).abs() < 1e-5);
    }

    #[test]
    fn large_x_is_rejected() {
        assert!(matches!(phi(50.0, 0.0), Err(Error::Branch(_))));
    }

    #[test]
    fn zero_field_is_diagonal() {
        let p = phi(0.7, 0.0).unwrap();
        assert!((p[(0, 0)] - 0.7).abs() < 1e-14 && p[(0, 1)].abs() < 1e-14);
    }
}
