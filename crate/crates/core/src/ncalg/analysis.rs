//! Matrix-level operator-differential utilities.
//!
//! `δ_A` denotes the inner derivation `X ↦ [A, X]`. These routines evaluate
//! the identities of operator calculus on concrete matrices; they are used to
//! cross-check the exact series algebra and by the propagators.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};

/// Matrix exponential (scaling and squaring with Padé approximation).
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().exp()
}

/// `[A, X] = A X − X A`.
pub fn inner_derivation(a: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    a * x - x * a
}

/// `δ_A^k X`.
pub fn derivation_power(a: &DMatrix<f64>, x: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    (0..k).fold(x.clone(), |acc, _| inner_derivation(a, &acc))
}

/// `Σ_{k=0}^{kmax} t^k δ_A^k B / k!`, the series form of `e^{tA} B e^{−tA}`.
pub fn conjugation_series(a: &DMatrix<f64>, b: &DMatrix<f64>, t: f64, kmax: usize) -> DMatrix<f64> {
    let mut term = b.clone();
    let mut sum = b.clone();
    for k in 1..=kmax {
        term = inner_derivation(a, &term) * (t / k as f64);
        sum += &term;
    }
    sum
}

/// `e^{δ_A} C` evaluated as the derivation series truncated at `kmax`.
pub fn exp_derivation(a: &DMatrix<f64>, c: &DMatrix<f64>, kmax: usize) -> DMatrix<f64> {
    conjugation_series(a, c, 1.0, kmax)
}

/// `(A − δ_A)^n X` expanded binomially into nested commutators,
/// `Σ_k C(n,k) (−1)^k A^{n−k} δ_A^k X`. Since `A − δ_A` is right
/// multiplication by `A`, this equals `X Aⁿ`.
pub fn right_power_via_derivations(a: &DMatrix<f64>, x: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let dim = a.nrows();
    let mut sum = DMatrix::zeros(dim, dim);
    let mut binom = 1.0;
    let mut derived = x.clone();
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += a.pow((n - k) as u32) * &derived * (sign * binom);
        derived = inner_derivation(a, &derived);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    sum
}

/// `δ_{Aⁿ} X = Aⁿ X − (A − δ_A)ⁿ X`.
pub fn power_derivation(a: &DMatrix<f64>, x: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    a.pow(n as u32) * x - right_power_via_derivations(a, x, n)
}

/// Polynomial `Σ c_k A^k`.
pub fn matrix_polynomial(a: &DMatrix<f64>, coeffs: &[f64]) -> DMatrix<f64> {
    let dim = a.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for &c in coeffs.iter().rev() {
        out = out * a + DMatrix::identity(dim, dim) * c;
    }
    out
}

/// Directional derivative of the matrix exponential,
/// `lim_{h→0} (exp(A + h dA) − exp(A)) / h`.
///
/// Computed as the upper-right block of `exp([[A, dA], [0, A]])`.
pub fn frechet_exp(a: &DMatrix<f64>, da: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n || da.nrows() != n || da.ncols() != n {
        return invalid(format!(
            "frechet_exp needs equal square matrices, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            da.nrows(),
            da.ncols()
        ));
    }
    let mut block = DMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((n, n), (n, n)).copy_from(a);
    block.view_mut((0, n), (n, n)).copy_from(da);
    let e = block.exp();
    Ok(e.view((0, n), (n, n)).into_owned())
}

/// `Σ_{n=1}^{nmax} (1/n!) Σ_{j=1}^{n} A^{j−1} dA A^{n−j}`, the Taylor-series
/// form of the exponential's differential.
pub fn frechet_exp_series(a: &DMatrix<f64>, da: &DMatrix<f64>, nmax: usize) -> DMatrix<f64> {
    let dim = a.nrows();
    let powers: Vec<DMatrix<f64>> = (0..nmax).map(|k| a.pow(k as u32)).collect();
    let mut sum = DMatrix::zeros(dim, dim);
    let mut factorial = 1.0;
    for n in 1..=nmax {
        factorial *= n as f64;
        let mut inner = DMatrix::zeros(dim, dim);
        for j in 1..=n {
            inner += &powers[j - 1] * da * &powers[n - j];
        }
        sum += inner / factorial;
    }
    sum
}

/// Logarithm of a matrix close to the identity by the Mercator series; the
/// caller guarantees `‖M − I‖ < 1`.
pub fn log_near_identity(m: &DMatrix<f64>, terms: usize) -> DMatrix<f64> {
    let dim = m.nrows();
    let n = m - DMatrix::identity(dim, dim);
    let mut power = n.clone();
    let mut sum = n.clone();
    for k in 2..=terms {
        power = &power * &n;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        sum += &power * (sign / k as f64);
    }
    sum
}
