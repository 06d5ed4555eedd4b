//! Unitary stepping of small dense quantum systems.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::ncalg::Bracket;
use crate::schemes::{Scheme, StageKind};

pub type C64 = Complex<f64>;

/// Tolerance on `‖H − H†‖` and on the eigendecomposition round trip.
pub const HERMITIAN_TOL: f64 = 1e-12;

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// A Hermitian matrix with its cached eigendecomposition.
#[derive(Clone, Debug)]
pub struct HermitianPart {
    matrix: DMatrix<C64>,
    values: DVector<f64>,
    vectors: DMatrix<C64>,
}

impl HermitianPart {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return invalid("Hermitian part must be square");
        }
        let scale = max_abs(&matrix).max(1.0);
        let skew = max_abs(&(&matrix - matrix.adjoint()));
        if skew > HERMITIAN_TOL * scale {
            return Err(Error::Domain(format!("matrix is not Hermitian: ‖H − H†‖ = {skew:e}")));
        }
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let eig = sym.clone().symmetric_eigen();
        let part = HermitianPart {
            matrix: sym,
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        };
        let err = max_abs(&(part.reconstruct() - &part.matrix));
        if err > HERMITIAN_TOL * scale {
            return Err(Error::Domain(format!("eigendecomposition residual {err:e}")));
        }
        Ok(part)
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| C64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    fn reconstruct(&self) -> DMatrix<C64> {
        let d = DMatrix::from_diagonal(&self.values.map(|v| C64::new(v, 0.0)));
        &self.vectors * d * self.vectors.adjoint()
    }

    /// `exp(−i θ H)` through the eigendecomposition; unitary up to rounding.
    pub fn exp_i(&self, theta: f64) -> DMatrix<C64> {
        if theta == 0.0 {
            return DMatrix::identity(self.dim(), self.dim());
        }
        let phases = self.values.map(|v| C64::from_polar(1.0, -theta * v));
        &self.vectors * DMatrix::from_diagonal(&phases) * self.vectors.adjoint()
    }
}

/// Complex state vector. Norms are not renormalised by any stepper.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    pub amp: DVector<C64>,
}

impl QuantumState {
    pub fn new(amp: DVector<C64>) -> Self {
        QuantumState { amp }
    }

    /// Basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amp = DVector::zeros(dim);
        amp[k] = C64::new(1.0, 0.0);
        QuantumState { amp }
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    /// `⟨ψ|H|ψ⟩` without normalisation.
    pub fn expectation(&self, h: &DMatrix<C64>) -> f64 {
        self.amp.dotc(&(h * &self.amp)).re
    }

    /// `|⟨φ|ψ⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        self.amp.dotc(&other.amp).norm_sqr()
    }

    pub fn distance(&self, other: &QuantumState) -> f64 {
        (&self.amp - &other.amp).norm()
    }
}

/// Matrix value of a nested commutator over the given parts.
pub fn bracket_matrix(b: &Bracket, parts: &[&DMatrix<C64>]) -> DMatrix<C64> {
    match b {
        Bracket::Gen(g) => parts[*g].clone(),
        Bracket::Comm(l, r) => {
            let (a, c) = (bracket_matrix(l, parts), bracket_matrix(r, parts));
            &a * &c - &c * &a
        }
    }
}

/// Hermitian generator of a commutator stage.
///
/// With `x = −i dt` the stage `exp(c x^k [..])` equals
/// `exp(−i c dt^k H)` for `H = (−i)^{k−1} [..]`, which is Hermitian for any
/// nested commutator of Hermitian matrices.
pub fn commutator_generator(b: &Bracket, parts: &[&DMatrix<C64>]) -> DMatrix<C64> {
    let k = b.degree() as i32;
    let phase = C64::new(0.0, -1.0).powi(k - 1);
    bracket_matrix(b, parts).map(|z| z * phase)
}

/// Precomputed stage unitaries of a scheme for a fixed step.
#[derive(Clone, Debug)]
pub struct UnitaryStepper {
    /// Stage unitaries in application order (rightmost stage first).
    stages: Vec<DMatrix<C64>>,
    dim: usize,
}

impl UnitaryStepper {
    /// `parts[i]` is the operator of slot `i`.
    pub fn new(scheme: &Scheme, parts: &[HermitianPart], dt: f64) -> Result<Self> {
        if parts.len() != scheme.slots().len() {
            return invalid(format!(
                "scheme has {} slots but {} parts were given",
                scheme.slots().len(),
                parts.len()
            ));
        }
        let dim = parts[0].dim();
        if parts.iter().any(|p| p.dim() != dim) {
            return invalid("parts have different dimensions");
        }
        let mats: Vec<&DMatrix<C64>> = parts.iter().map(|p| p.matrix()).collect();
        let mut stages = Vec::with_capacity(scheme.stages().len());
        for stage in scheme.stages().iter().rev() {
            let c = stage.coeff.value();
            let u = match &stage.kind {
                StageKind::Slot(i) => parts[*i].exp_i(c * dt),
                StageKind::Commutator(spec) => {
                    let h = HermitianPart::new(commutator_generator(&spec.bracket, &mats))?;
                    h.exp_i(c * dt.powi(spec.x_power as i32))
                }
            };
            stages.push(u);
        }
        Ok(UnitaryStepper { stages, dim })
    }

    pub fn step(&self, psi: &mut QuantumState) -> Result<()> {
        if psi.dim() != self.dim {
            return invalid(format!("state dimension {} differs from {}", psi.dim(), self.dim));
        }
        for u in &self.stages {
            psi.amp = u * &psi.amp;
        }
        Ok(())
    }

    /// One-step propagator as a single matrix.
    pub fn matrix(&self) -> DMatrix<C64> {
        self.stages
            .iter()
            .fold(DMatrix::identity(self.dim, self.dim), |acc, u| u * acc)
    }
}

/// Applies one step of `scheme` to `psi`, stage exponentials right to left.
pub fn unitary_step(scheme: &Scheme, parts: &[HermitianPart], dt: f64, psi: &QuantumState) -> Result<QuantumState> {
    let mut out = psi.clone();
    UnitaryStepper::new(scheme, parts, dt)?.step(&mut out)?;
    Ok(out)
}

/// `ψ ← (I − i dt H) ψ`, the first-order Taylor step, which is not unitary.
pub fn perturbative_step(h: &DMatrix<C64>, dt: f64, psi: &QuantumState) -> Result<QuantumState> {
    if h.ncols() != psi.dim() {
        return invalid("Hamiltonian and state dimensions differ");
    }
    let hpsi = h * &psi.amp;
    Ok(QuantumState::new(&psi.amp - hpsi.map(|z| z * C64::new(0.0, dt))))
}

/// Exact `exp(−i t H) ψ` by eigendecomposition.
pub fn exact_evolution(h: &HermitianPart, t: f64, psi: &QuantumState) -> QuantumState {
    QuantumState::new(h.exp_i(t) * &psi.amp)
}

/// The spin in a longitudinal plus transverse field: `A = σ_z`, `B = Γ σ_x`.
#[derive(Clone, Debug)]
pub struct SpinSystem {
    pub gamma: f64,
    pub a: HermitianPart,
    pub b: HermitianPart,
    pub h: HermitianPart,
}

pub fn sigma_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]).map(|x| C64::new(x, 0.0))
}

pub fn sigma_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]).map(|x| C64::new(x, 0.0))
}

impl SpinSystem {
    pub fn new(gamma: f64) -> Self {
        let a = sigma_z();
        let b = sigma_x().map(|z| z * gamma);
        let h = &a + &b;
        SpinSystem {
            gamma,
            a: HermitianPart::new(a).expect("σ_z is Hermitian"),
            b: HermitianPart::new(b).expect("Γσ_x is Hermitian"),
            h: HermitianPart::new(h).expect("sum is Hermitian"),
        }
    }

    pub fn parts(&self) -> Vec<HermitianPart> {
        vec![self.a.clone(), self.b.clone()]
    }

    /// Period `π / √(1+Γ²)` of the precession.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI / (1.0 + self.gamma * self.gamma).sqrt()
    }

    /// The up spin, with `⟨H⟩ = 1`.
    pub fn initial_state() -> QuantumState {
        QuantumState::basis(2, 0)
    }
}
