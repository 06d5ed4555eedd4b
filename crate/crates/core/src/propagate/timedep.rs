//! Time-ordered stepping through schemes with a shift-time slot.

use nalgebra::DMatrix;

use super::quantum::{commutator_generator, HermitianPart, QuantumState, C64};
use crate::error::{invalid, Result};
use crate::schemes::{evaluation_times, Scheme, StageKind};

type PartFn = Box<dyn Fn(f64) -> DMatrix<C64> + Send + Sync>;

/// `A(t)` and `B(t)` as matrix-valued functions of time.
pub struct TimeDependentParts {
    parts: Vec<PartFn>,
    dim: usize,
}

impl TimeDependentParts {
    pub fn new(dim: usize, a: PartFn, b: PartFn) -> Self {
        TimeDependentParts { parts: vec![a, b], dim }
    }

    /// Parts that do not depend on time.
    pub fn constant(a: DMatrix<C64>, b: DMatrix<C64>) -> Self {
        let dim = a.nrows();
        TimeDependentParts::new(dim, Box::new(move |_| a.clone()), Box::new(move |_| b.clone()))
    }

    /// `A(t) = σ_z`, `B(t) = ω cos(t) σ_x`.
    pub fn driven_two_level(omega: f64) -> Self {
        use super::quantum::{sigma_x, sigma_z};
        TimeDependentParts::new(
            2,
            Box::new(|_| sigma_z()),
            Box::new(move |t| sigma_x().map(|z| z * (omega * t.cos()))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, slot: usize, t: f64) -> DMatrix<C64> {
        (self.parts[slot])(t)
    }
}

/// One step from `t` to `t + dt` of a scheme over slots `A`, `B`, `T`.
///
/// Stage operators are evaluated at the times given by
/// [`evaluation_times`] and applied right to left. A sampled part that is
/// not Hermitian is a domain error.
pub fn timeordered_step(
    scheme: &Scheme,
    parts: &TimeDependentParts,
    t: f64,
    dt: f64,
    psi: &QuantumState,
) -> Result<QuantumState> {
    let labels = scheme.slots();
    let (Some(a), Some(b)) = (scheme.slot_index("A"), scheme.slot_index("B")) else {
        return invalid("time-ordered scheme needs slots A and B");
    };
    if labels.len() != 3 || scheme.slot_index("T").is_none() {
        return invalid("time-ordered scheme needs exactly the slots A, B and T");
    }
    if psi.dim() != parts.dim() {
        return invalid("state and parts have different dimensions");
    }
    let part_of = |slot: usize| if slot == a { 0 } else { 1 };
    let mut out = psi.clone();
    for ts in evaluation_times(scheme, t, dt)? {
        let c = ts.stage.coeff.value();
        let u = match &ts.stage.kind {
            StageKind::Slot(i) => {
                let h = HermitianPart::new(parts.at(part_of(*i), ts.time))?;
                h.exp_i(c * dt)
            }
            StageKind::Commutator(spec) => {
                // Brackets are written over the scheme's slots; only A and B
                // may appear.
                let ma = parts.at(0, ts.time);
                let mb = parts.at(1, ts.time);
                let zero = DMatrix::zeros(parts.dim(), parts.dim());
                let mut by_slot = vec![&zero; labels.len()];
                by_slot[a] = &ma;
                by_slot[b] = &mb;
                let h = HermitianPart::new(commutator_generator(&spec.bracket, &by_slot))?;
                h.exp_i(c * dt.powi(spec.x_power as i32))
            }
        };
        out.amp = u * &out.amp;
    }
    Ok(out)
}

/// Steps `n` times from `t0`.
pub fn timeordered_run(
    scheme: &Scheme,
    parts: &TimeDependentParts,
    t0: f64,
    dt: f64,
    n: usize,
    psi: &QuantumState,
) -> Result<QuantumState> {
    let mut out = psi.clone();
    for k in 0..n {
        out = timeordered_step(scheme, parts, t0 + k as f64 * dt, dt, &out)?;
    }
    Ok(out)
}
