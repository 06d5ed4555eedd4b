//! Splitting integrators for separable Hamiltonians `H = K(p) + V(q)`.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::fmt::f64_17;
use crate::schemes::{Scheme, StageKind};

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl PhasePoint {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Self {
        PhasePoint { p, q }
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().chain(&self.q).all(|v| v.is_finite())
    }

    fn flat(&self) -> Vec<f64> {
        self.p.iter().chain(&self.q).copied().collect()
    }

    fn from_flat(v: &[f64]) -> Self {
        let d = v.len() / 2;
        PhasePoint::new(v[..d].to_vec(), v[d..].to_vec())
    }
}

pub trait SeparableHamiltonian {
    fn dim(&self) -> usize;
    fn kinetic(&self, p: &[f64]) -> f64;
    fn potential(&self, q: &[f64]) -> f64;
    fn grad_kinetic(&self, p: &[f64]) -> Vec<f64>;
    fn grad_potential(&self, q: &[f64]) -> Vec<f64>;

    fn energy(&self, x: &PhasePoint) -> f64 {
        self.kinetic(&x.p) + self.potential(&x.q)
    }
}

/// `K = p²/2`, `V = q²/2` in one dimension.
#[derive(Clone, Copy, Debug, Default)]
pub struct HarmonicOscillator;

impl SeparableHamiltonian for HarmonicOscillator {
    fn dim(&self) -> usize {
        1
    }
    fn kinetic(&self, p: &[f64]) -> f64 {
        0.5 * p[0] * p[0]
    }
    fn potential(&self, q: &[f64]) -> f64 {
        0.5 * q[0] * q[0]
    }
    fn grad_kinetic(&self, p: &[f64]) -> Vec<f64> {
        vec![p[0]]
    }
    fn grad_potential(&self, q: &[f64]) -> Vec<f64> {
        vec![q[0]]
    }
}

/// `K = (p₁² + p₂²)/2`, `V = q₁² q₂² / 2`: a chaotic system whose
/// equipotentials are the hyperbolas `|q₁ q₂| = const`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Umeno;

impl SeparableHamiltonian for Umeno {
    fn dim(&self) -> usize {
        2
    }
    fn kinetic(&self, p: &[f64]) -> f64 {
        0.5 * (p[0] * p[0] + p[1] * p[1])
    }
    fn potential(&self, q: &[f64]) -> f64 {
        0.5 * q[0] * q[0] * q[1] * q[1]
    }
    fn grad_kinetic(&self, p: &[f64]) -> Vec<f64> {
        p.to_vec()
    }
    fn grad_potential(&self, q: &[f64]) -> Vec<f64> {
        vec![q[0] * q[1] * q[1], q[0] * q[0] * q[1]]
    }
}

/// `q ← q + dt ∇K(p)`; exact flow of `K`.
pub fn drift(h: &dyn SeparableHamiltonian, dt: f64, x: &mut PhasePoint) {
    for (q, g) in x.q.iter_mut().zip(h.grad_kinetic(&x.p)) {
        *q += dt * g;
    }
}

/// `p ← p − dt ∇V(q)`; exact flow of `V`.
pub fn kick(h: &dyn SeparableHamiltonian, dt: f64, x: &mut PhasePoint) {
    for (p, g) in x.p.iter_mut().zip(h.grad_potential(&x.q)) {
        *p -= dt * g;
    }
}

/// Which scheme slot drives the kinetic flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SlotMap {
    /// Slot 0 (`A`) is the drift, slot 1 (`B`) the kick.
    #[default]
    KineticFirst,
    /// Slot 0 (`A`) is the kick, slot 1 (`B`) the drift.
    PotentialFirst,
}

impl SlotMap {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "kinetic-first" | "A=kinetic" => Ok(SlotMap::KineticFirst),
            "potential-first" | "A=potential" => Ok(SlotMap::PotentialFirst),
            _ => invalid(format!("unknown slot map {s:?}; use kinetic-first or potential-first")),
        }
    }
}

/// Precomputed stage sequence of a scheme for classical stepping.
#[derive(Clone, Debug)]
pub struct SymplecticStepper {
    /// `(is_drift, c dt)` in application order.
    stages: Vec<(bool, f64)>,
}

impl SymplecticStepper {
    pub fn new(scheme: &Scheme, map: SlotMap, dt: f64) -> Result<Self> {
        if scheme.slots().len() != 2 {
            return invalid("symplectic stepping needs a two-slot scheme");
        }
        let mut stages = Vec::new();
        for st in scheme.stages().iter().rev() {
            let StageKind::Slot(i) = st.kind else {
                return invalid("commutator stages have no classical flow here");
            };
            let drift = (i == 0) == (map == SlotMap::KineticFirst);
            stages.push((drift, st.coeff.value() * dt));
        }
        Ok(SymplecticStepper { stages })
    }

    pub fn step(&self, h: &dyn SeparableHamiltonian, x: &mut PhasePoint) {
        for &(is_drift, tau) in &self.stages {
            if is_drift {
                drift(h, tau, x);
            } else {
                kick(h, tau, x);
            }
        }
    }
}

/// One step of `scheme`, stage flows composed right to left.
pub fn symplectic_step(
    scheme: &Scheme,
    h: &dyn SeparableHamiltonian,
    map: SlotMap,
    dt: f64,
    x: &PhasePoint,
) -> Result<PhasePoint> {
    let mut out = x.clone();
    SymplecticStepper::new(scheme, map, dt)?.step(h, &mut out);
    Ok(out)
}

/// Explicit Euler: `p' = p − dt ∇V(q)`, `q' = q + dt ∇K(p)` simultaneously.
pub fn euler_step(h: &dyn SeparableHamiltonian, dt: f64, x: &PhasePoint) -> PhasePoint {
    let gk = h.grad_kinetic(&x.p);
    let gv = h.grad_potential(&x.q);
    PhasePoint::new(
        x.p.iter().zip(gv).map(|(p, g)| p - dt * g).collect(),
        x.q.iter().zip(gk).map(|(q, g)| q + dt * g).collect(),
    )
}

/// Determinant of the Jacobian of `map` at `x`, by central differences.
pub fn jacobian_det(map: &dyn Fn(&PhasePoint) -> PhasePoint, x: &PhasePoint, h: f64) -> f64 {
    let base = x.flat();
    let n = base.len();
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[k] += h;
        minus[k] -= h;
        let fp = map(&PhasePoint::from_flat(&plus)).flat();
        let fm = map(&PhasePoint::from_flat(&minus)).flat();
        for i in 0..n {
            j[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    j.determinant()
}

#[derive(Clone, Debug)]
pub enum ClassicalMethod {
    Scheme(Scheme, SlotMap),
    Euler,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UmenoSample {
    pub t: f64,
    pub energy: f64,
    pub q1: f64,
    pub q2: f64,
}

/// Initial condition `p = 0`, `q = (2, 1)`, energy 2.
pub fn umeno_initial() -> PhasePoint {
    PhasePoint::new(vec![0.0, 0.0], vec![2.0, 1.0])
}

/// Integrates the Umeno system, sampling every `sample_every` steps.
pub fn run_umeno(method: &ClassicalMethod, dt: f64, steps: usize, sample_every: usize) -> Result<Vec<UmenoSample>> {
    if sample_every == 0 {
        return invalid("sample_every must be positive");
    }
    let h = Umeno;
    let mut x = umeno_initial();
    let stepper = match method {
        ClassicalMethod::Scheme(s, map) => Some(SymplecticStepper::new(s, *map, dt)?),
        ClassicalMethod::Euler => None,
    };
    let sample = |k: usize, x: &PhasePoint| UmenoSample {
        t: k as f64 * dt,
        energy: h.energy(x),
        q1: x.q[0],
        q2: x.q[1],
    };
    let mut out = vec![sample(0, &x)];
    for k in 1..=steps {
        match &stepper {
            Some(st) => st.step(&h, &mut x),
            None => x = euler_step(&h, dt, &x),
        }
        if k % sample_every == 0 {
            out.push(sample(k, &x));
        }
    }
    Ok(out)
}

pub fn umeno_csv(samples: &[UmenoSample]) -> String {
    let mut s = String::from("t,energy,q1,q2\n");
    for p in samples {
        s.push_str(&format!("{},{},{},{}\n", f64_17(p.t), f64_17(p.energy), f64_17(p.q1), f64_17(p.q2)));
    }
    s
}

/// Least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::strang;

    #[test]
    fn free_flight_drift() {
        let mut x = PhasePoint::new(vec![1.0, -2.0], vec![0.5, 0.5]);
        drift(&Umeno, 0.1, &mut x);
        assert_eq!(x.q, vec![0.6, 0.3]);
        assert_eq!(x.p, vec![1.0, -2.0]);
    }

    #[test]
    fn umeno_kick() {
        let mut x = PhasePoint::new(vec![0.0, 0.0], vec![2.0, 3.0]);
        kick(&Umeno, 0.1, &mut x);
        // ∇V = (q1 q2², q1² q2) = (18, 12)
        assert!((x.p[0] + 1.8).abs() < 1e-15 && (x.p[1] + 1.2).abs() < 1e-15);
    }

    #[test]
    fn kick_and_drift_do_not_commute() {
        let x0 = PhasePoint::new(vec![0.3, -0.7], vec![1.1, 0.4]);
        let mut a = x0.clone();
        kick(&Umeno, 0.1, &mut a);
        drift(&Umeno, 0.1, &mut a);
        let mut b = x0;
        drift(&Umeno, 0.1, &mut b);
        kick(&Umeno, 0.1, &mut b);
        assert_ne!(a, b);
    }

    #[test]
    fn gradients_match_energy() {
        let x = PhasePoint::new(vec![0.3, -0.7], vec![1.1, 0.4]);
        let h = 1e-6;
        let gv = Umeno.grad_potential(&x.q);
        for k in 0..2 {
            let mut qp = x.q.clone();
            let mut qm = x.q.clone();
            qp[k] += h;
            qm[k] -= h;
            let fd = (Umeno.potential(&qp) - Umeno.potential(&qm)) / (2.0 * h);
            assert!((fd - gv[k]).abs() <= 1e-6 * gv[k].abs().max(1.0));
        }
    }

    #[test]
    fn euler_energy_factor() {
        let dt = 0.01;
        let x = PhasePoint::new(vec![0.2], vec![0.9]);
        let e0 = HarmonicOscillator.energy(&x);
        let e1 = HarmonicOscillator.energy(&euler_step(&HarmonicOscillator, dt, &x));
        assert!((e1 / e0 - (1.0 + dt * dt)).abs() < 1e-14);
    }

    #[test]
    fn umeno_initial_energy() {
        assert_eq!(Umeno.energy(&umeno_initial()), 2.0);
    }

    #[test]
    fn strang_step_unit_jacobian() {
        let s = strang();
        let x = PhasePoint::new(vec![0.3, -0.2], vec![1.2, 0.7]);
        let f = |y: &PhasePoint| symplectic_step(&s, &Umeno, SlotMap::KineticFirst, 0.05, y).unwrap();
        assert!((jacobian_det(&f, &x, 1e-6) - 1.0).abs() < 1e-8);
    }
}
