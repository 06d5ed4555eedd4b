//! The precessing spin: energy drift of a splitting scheme versus the
//! first-order Taylor step.

use rustfft::{num_complex::Complex, FftPlanner};

use super::quantum::{perturbative_step, SpinSystem, UnitaryStepper};
use crate::error::{invalid, Result};
use crate::fmt::f64_17;
use crate::schemes::Scheme;

/// Stepping method for the precession run.
#[derive(Clone, Debug)]
pub enum Method {
    Scheme(Scheme),
    /// `(I − i dt H)` per step.
    Perturbative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecessionSample {
    pub t: f64,
    /// `⟨ψ|H|ψ⟩`, not normalised.
    pub energy: f64,
    pub norm: f64,
}

/// Runs `steps` steps from the up spin, sampling every `sample_every` steps
/// (the initial state is always sampled).
pub fn run_precession(
    method: &Method,
    gamma: f64,
    dt: f64,
    steps: usize,
    sample_every: usize,
) -> Result<Vec<PrecessionSample>> {
    if sample_every == 0 {
        return invalid("sample_every must be positive");
    }
    let sys = SpinSystem::new(gamma);
    let h = sys.h.matrix().clone();
    let mut psi = SpinSystem::initial_state();
    let stepper = match method {
        Method::Scheme(s) => Some(UnitaryStepper::new(s, &sys.parts(), dt)?),
        Method::Perturbative => None,
    };
    let sample = |k: usize, psi: &super::QuantumState| PrecessionSample {
        t: k as f64 * dt,
        energy: psi.expectation(&h),
        norm: psi.norm(),
    };
    let mut out = vec![sample(0, &psi)];
    for k in 1..=steps {
        match &stepper {
            Some(st) => st.step(&mut psi)?,
            None => psi = perturbative_step(&h, dt, &psi)?,
        }
        if k % sample_every == 0 {
            out.push(sample(k, &psi));
        }
    }
    Ok(out)
}

pub fn precession_csv(samples: &[PrecessionSample]) -> String {
    let mut s = String::from("t,energy,norm\n");
    for p in samples {
        s.push_str(&format!("{},{},{}\n", f64_17(p.t), f64_17(p.energy), f64_17(p.norm)));
    }
    s
}

/// Dominant period of a uniformly sampled signal: the largest non-zero FFT
/// peak of the mean-removed signal, zero-padded 8×, refined by a parabola
/// through the log magnitudes around the peak.
pub fn dominant_period(signal: &[f64], spacing: f64) -> Option<f64> {
    if signal.len() < 4 {
        return None;
    }
    let mean = signal.iter().sum::<f64>() / signal.len() as f64;
    let n = (signal.len() * 8).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = signal
        .iter()
        .map(|v| Complex::new(v - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(n)
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..n / 2].iter().map(|z| z.norm()).collect();
    let (k, _) = mag
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let mut kf = k as f64;
    if k + 1 < mag.len() {
        let (a, b, c) = (mag[k - 1].max(1e-300).ln(), mag[k].ln(), mag[k + 1].max(1e-300).ln());
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            kf += 0.5 * (a - c) / denom;
        }
    }
    Some(n as f64 * spacing / kf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::strang;

    #[test]
    fn initial_energy_is_one() {
        let s = run_precession(&Method::Scheme(strang()), 0.75, 1e-3, 10, 5).unwrap();
        assert_eq!(s[0].energy, 1.0);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn period_of_a_sine() {
        let dt = 0.01;
        let sig: Vec<f64> = (0..5000).map(|i| (2.0 * std::f64::consts::PI * i as f64 * dt / 3.7).sin()).collect();
        let p = dominant_period(&sig, dt).unwrap();
        assert!((p - 3.7).abs() / 3.7 < 1e-3, "{p}");
    }
}
