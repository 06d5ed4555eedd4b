use expprod::propagate::{
    euler_step, jacobian_det, random_hermitian, HarmonicOscillator, HermitianPart, PhasePoint, QuantumState,
    SeparableHamiltonian, SlotMap, SpinSystem, SymplecticStepper, UnitaryStepper, Umeno, C64,
};
use expprod::schemes::{self, catalog, Scheme};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn plain_schemes() -> Vec<Scheme> {
    catalog().into_iter().filter(|s| !s.has_commutators() && s.slot_index("T").is_none()).collect()
}

fn random_parts(seed: u64) -> Vec<HermitianPart> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2).map(|_| HermitianPart::new(random_hermitian(3, &mut rng)).unwrap()).collect()
}

fn state(v: &[f64]) -> QuantumState {
    let psi = DVector::from_fn(3, |i, _| C64::new(v[2 * i], v[2 * i + 1]));
    let n = psi.norm();
    QuantumState::new(psi.unscale(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stepping_preserves_the_norm(seed in 0u64..1000, dt in 0.001f64..0.5,
                                   v in prop::collection::vec(-1.0f64..1.0, 6)) {
        prop_assume!(v.iter().any(|x| x.abs() > 0.1));
        let parts = random_parts(seed);
        for scheme in plain_schemes() {
            let stepper = UnitaryStepper::new(&scheme, &parts, dt).unwrap();
            let mut psi = state(&v);
            for k in 1..=20 {
                stepper.step(&mut psi).unwrap();
                prop_assert!((psi.norm() - 1.0).abs() <= 1e-12 * k as f64, "{}", scheme.name());
            }
        }
    }

    #[test]
    fn symmetric_schemes_are_reversible(seed in 0u64..1000, dt in 0.001f64..0.3,
                                        v in prop::collection::vec(-1.0f64..1.0, 6)) {
        prop_assume!(v.iter().any(|x| x.abs() > 0.1));
        let parts = random_parts(seed);
        for name in ["strang", "triple4", "quintuple4", "s6", "hybrid4"] {
            let scheme = schemes::by_name(name).unwrap();
            let fwd = UnitaryStepper::new(&scheme, &parts, dt).unwrap();
            let bwd = UnitaryStepper::new(&scheme, &parts, -dt).unwrap();
            let psi0 = state(&v);
            let mut psi = psi0.clone();
            fwd.step(&mut psi).unwrap();
            bwd.step(&mut psi).unwrap();
            prop_assert!(psi.distance(&psi0) <= 1e-10, "{}", name);
        }
    }

    #[test]
    fn classical_steps_are_symplectic_and_reversible(p in prop::collection::vec(-1.5f64..1.5, 2),
                                                     q in prop::collection::vec(-1.5f64..1.5, 2),
                                                     dt in 0.001f64..0.1) {
        let x = PhasePoint::new(p, q);
        for scheme in plain_schemes() {
            for map in [SlotMap::KineticFirst, SlotMap::PotentialFirst] {
                let fwd = SymplecticStepper::new(&scheme, map, dt).unwrap();
                let f = |y: &PhasePoint| {
                    let mut y = y.clone();
                    fwd.step(&Umeno, &mut y);
                    y
                };
                let det = jacobian_det(&f, &x, 1e-6);
                prop_assert!((det - 1.0).abs() <= 1e-8, "{} det {}", scheme.name(), det);
                if scheme.symmetric() {
                    let bwd = SymplecticStepper::new(&scheme, map, -dt).unwrap();
                    let mut y = f(&x);
                    bwd.step(&Umeno, &mut y);
                    let err = y.p.iter().chain(&y.q).zip(x.p.iter().chain(&x.q)).fold(0f64, |m, (a, b)| m.max((a - b).abs()));
                    prop_assert!(err <= 1e-10, "{} reversal error {}", scheme.name(), err);
                }
            }
        }
    }
}

#[test]
fn harmonic_energy_stays_bounded() {
    let stepper = SymplecticStepper::new(&schemes::strang(), SlotMap::KineticFirst, 1e-3).unwrap();
    let mut x = PhasePoint::new(vec![0.0], vec![1.0]);
    let e0 = HarmonicOscillator.energy(&x);
    let mut worst = 0f64;
    for _ in 0..100_000 {
        stepper.step(&HarmonicOscillator, &mut x);
        worst = worst.max((HarmonicOscillator.energy(&x) - e0).abs());
    }
    assert!(worst <= 3e-7, "{worst:e}");
}

#[test]
fn euler_energy_increases_every_step() {
    let mut x = PhasePoint::new(vec![0.4], vec![-0.3]);
    let mut e = HarmonicOscillator.energy(&x);
    for _ in 0..1000 {
        x = euler_step(&HarmonicOscillator, 0.01, &x);
        let next = HarmonicOscillator.energy(&x);
        assert!(next > e);
        e = next;
    }
}

#[test]
fn spin_period() {
    let sys = SpinSystem::new(0.75);
    assert!((sys.period() - 4.0 * std::f64::consts::PI / 5.0).abs() < 1e-15);
}
