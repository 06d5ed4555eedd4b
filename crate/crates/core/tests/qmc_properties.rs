use expprod::qmc::{
    couplings, diagonalize, enumerate, metropolis_run, IsingModel, TrotterNumber,
};
use proptest::prelude::*;

fn pair(j: f64, gamma: f64, beta: f64) -> IsingModel {
    IsingModel::new(2, vec![(0, 1, j)], gamma, beta).unwrap()
}

proptest! {
    #[test]
    fn transfer_couplings_reproduce_the_matrix_elements(eps in 1e-3f64..10.0) {
        // n = 1 makes ε = βΓ.
        let model = IsingModel::new(1, vec![], eps, 1.0).unwrap();
        let c = couplings(&model, 1).unwrap();
        let same = (c.delta_n + c.gamma_n).exp();
        let flip = (c.delta_n - c.gamma_n).exp();
        prop_assert!((same / eps.cosh() - 1.0).abs() <= 1e-14);
        prop_assert!((flip / eps.sinh() - 1.0).abs() <= 1e-14);
    }
}

#[test]
fn runs_are_deterministic() {
    let model = IsingModel::chain(4, 1.0, 0.8, 2.0).unwrap();
    let a = metropolis_run(&model, 6, 3000, 500, 17).unwrap();
    let b = metropolis_run(&model, 6, 3000, 500, 17).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
    let c = metropolis_run(&model, 6, 3000, 500, 18).unwrap();
    assert_ne!(a.observables, c.observables);
}

#[test]
fn monte_carlo_matches_enumeration_at_fixed_n() {
    let model = pair(1.0, 1.0, 1.0);
    let n = 8;
    let exact = enumerate(&model, n).unwrap();
    let mc = metropolis_run(&model, n, 200_000, 20_000, 5).unwrap();
    for name in ["zz_0_1", "sigma_x", "magnetization_sq", "trotter_corr"] {
        let s = mc.get(name).unwrap();
        let e = exact.get(name).unwrap();
        assert!((s.mean - e).abs() <= 3.0 * s.stderr, "{name}: {} ± {} vs {e}", s.mean, s.stderr);
    }
}

#[test]
fn uncoupled_spins_are_uncorrelated() {
    let model = pair(0.0, 1.0, 1.0);
    let mc = metropolis_run(&model, 8, 100_000, 10_000, 9).unwrap();
    let zz = mc.zz(0, 1).unwrap();
    assert!(zz.mean.abs() <= 3.0 * zz.stderr, "{} ± {}", zz.mean, zz.stderr);
    let exact = enumerate(&model, 8).unwrap();
    assert!(exact.zz(0, 1).unwrap().abs() < 1e-14);
}

#[test]
fn trotter_limit_approaches_diagonalization() {
    let model = pair(1.0, 1.0, 1.0);
    let ed = diagonalize(&model).unwrap().zz(0, 1).unwrap();
    let errs: Vec<f64> = [4, 8, 12].iter().map(|&n| (enumerate(&model, n).unwrap().zz(0, 1).unwrap() - ed).abs()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 1e-2);
}

#[test]
fn trotter_number_parses() {
    assert_eq!("inf".parse::<TrotterNumber>().unwrap(), TrotterNumber::Infinite);
    assert_eq!("16".parse::<TrotterNumber>().unwrap(), TrotterNumber::Finite(16));
    assert!("x".parse::<TrotterNumber>().is_err());
}

#[test]
fn model_json() {
    let m = IsingModel::from_json(r#"{"sites": 3, "bonds": [[0, 1, 1.0], [1, 2, -0.5]], "gamma": 0.7, "beta": 2.0}"#).unwrap();
    assert_eq!(m, IsingModel::new(3, vec![(0, 1, 1.0), (1, 2, -0.5)], 0.7, 2.0).unwrap());
    assert!(IsingModel::from_json(r#"{"sites": 3, "bonds": [], "gamma": 0.7, "beta": 2.0, "extra": 1}"#).is_err());
    assert!(IsingModel::from_json(r#"{"sites": 2, "bonds": [[0, 2, 1.0]], "gamma": 0.7, "beta": 2.0}"#).is_err());
    assert!(IsingModel::from_json(r#"{"sites": 2, "bonds": [[0, 1, 1.0], [1, 0, 1.0]], "gamma": 0.7, "beta": 2.0}"#).is_err());
}
