use expprod::ncalg::analysis::{
    conjugation_series, derivation_power, exp_derivation, expm, frechet_exp, frechet_exp_series, inner_derivation,
    log_near_identity, matrix_polynomial, power_derivation,
};
use expprod::ncalg::{
    lie_project, product_log, series_exp, series_log, stage_exp, stage_product, NcSeries, Rational, StageGenerator,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn ab() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn stage_list() -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    prop::collection::vec((0usize..2, -4i64..=4, 1i64..=4), 1..=6)
}

fn stages(raw: &[(usize, i64, i64)]) -> Vec<(StageGenerator, Rational)> {
    raw.iter().map(|&(g, n, d)| (StageGenerator::Letter(g), rat(n, d))).collect()
}

fn matrix3() -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, 9).prop_map(|v| DMatrix::from_row_slice(3, 3, &v))
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.amax()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_log_is_a_lie_element(raw in stage_list(), order in 1usize..=6) {
        let log = product_log(&ab(), &stages(&raw), order).unwrap();
        prop_assert!(lie_project(&log).is_ok());
    }

    #[test]
    fn exp_inverts_log(raw in stage_list(), order in 1usize..=5) {
        let s = stage_product(&ab(), &stages(&raw), order).unwrap();
        prop_assert_eq!(series_exp(&series_log(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn log_of_a_single_stage(g in 0usize..2, n in -5i64..=5, d in 1i64..=5, order in 1usize..=6) {
        let c = rat(n, d);
        let e = stage_exp(&ab(), &StageGenerator::Letter(g), &c, order).unwrap();
        let expected = NcSeries::generator(&ab(), order, g).unwrap().scale(&c);
        prop_assert_eq!(series_log(&e).unwrap(), expected);
    }

    #[test]
    fn palindromes_have_no_even_terms(raw in prop::collection::vec((0usize..2, -4i64..=4, 1i64..=4), 1..=3)) {
        let mut full = raw.clone();
        full.extend(raw.iter().rev());
        let log = product_log(&ab(), &stages(&full), 6).unwrap();
        for k in [2, 4, 6] {
            prop_assert!(log.homogeneous(k).is_zero(), "degree {} survives", k);
        }
    }

    #[test]
    fn functions_of_a_commute_with_derivations(a in matrix3(), x in matrix3(),
                                                f in prop::collection::vec(-1.0f64..1.0, 4),
                                                g in prop::collection::vec(-1.0f64..1.0, 4)) {
        // [f(A), δ_{g(A)}] X = f(A) [g(A), X] − [g(A), f(A) X] = 0
        let fa = matrix_polynomial(&a, &f);
        let ga = matrix_polynomial(&a, &g);
        let lhs = &fa * inner_derivation(&ga, &x) - inner_derivation(&ga, &(&fa * &x));
        prop_assert!(max_abs(&lhs) <= 1e-10);
    }

    #[test]
    fn power_derivation_matches_direct(a in matrix3(), x in matrix3(), n in 1usize..=6) {
        let an = a.pow(n as u32);
        let direct = inner_derivation(&an, &x);
        prop_assert!(max_abs(&(power_derivation(&a, &x, n) - direct)) <= 1e-10);
    }

    #[test]
    fn conjugation_by_exponentials(a in matrix3(), b in matrix3(), t in -1.0f64..1.0) {
        // keep ‖tA‖ ≤ ½
        let scale = 0.5 / (a.norm() * t.abs()).max(0.5);
        let a = a * scale;
        let direct = expm(&(&a * t)) * &b * expm(&(&a * -t));
        prop_assert!(max_abs(&(conjugation_series(&a, &b, t, 12) - direct)) <= 1e-10);
    }

    #[test]
    fn derivation_exponentials_compose(a in matrix3(), b in matrix3(), c in matrix3()) {
        let a = a * 0.2;
        let b = b * 0.2;
        let phi = log_near_identity(&(expm(&a) * expm(&b)), 60);
        let lhs = exp_derivation(&a, &exp_derivation(&b, &c, 30), 30);
        let rhs = exp_derivation(&phi, &c, 30);
        prop_assert!(max_abs(&(lhs - rhs)) <= 1e-10);
    }

    #[test]
    fn frechet_matches_sum_formula(a in matrix3(), da in matrix3()) {
        let a = &a / a.norm().max(1.0);
        let block = frechet_exp(&a, &da).unwrap();
        prop_assert!(max_abs(&(block - frechet_exp_series(&a, &da, 30))) <= 1e-10);
    }

    #[test]
    fn derivation_power_is_nested_commutators(a in matrix3(), x in matrix3()) {
        let twice = inner_derivation(&a, &inner_derivation(&a, &x));
        prop_assert!(max_abs(&(derivation_power(&a, &x, 2) - twice)) <= 1e-12);
    }
}
