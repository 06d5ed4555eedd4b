use std::collections::BTreeMap;

use expprod::ncalg::{product_log, Poly, StageGenerator};
use expprod::orders::{order_conditions, ruth_family, solve};
use proptest::prelude::*;

fn relabel_reversed(p: &Poly, m: usize) -> Poly {
    p.rename(&|name: &str| {
        let i: usize = name[1..].parse().unwrap();
        format!("p{}", m + 1 - i)
    })
}

fn pattern() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::bool::ANY, 2..=5)
        .prop_map(|v| v.into_iter().map(|b| if b { 'A' } else { 'B' }).collect::<String>())
        .prop_filter("both letters", |s| s.contains('A') && s.contains('B'))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reversal_maps_conditions_onto_themselves(pat in pattern(), m in 1usize..=4) {
        let fwd = order_conditions(&pat, m).unwrap();
        let rev: String = pat.chars().rev().collect();
        let bwd = order_conditions(&rev, m).unwrap();
        let n = pat.len();
        prop_assert_eq!(fwd.equations.len(), bwd.equations.len());
        for (f, b) in fwd.equations.iter().zip(&bwd.equations) {
            prop_assert_eq!(&f.word, &b.word);
            let mapped = relabel_reversed(&b.poly, n);
            let sign_ok = if f.degree % 2 == 1 { mapped == f.poly } else { mapped == f.poly.neg() };
            prop_assert!(sign_ok, "{} on {}", f.bracket, pat);
        }
    }
}

#[test]
fn palindromic_parameters_kill_even_conditions() {
    for pat in ["ABA", "ABABA", "BAB", "ABBBA", "ABABABA"] {
        let m = pat.len();
        let set = order_conditions(pat, 4).unwrap();
        for eq in set.of_degree(2).chain(set.of_degree(4)) {
            let mut p = eq.poly.clone();
            for i in m / 2 + 1..=m {
                p = p.substitute(&format!("p{i}"), &Poly::var(&format!("p{}", m + 1 - i)));
            }
            assert!(p.is_zero(), "{pat}: {} gives {p:?}", eq.bracket);
        }
    }
}

#[test]
fn solver_solutions_satisfy_the_series() {
    let set = order_conditions("ABABAB", 3).unwrap();
    let guess: BTreeMap<String, f64> = [0.3, 0.7, 0.7, -0.6, -0.05]
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("p{}", i + 1), *v))
        .collect();
    let rep = solve(&set.system(), &BTreeMap::from([("p6".to_string(), 1.0)]), &guess).unwrap();
    assert!(rep.converged);
    let labels: Vec<String> = vec!["A".into(), "B".into()];
    let stages: Vec<(StageGenerator, f64)> = (1..=6)
        .map(|i| (StageGenerator::Letter((i + 1) % 2), rep.value(&format!("p{i}")).unwrap()))
        .collect();
    let log = product_log(&labels, &stages, 3).unwrap();
    for (w, c) in log.terms() {
        let target = if w.degree() == 1 { 1.0 } else { 0.0 };
        assert!((c - target).abs() <= 1e-12, "{w:?}: {c}");
    }
}

#[test]
fn family_points_all_satisfy_the_conditions() {
    let grid: Vec<f64> = (0..9).map(|k| 0.6 + 0.1 * k as f64).collect();
    for p in ruth_family(&grid).unwrap() {
        assert!(p.converged, "p6 = {}", p.p6);
        assert!(p.max_residual <= 1e-13);
    }
}
