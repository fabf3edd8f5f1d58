mod common;

use cadsel::svm::{train, TOLERANCE};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<i8>) {
    loop {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let labels: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        if labels.iter().any(|&l| l > 0) && labels.iter().any(|&l| l < 0) {
            return (rows, labels);
        }
    }
}

#[test]
fn objective_matches_qp_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..=6);
        let (rows, labels) = dataset(&mut rng, n, 2);
        let gamma = rng.gen_range(0.1..2.0);
        let c = rng.gen_range(0.1..10.0);
        let j = rng.gen_range(0.5..2.0);
        let m = train(&rows, &labels, gamma, c, j).unwrap();
        let y: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
        let cap: Vec<f64> = labels.iter().map(|&l| if l > 0 { j * c } else { c }).collect();
        let want = common::qp_oracle(&rows, &y, &cap, gamma);
        assert!(
            (m.objective - want).abs() <= 1e-3 * want.abs().max(1.0),
            "smo {} oracle {}",
            m.objective,
            want
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn dual_feasibility(seed in 0u64..10_000, n in 2usize..30, c in 0.1f64..50.0, j in 0.25f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rows, labels) = dataset(&mut rng, n, 3);
        let m = train(&rows, &labels, 0.5, c, j).unwrap();
        let mut balance = 0.0;
        for (sv, coef) in m.support_vectors.iter().zip(&m.coefficients) {
            let t = rows.iter().position(|r| r == sv).unwrap();
            let cap = if labels[t] > 0 { j * c } else { c };
            let alpha = coef * labels[t] as f64;
            prop_assert!(alpha > 0.0 && alpha <= cap + 1e-12);
            balance += coef;
        }
        prop_assert!(balance.abs() < TOLERANCE);
    }
}

#[test]
fn duplicated_rows_hard_margin() {
    // separable data with a large C: the solution is the hard-margin one
    let rows = vec![vec![-2.0, 0.0], vec![-1.0, 1.0], vec![1.0, 0.5], vec![2.0, -1.0]];
    let labels = [-1, -1, 1, 1];
    let m = train(&rows, &labels, 0.5, 1e4, 1.0).unwrap();
    let mut rows2 = rows.clone();
    rows2.extend(rows.clone());
    let mut labels2 = labels.to_vec();
    labels2.extend(labels);
    let m2 = train(&rows2, &labels2, 0.5, 1e4, 1.0).unwrap();
    for x in [[0.0, 0.0], [0.5, -0.3], [-1.5, 2.0], [3.0, 3.0]] {
        assert!((m.decision_value(&x) - m2.decision_value(&x)).abs() < 1e-2);
    }
}

#[test]
fn deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (rows, labels) = dataset(&mut rng, 40, 4);
    let a = train(&rows, &labels, 0.3, 8.0, 1.5).unwrap();
    let b = train(&rows, &labels, 0.3, 8.0, 1.5).unwrap();
    assert_eq!(a, b);
}
