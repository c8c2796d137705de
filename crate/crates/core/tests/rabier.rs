use nalgebra::DMatrix;
use rand::Rng;
use vecopt_core::poly::PolyMap;
use vecopt_core::rabier::{rabier_from_jacobian, rabier_nu};
use vecopt_core::sampling::task_rng;

/// Minimum of `‖Jᵀλ‖` over `‖λ‖₁ = 1` on a grid of the 2-component sphere.
fn grid_nu_two(j: &DMatrix<f64>, steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        for s in [1.0, -1.0] {
            let l = [t, s * (1.0 - t)];
            let v = (j.row(0) * l[0] + j.row(1) * l[1]).norm();
            best = best.min(v);
        }
    }
    best
}

#[test]
fn matches_grid_oracle_for_two_components() {
    let mut rng = task_rng(31, 0);
    for _ in 0..30 {
        let n = rng.random_range(2..=4);
        let j = DMatrix::from_fn(2, n, |_, _| rng.random_range(-2.0..2.0));
        let qp = rabier_from_jacobian(&j).unwrap().value;
        let grid = grid_nu_two(&j, 200_000);
        assert!(qp <= grid + 1e-12);
        assert!((grid - qp) <= 1e-3 * grid, "qp {qp} grid {grid}");
    }
}

#[test]
fn invariant_under_permutation_and_homogeneous() {
    let f = PolyMap::parse("x1^2 + x2*x3\nx1 - x3^3\nx2^2*x1 + 1", 3).unwrap();
    let g = f.permuted(&[2, 0, 1]);
    let mut rng = task_rng(32, 0);
    for _ in 0..20 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let a = rabier_nu(&f, &x).unwrap().value;
        let b = rabier_nu(&g, &x).unwrap().value;
        assert!((a - b).abs() <= 1e-9 * (1.0 + a), "{a} {b}");
        let c = rabier_nu(&f.scaled(-2.5), &x).unwrap().value;
        assert!((c - 2.5 * a).abs() <= 1e-9 * (1.0 + c), "{c} {a}");
    }
}

#[test]
fn vanishes_where_gradients_oppose() {
    let f = PolyMap::parse("x1^2 + x2^2\nx1^2 - x2^2", 2).unwrap();
    for k in [1.0, 10.0, 100.0] {
        assert!(rabier_nu(&f, &[k, 0.0]).unwrap().value <= 1e-8);
    }
}

#[test]
fn overflowing_jacobian_is_an_error() {
    let f = PolyMap::parse("x1^2*x2^4 + x1^4*x2^2", 2).unwrap();
    assert_eq!(rabier_nu(&f, &[1e300, 1e300]), Err(vecopt_core::RabierError::NonFinite));
}
