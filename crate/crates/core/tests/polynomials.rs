use proptest::prelude::*;
use rand::Rng;
use vecopt_core::poly::{parse_polynomial, PolyMap, Polynomial};
use vecopt_core::sampling::task_rng;

fn random_poly<R: Rng>(rng: &mut R, n: usize) -> Polynomial {
    let terms = rng.random_range(1..=6);
    let t: Vec<(Vec<u32>, f64)> = (0..terms)
        .map(|_| {
            let e = (0..n).map(|_| rng.random_range(0..=4)).collect();
            (e, rng.random_range(-3.0..3.0))
        })
        .collect();
    Polynomial::from_terms(n, t).unwrap()
}

#[test]
fn gradients_match_central_differences() {
    let mut rng = task_rng(11, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=3);
        let f = PolyMap::new((0..m).map(|_| random_poly(&mut rng, n)).collect()).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
        let jac = f.jacobian(&x);
        for i in 0..m {
            for j in 0..n {
                let h = 1e-6 * (1.0 + x[j].abs());
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let fd = (f.evaluate(&xp)[i] - f.evaluate(&xm)[i]) / (2.0 * h);
                let err = (fd - jac[(i, j)]).abs() / (1.0 + jac[(i, j)].abs());
                worst = worst.max(err);
            }
        }
    }
    assert!(worst <= 1e-5, "worst relative error {worst}");
}

#[test]
fn hessians_match_gradient_differences() {
    let mut rng = task_rng(12, 0);
    for _ in 0..50 {
        let n = rng.random_range(1..=3);
        let f = PolyMap::new(vec![random_poly(&mut rng, n)]).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (_, _, hs) = f.second_order(&x);
        for j in 0..n {
            let h = 1e-6;
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let d = (f.gradient(0, &xp) - f.gradient(0, &xm)) / (2.0 * h);
            for k in 0..n {
                assert!((d[k] - hs[0][(k, j)]).abs() <= 1e-5 * (1.0 + d[k].abs()));
            }
        }
    }
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((prop::collection::vec(0u32..5, n), -100i32..100), 0..6).prop_map(move |ts| {
            // Quarter-integer coefficients keep the arithmetic exact.
            let terms = ts.into_iter().map(|(e, c)| (e, c as f64 / 4.0));
            Polynomial::from_terms(n, terms).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(p in poly_strategy()) {
        let text = p.to_string();
        let q = parse_polynomial(&text, p.nvars()).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(q.to_string(), text);
    }

    #[test]
    fn arithmetic_is_linear(p in poly_strategy(), c in -8i32..8, xs in prop::collection::vec(-2.0f64..2.0, 3)) {
        let n = p.nvars();
        let x = &xs[..n];
        let c = c as f64 / 2.0;
        let q = p.scale(c).add(&p);
        let expect = (c + 1.0) * p.evaluate(x);
        prop_assert!((q.evaluate(x) - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
        prop_assert!(p.sub(&p).is_zero());
        let d = p.scale(c).derivative(0);
        let e = p.derivative(0).scale(c);
        prop_assert_eq!(d, e);
    }

    #[test]
    fn product_evaluates_to_product(p in poly_strategy(), xs in prop::collection::vec(-2.0f64..2.0, 3)) {
        let x = &xs[..p.nvars()];
        let sq = p.mul(&p);
        let v = p.evaluate(x);
        prop_assert!((sq.evaluate(x) - v * v).abs() <= 1e-9 * (1.0 + v * v));
    }
}
