//! Seeded random and low-discrepancy point sets.
//!
//! Every parallel task draws from its own ChaCha stream keyed by
//! `(seed, stream)`, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn task_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point on the unit sphere in `R^n`.
pub fn unit_sphere<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nv = crate::linalg::norm(&v);
        if nv > 1e-12 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Uniform point in `[−r, r]^n`.
pub fn in_box<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-r..=r)).collect()
}

/// Uniform point in the ball of radius `r`.
pub fn in_ball<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<f64> {
    let dir = unit_sphere(rng, n);
    let s = r * rng.random::<f64>().powf(1.0 / n as f64);
    dir.into_iter().map(|v| v * s).collect()
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    acc
}

/// The `i`-th Halton point in `[0,1)^dim` (`dim ≤ 16`).
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    PRIMES[..dim].iter().map(|&b| radical_inverse(i, b)).collect()
}

/// Halton points in `[−r, r]^n`, skipping the origin-mapped first index.
pub fn halton_box(count: usize, n: usize, r: f64) -> Vec<Vec<f64>> {
    (1..=count as u64)
        .map(|i| halton(i, n).into_iter().map(|u| r * (2.0 * u - 1.0)).collect())
        .collect()
}

/// `count` strictly positive weight vectors on the simplex `Σ w = 1`.
///
/// For `m = 2` this is `(s, 1−s)` with `s` from the van der Corput sequence;
/// otherwise Halton points pushed through the exponential map, which is the
/// uniform (flat Dirichlet) law on the simplex.
pub fn interior_simplex(m: usize, count: usize) -> Vec<Vec<f64>> {
    if m == 1 {
        return vec![vec![1.0]; count.min(1)];
    }
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let w = if m == 2 {
            let s = radical_inverse(i, 2);
            vec![s, 1.0 - s]
        } else {
            let e: Vec<f64> = halton(i, m).into_iter().map(|u| -(u.max(1e-300)).ln()).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|v| v / s).collect()
        };
        i += 1;
        if w.iter().all(|&v| v > 0.0) {
            out.push(w);
        }
    }
    out
}

/// The `m` coordinate vectors followed by `count − m` interior weights.
pub fn simplex_weights(m: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..m.min(count))
        .map(|i| {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            e
        })
        .collect();
    if m > 1 && count > m {
        out.extend(interior_simplex(m, count - m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = task_rng(7, 3).random();
        let b: f64 = task_rng(7, 3).random();
        let c: f64 = task_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn weights_lie_on_simplex() {
        for m in 1..=4 {
            for w in simplex_weights(m, 20) {
                assert_eq!(w.len(), m);
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(w.iter().all(|&v| v >= 0.0));
            }
        }
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }
}
