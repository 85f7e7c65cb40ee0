//! Seeded random instances for the self-test and the acceptance suite.

use ndarray::{Array1, Array2};
use owl_core::{Problem, WeightVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn vector<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

/// Non-increasing weights with a positive leader; sometimes with a zero tail.
pub fn valid_weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w[0] += 0.01;
    if n > 1 && rng.random_bool(0.2) {
        let zeros = rng.random_range(1..n);
        for v in &mut w[n - zeros..] {
            *v = 0.0;
        }
    }
    WeightVector::new(w).expect("sorted, non-negative, positive leader")
}

/// One of: OSCAR, constant (ℓ1), `(t1, 0, …)` (ℓ∞), or arbitrary valid weights.
pub fn any_weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    match rng.random_range(0..4) {
        0 => {
            WeightVector::oscar(n, rng.random_range(0.01..2.0), rng.random_range(0.0..0.5)).unwrap()
        }
        1 => WeightVector::l1(n, rng.random_range(0.01..2.0)).unwrap(),
        2 => WeightVector::linf(n, rng.random_range(0.01..5.0)).unwrap(),
        _ => valid_weights(rng, n),
    }
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, m: usize, n: usize) -> Array2<f64> {
    let scale = 1.0 / (m as f64).sqrt();
    Array2::from_shape_fn((m, n), |_| {
        let z: f64 = StandardNormal.sample(rng);
        z * scale
    })
}

/// Sparse, partly tied ground truth observed through a Gaussian design with
/// noise; OSCAR weights sized relative to `‖Aᵀy‖∞` so the solution is neither
/// zero nor dense.
pub fn regression_problem<R: Rng>(rng: &mut R, m: usize, n: usize) -> Problem {
    let a = gaussian_matrix(rng, m, n);
    let mut truth = Array1::zeros(n);
    let active = (n / 5).max(1);
    for k in 0..active {
        let j = rng.random_range(0..n);
        truth[j] = if k % 2 == 0 { 1.5 } else { -1.5 };
    }
    let noise = Array1::from_shape_fn(m, |_| {
        let z: f64 = StandardNormal.sample(rng);
        0.05 * z
    });
    let y = a.dot(&truth) + noise;
    let corr = a
        .t()
        .dot(&y)
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let lambda1 = rng.random_range(0.05..0.3) * corr;
    let lambda2 = rng.random_range(0.0..0.5) * lambda1 / n as f64;
    let w = WeightVector::oscar(n, lambda1, lambda2).unwrap();
    Problem::new(a, y, w).unwrap()
}
