use owl_core::norm::dual_norm_by_vertex_enumeration;
use owl_core::prox::{
    check_lemma3_order, coherence_violations, prox_certificate, prox_objective,
    prox_oracle_slow_with, prox_trace,
};
use owl_core::{dual_norm, evaluate, prox, WeightVector};
use proptest::prelude::*;

/// Non-increasing, non-negative weights with a positive leader.
fn weights(n: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(0.0f64..3.0, n).prop_map(|mut w| {
        w.sort_by(|a, b| b.total_cmp(a));
        w[0] += 0.05;
        WeightVector::new(w).unwrap()
    })
}

fn vector_and_weights(max_n: usize) -> impl Strategy<Value = (Vec<f64>, WeightVector)> {
    (1..=max_n).prop_flat_map(|n| (prop::collection::vec(-10f64..10.0, n), weights(n)))
}

fn pair_and_weights(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, WeightVector)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-10f64..10.0, n),
            prop::collection::vec(-10f64..10.0, n),
            weights(n),
        )
    })
}

fn linf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn norm_axioms((x, z, w) in pair_and_weights(12), alpha in -5f64..5.0) {
        let ox = evaluate(&x, &w).unwrap();
        let oz = evaluate(&z, &w).unwrap();
        let sum: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a + b).collect();
        prop_assert!(evaluate(&sum, &w).unwrap() <= (ox + oz) * (1.0 + 1e-12));
        let scaled: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        let os = evaluate(&scaled, &w).unwrap();
        prop_assert!((os - alpha.abs() * ox).abs() <= 1e-12 * (1.0 + os));
        prop_assert!(ox >= 0.0);
        prop_assert_eq!(ox == 0.0, x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sandwich((x, w) in vector_and_weights(20)) {
        let o = evaluate(&x, &w).unwrap();
        let w1 = w.first();
        prop_assert!(w1 * linf(&x) <= o * (1.0 + 1e-12));
        prop_assert!(o <= w1 * l1(&x) * (1.0 + 1e-12));
    }

    #[test]
    fn permutation_and_sign_invariance((x, w) in vector_and_weights(15), seed in any::<u64>()) {
        let o = evaluate(&x, &w).unwrap();
        let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        prop_assert_eq!(evaluate(&abs, &w).unwrap(), o);
        let mut permuted = x.clone();
        let len = permuted.len();
        permuted.rotate_left((seed as usize) % len);
        permuted.reverse();
        prop_assert!((evaluate(&permuted, &w).unwrap() - o).abs() <= 1e-12 * (1.0 + o));
    }

    #[test]
    fn sorted_pairing_is_maximal((x, w) in vector_and_weights(7)) {
        // every ordering of |x| against w is beaten by the sorted one
        let o = evaluate(&x, &w).unwrap();
        let mut idx: Vec<usize> = (0..x.len()).collect();
        loop {
            let paired: f64 = idx.iter().zip(w.iter()).map(|(&i, wi)| x[i].abs() * wi).sum();
            prop_assert!(paired <= o * (1.0 + 1e-12) + 1e-12);
            if !next_permutation(&mut idx) {
                break;
            }
        }
    }

    #[test]
    fn generalized_cauchy_schwarz((x, u, w) in pair_and_weights(15)) {
        let inner: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum();
        let bound = evaluate(&x, &w).unwrap() * dual_norm(&u, &w).unwrap();
        prop_assert!(inner.abs() <= bound * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn dual_norm_matches_vertex_enumeration((x, w) in vector_and_weights(5)) {
        let fast = dual_norm(&x, &w).unwrap();
        let slow = dual_norm_by_vertex_enumeration(&x, &w).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-12 * fast.abs().max(slow.abs()).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn dual_norm_specializations(x in prop::collection::vec(-10f64..10.0, 1..20), lambda in 0.01f64..10.0) {
        let n = x.len();
        let constant = dual_norm(&x, &WeightVector::l1(n, lambda).unwrap()).unwrap();
        prop_assert!((constant - linf(&x) / lambda).abs() <= 1e-12 * (1.0 + constant));
        let top = dual_norm(&x, &WeightVector::linf(n, lambda).unwrap()).unwrap();
        prop_assert!((top - l1(&x) / lambda).abs() <= 1e-12 * (1.0 + top));
    }

    #[test]
    fn prox_is_certified((v, w) in vector_and_weights(60)) {
        let p = prox(&v, &w).unwrap();
        let cert = prox_certificate(&v, &p, &w).unwrap();
        prop_assert!(cert.optimal, "{:?}", cert);
        for (pi, vi) in p.iter().zip(&v) {
            prop_assert!(*pi == 0.0 || pi.signum() == vi.signum());
        }
    }

    #[test]
    fn prox_structure((v, w) in vector_and_weights(40)) {
        let trace = prox_trace(&v, &w).unwrap();
        let b = &trace.sorted_output;
        for i in 1..b.len() {
            prop_assert!(b[i - 1] >= b[i]);
            if trace.magnitudes[i - 1] == trace.magnitudes[i] {
                prop_assert!((b[i - 1] - b[i]).abs() <= 1e-12 * (1.0 + b[i]));
            }
        }
        let g = &trace.grouping;
        prop_assert!(check_lemma3_order(&g.vbar, &g.wbar));
        prop_assert_eq!(coherence_violations(&trace.magnitudes, &w, &g.partition, 1e-12), 0);
        let sv: f64 = g.vbar.iter().sum();
        let sm: f64 = trace.magnitudes.iter().sum();
        prop_assert!((sv - sm).abs() <= 1e-12 * (1.0 + sm));
        let sw: f64 = g.wbar.iter().sum();
        let swo: f64 = w.iter().sum();
        prop_assert!((sw - swo).abs() <= 1e-12 * (1.0 + swo));
    }

    #[test]
    fn constant_weights_soft_threshold(v in prop::collection::vec(-10f64..10.0, 1..40), lambda in 0.0f64..5.0) {
        let w = WeightVector::l1(v.len(), lambda + 1e-3).unwrap();
        let p = prox(&v, &w).unwrap();
        for (pi, vi) in p.iter().zip(&v) {
            let soft = vi.signum() * (vi.abs() - (lambda + 1e-3)).max(0.0);
            prop_assert!((pi - soft).abs() <= 1e-12 * (1.0 + vi.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prox_beats_subgradient_oracle((v, w) in vector_and_weights(10)) {
        let fast = prox(&v, &w).unwrap();
        let slow = prox_oracle_slow_with(&v, &w, 20_000).unwrap();
        let f = prox_objective(&fast, &v, &w).unwrap();
        let s = prox_objective(&slow, &v, &w).unwrap();
        prop_assert!(f <= s + 1e-9);
    }
}

#[test]
fn linf_prox_matches_oracle() {
    // ℓ∞ prox: v minus its projection onto the ℓ1 ball of radius t1
    let v = [3.0, -1.0, 0.5, 2.0];
    let w = WeightVector::linf(4, 1.5).unwrap();
    let p = prox(&v, &w).unwrap();
    let slow = owl_core::prox::prox_oracle_slow(&v, &w).unwrap();
    let f = prox_objective(&p, &v, &w).unwrap();
    let s = prox_objective(&slow, &v, &w).unwrap();
    assert!(f <= s + 1e-12 && s - f <= 1e-6, "{f} vs {s}");
    // Projection of |v| onto the radius-1.5 ℓ1 ball thresholds at 1.75: (1.25, 0, 0, 0.25).
    assert!(
        (p[0] - 1.75).abs() <= 1e-12 && (p[3] - 1.75).abs() <= 1e-12,
        "{p:?}"
    );
    assert_eq!(p[1], -1.0);
    assert_eq!(p[2], 0.5);
}

fn next_permutation(idx: &mut [usize]) -> bool {
    let n = idx.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && idx[i - 1] >= idx[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while idx[j] <= idx[i - 1] {
        j -= 1;
    }
    idx.swap(i - 1, j);
    idx[i..].reverse();
    true
}
