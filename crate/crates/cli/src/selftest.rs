//! Randomized invariant checks run by `owl selftest`.
//!
//! The seed comes from `OWL_SEED` when set, so failures can be replayed.

use owl_core::norm::{dual_norm_by_vertex_enumeration, evaluate};
use owl_core::prox::{check_lemma3_order, coherence_violations, prox_certificate, prox_trace};
use owl_core::solver::{solve, Algorithm, SolverConfig};
use owl_core::{dual_norm, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::random;

pub const DEFAULT_SEED: u64 = 20140120;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn line(&self) -> String {
        match &self.first_failure {
            None => format!("PASS {} ({} cases)", self.name, self.cases),
            Some(why) => format!(
                "FAIL {} ({}/{} cases failed; first: {why})",
                self.name, self.failures, self.cases
            ),
        }
    }
}

struct Check {
    name: &'static str,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(why());
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

pub fn seed_from_env() -> u64 {
    std::env::var("OWL_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn run(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        dual_oracle(&mut rng),
        norm_axioms(&mut rng),
        prox_certified(&mut rng),
        prox_structure(&mut rng),
        solver_gap(&mut rng),
    ]
}

fn dual_oracle(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut check = Check::new("dual norm matches vertex enumeration");
    for _ in 0..200 {
        let n = rng.random_range(1..=5);
        let x = random::vector(rng, n, 10.0);
        let w = random::any_weights(rng, n);
        let fast = dual_norm(&x, &w).unwrap();
        let slow = dual_norm_by_vertex_enumeration(&x, &w).unwrap();
        check.record((fast - slow).abs() <= 1e-12 * fast.max(slow), || {
            format!("x={x:?} w={:?}: {fast} vs {slow}", w.as_slice())
        });
    }
    check.finish()
}

fn norm_axioms(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut check = Check::new("norm axioms and sandwich bounds");
    for _ in 0..1000 {
        let n = rng.random_range(1..=20);
        let x = random::vector(rng, n, 10.0);
        let z = random::vector(rng, n, 10.0);
        let w = random::any_weights(rng, n);
        let ox = evaluate(&x, &w).unwrap();
        let oz = evaluate(&z, &w).unwrap();
        let sum: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a + b).collect();
        let tri = evaluate(&sum, &w).unwrap() <= (ox + oz) * (1.0 + 1e-12);
        let linf = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        let lower = w.first() * linf <= ox * (1.0 + 1e-12);
        let upper = ox <= w.first() * l1 * (1.0 + 1e-12);
        check.record(tri && lower && upper, || {
            format!("x={x:?} w={:?}", w.as_slice())
        });
    }
    check.finish()
}

fn prox_certified(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut check = Check::new("prox passes the optimality certificate");
    for _ in 0..200 {
        let n = rng.random_range(1..=100);
        let v = random::vector(rng, n, 5.0);
        let w = random::any_weights(rng, n);
        let p = owl_core::prox(&v, &w).unwrap();
        let cert = prox_certificate(&v, &p, &w).unwrap();
        check.record(cert.optimal, || format!("n={n}: {cert:?}"));
    }
    check.finish()
}

fn prox_structure(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut check = Check::new("prox grouping structure");
    for _ in 0..200 {
        let n = rng.random_range(1..=60);
        let v = random::vector(rng, n, 5.0);
        let w = random::any_weights(rng, n);
        let violations = structure_violations(&v, &w);
        check.record(violations == 0, || {
            format!("n={n}: {violations} violations")
        });
    }
    check.finish()
}

/// Counts violations of sorted-order monotonicity, equal-in ⇒ equal-out,
/// non-increasing `v̄ − w̄` and group coherence.
pub fn structure_violations(v: &[f64], w: &WeightVector) -> usize {
    let trace = prox_trace(v, w).unwrap();
    let b = &trace.sorted_output;
    let mut violations = 0;
    for i in 1..b.len() {
        if b[i - 1] < b[i] {
            violations += 1;
        }
        if trace.magnitudes[i - 1] == trace.magnitudes[i]
            && (b[i - 1] - b[i]).abs() > 1e-12 * (1.0 + b[i])
        {
            violations += 1;
        }
    }
    let g = &trace.grouping;
    if !check_lemma3_order(&g.vbar, &g.wbar) {
        violations += 1;
    }
    violations + coherence_violations(&trace.magnitudes, w, &g.partition, 1e-12)
}

fn solver_gap(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut check = Check::new("FISTA reaches the duality-gap tolerance");
    for _ in 0..5 {
        let n = rng.random_range(2..=40);
        let m = rng.random_range(2..=60);
        let problem = random::regression_problem(rng, m, n);
        let config = SolverConfig {
            algorithm: Algorithm::Fista,
            ..Default::default()
        };
        match solve(&problem, &config) {
            Ok(r) => check.record(r.converged, || {
                format!(
                    "{m}x{n}: relative gap {} after {}",
                    r.relative_gap, r.iterations
                )
            }),
            Err(e) => check.record(false, || e.to_string()),
        }
    }
    check.finish()
}
