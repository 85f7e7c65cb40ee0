//! Proximal-gradient solvers for `min_x ½‖y − Ax‖² + Ω_w(x)`.
//!
//! Both ISTA and FISTA start from `x = 0` and stop on the relative duality gap,
//! evaluated at the start and then every [`GAP_CHECK_INTERVAL`] iterations.
//! The dual point is the scaled residual `s·(y − Ax)` with
//! `s = min(1, 1/Ω*(Aᵀ(y − Ax)))`.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{check_len, Error, Result};
use crate::norm;
use crate::prox::prox;
use crate::weights::WeightVector;

pub const GAP_CHECK_INTERVAL: usize = 10;

/// Multiplier applied to the power-iteration estimate of `σ_max(A)²`.
pub const LIPSCHITZ_SAFETY: f64 = 1.02;

const POWER_MAX_ITERATIONS: usize = 1000;
const POWER_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    a: Array2<f64>,
    y: Array1<f64>,
    w: WeightVector,
}

impl Problem {
    pub fn new(a: Array2<f64>, y: Array1<f64>, w: WeightVector) -> Result<Self> {
        let (m, n) = a.dim();
        if m == 0 || n == 0 {
            return Err(Error::Empty);
        }
        check_len("response length vs matrix rows", m, y.len())?;
        check_len("weights vs matrix columns", n, w.len())?;
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("design matrix"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response"));
        }
        Ok(Self { a, y, w })
    }

    pub fn a(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    /// `Aᵀ(Ax − y)`.
    pub fn gradient(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let r = self.a.dot(&x) - &self.y;
        self.a.t().dot(&r)
    }

    fn check_x(&self, x: &[f64]) -> Result<()> {
        check_len("iterate vs matrix columns", self.cols(), x.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    Ista,
    #[default]
    Fista,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepMode {
    /// `1/L` with `L` from [`lipschitz_estimate`].
    #[default]
    Fixed,
    /// Start from a lower bound on `L` and double it until the quadratic upper
    /// bound holds.
    Backtracking,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub max_iterations: usize,
    /// Threshold on `gap / |primal objective|`.
    pub gap_tolerance: f64,
    pub step_mode: StepMode,
    /// FISTA only: drop momentum and take a plain step whenever the objective
    /// would go up.
    pub restart_on_increase: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Fista,
            max_iterations: 10_000,
            gap_tolerance: 1e-8,
            step_mode: StepMode::Fixed,
            restart_on_increase: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gap_tolerance.is_nan() || self.gap_tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "gap tolerance must be positive, got {}",
                self.gap_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Indices whose coefficients share a magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub indices: Vec<usize>,
    pub magnitude: f64,
    pub zero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub x: Vec<f64>,
    /// Objective at `x₀ = 0` followed by one value per iteration.
    pub objective_trace: Vec<f64>,
    /// `(iteration, gap)` for each duality-gap evaluation.
    pub gap_trace: Vec<(usize, f64)>,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub duality_gap: f64,
    pub relative_gap: f64,
    pub lipschitz: Option<f64>,
    pub clusters: Vec<Cluster>,
}

/// Largest eigenvalue of `AᵀA` by power iteration from the normalized all-ones
/// vector.
pub fn spectral_norm_squared(a: &Array2<f64>) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    let n = a.ncols();
    let ones = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let estimate = power_iteration(a, ones);
    if estimate > 0.0 || a.iter().all(|&v| v == 0.0) {
        return Ok(estimate);
    }
    // The all-ones start was orthogonal to every non-null direction of AᵀA.
    let ramp = Array1::from_iter((1..=n).map(|i| i as f64));
    let norm = ramp.dot(&ramp).sqrt();
    Ok(power_iteration(a, ramp / norm))
}

fn power_iteration(a: &Array2<f64>, mut v: Array1<f64>) -> f64 {
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERATIONS {
        let u = a.dot(&v);
        let next = u.dot(&u);
        let z = a.t().dot(&u);
        let z_norm = z.dot(&z).sqrt();
        if z_norm == 0.0 {
            return next;
        }
        v = z / z_norm;
        let done = (next - lambda).abs() <= POWER_REL_TOL * next;
        lambda = next;
        if done {
            break;
        }
    }
    lambda
}

/// Lipschitz constant of `x ↦ Aᵀ(Ax − y)`: power-iteration estimate of
/// `σ_max(A)²` times [`LIPSCHITZ_SAFETY`].
pub fn lipschitz_estimate(a: &Array2<f64>) -> Result<f64> {
    Ok(LIPSCHITZ_SAFETY * spectral_norm_squared(a)?)
}

/// `½‖y − Ax‖² + Ω_w(x)`.
pub fn objective(problem: &Problem, x: &[f64]) -> Result<f64> {
    problem.check_x(x)?;
    let r = &problem.y - &problem.a.dot(&ArrayView1::from(x));
    Ok(0.5 * r.dot(&r) + norm::evaluate_unchecked(x, &problem.w))
}

/// Primal objective, dual objective and their difference at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

impl GapReport {
    pub fn relative(&self) -> f64 {
        if self.gap <= 0.0 {
            0.0
        } else if self.primal == 0.0 {
            self.gap
        } else {
            self.gap / self.primal.abs()
        }
    }
}

pub fn gap_report(problem: &Problem, x: &[f64]) -> Result<GapReport> {
    problem.check_x(x)?;
    let r = &problem.y - &problem.a.dot(&ArrayView1::from(x));
    let correlation = problem.a.t().dot(&r);
    let dual_norm = norm::dual_norm_unchecked(correlation.as_slice().unwrap(), &problem.w);
    let s = if dual_norm > 1.0 {
        1.0 / dual_norm
    } else {
        1.0
    };
    let rr = r.dot(&r);
    let primal = 0.5 * rr + norm::evaluate_unchecked(x, &problem.w);
    // ½‖y‖² − ½‖s·r − y‖², expanded to avoid cancelling two large terms
    let dual = s * r.dot(&problem.y) - 0.5 * s * s * rr;
    Ok(GapReport {
        primal,
        dual,
        gap: primal - dual,
    })
}

/// Duality gap at `x`; zero exactly at the optimum.
pub fn duality_gap(problem: &Problem, x: &[f64]) -> Result<f64> {
    Ok(gap_report(problem, x)?.gap)
}

/// Groups indices by `|xᵢ|` within `rel_tol·(1 + ‖x‖∞)`.
///
/// Coefficients within that tolerance of zero form a single group flagged
/// `zero`, listed first. The other groups follow by decreasing magnitude; each
/// group is anchored at its largest member so tolerances do not chain.
pub fn cluster_report(x: &[f64], rel_tol: f64) -> Vec<Cluster> {
    let max = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = rel_tol * (1.0 + max);
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()));

    let zero: Vec<usize> = {
        let mut z: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() <= tol).collect();
        z.sort_unstable();
        z
    };
    let mut clusters = Vec::new();
    if !zero.is_empty() {
        clusters.push(Cluster {
            indices: zero,
            magnitude: 0.0,
            zero: true,
        });
    }
    let mut current: Option<Cluster> = None;
    for i in order.into_iter().filter(|&i| x[i].abs() > tol) {
        let m = x[i].abs();
        match current.as_mut() {
            Some(c) if c.magnitude - m <= tol => c.indices.push(i),
            _ => {
                if let Some(mut done) = current.take() {
                    done.indices.sort_unstable();
                    clusters.push(done);
                }
                current = Some(Cluster {
                    indices: vec![i],
                    magnitude: m,
                    zero: false,
                });
            }
        }
    }
    if let Some(mut done) = current {
        done.indices.sort_unstable();
        clusters.push(done);
    }
    clusters
}

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

struct Stepper<'a> {
    problem: &'a Problem,
    mode: StepMode,
    lipschitz: f64,
}

impl Stepper<'_> {
    /// `prox_{Ω/L}(z − ∇f(z)/L)`, adapting `L` when backtracking.
    fn step(&mut self, z: &Array1<f64>) -> Result<Array1<f64>> {
        let grad = self.problem.gradient(z.view());
        loop {
            let scaled = self.problem.w.scaled(1.0 / self.lipschitz)?;
            let forward = z - &(&grad / self.lipschitz);
            let next = Array1::from(prox(forward.as_slice().unwrap(), &scaled)?);
            if self.mode == StepMode::Fixed || self.sufficient_decrease(z, &grad, &next) {
                return Ok(next);
            }
            self.lipschitz *= 2.0;
        }
    }

    fn sufficient_decrease(&self, z: &Array1<f64>, grad: &Array1<f64>, next: &Array1<f64>) -> bool {
        let smooth = |x: &Array1<f64>| {
            let r = self.problem.a.dot(x) - &self.problem.y;
            0.5 * r.dot(&r)
        };
        let d = next - z;
        let bound = smooth(z) + grad.dot(&d) + 0.5 * self.lipschitz * d.dot(&d);
        smooth(next) <= bound * (1.0 + 1e-12) + 1e-300
    }
}

fn initial_lipschitz(problem: &Problem, mode: StepMode) -> Result<f64> {
    match mode {
        StepMode::Fixed => lipschitz_estimate(&problem.a),
        StepMode::Backtracking => {
            // the largest squared column norm never exceeds σ_max²
            let best = problem
                .a
                .columns()
                .into_iter()
                .map(|c| c.dot(&c))
                .fold(0.0, f64::max);
            Ok(if best > 0.0 { best } else { 1.0 })
        }
    }
}

/// Minimizes `½‖y − Ax‖² + Ω_w(x)`.
pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<SolveResult> {
    config.validate()?;
    let n = problem.cols();
    let mut x = Array1::<f64>::zeros(n);
    let mut obj = objective(problem, x.as_slice().unwrap())?;
    let mut objective_trace = vec![obj];
    let mut gap_trace = Vec::new();

    let mut report = gap_report(problem, x.as_slice().unwrap())?;
    gap_trace.push((0, report.gap));
    if report.relative() <= config.gap_tolerance {
        return Ok(finish(x, objective_trace, gap_trace, 0, true, report, None));
    }

    let mut stepper = Stepper {
        problem,
        mode: config.step_mode,
        lipschitz: initial_lipschitz(problem, config.step_mode)?,
    };
    let mut momentum_point = x.clone();
    let mut t = 1.0_f64;
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=config.max_iterations {
        iterations = k;
        let (next, next_obj) = match config.algorithm {
            Algorithm::Ista => {
                let next = stepper.step(&x)?;
                let o = objective(problem, next.as_slice().unwrap())?;
                (next, o)
            }
            Algorithm::Fista => {
                let mut next = stepper.step(&momentum_point)?;
                let mut o = objective(problem, next.as_slice().unwrap())?;
                let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
                if config.restart_on_increase && o > obj {
                    next = stepper.step(&x)?;
                    o = objective(problem, next.as_slice().unwrap())?;
                    t = 1.0;
                    momentum_point = next.clone();
                } else {
                    momentum_point = &next + &((&next - &x) * ((t - 1.0) / t_next));
                    t = t_next;
                }
                (next, o)
            }
        };
        if !next_obj.is_finite() || next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { iteration: k });
        }
        x = next;
        obj = next_obj;
        objective_trace.push(obj);

        if k % GAP_CHECK_INTERVAL == 0 || k == config.max_iterations {
            report = gap_report(problem, x.as_slice().unwrap())?;
            gap_trace.push((k, report.gap));
            if report.relative() <= config.gap_tolerance {
                converged = true;
                break;
            }
        }
    }
    Ok(finish(
        x,
        objective_trace,
        gap_trace,
        iterations,
        converged,
        report,
        Some(stepper.lipschitz),
    ))
}

fn finish(
    x: Array1<f64>,
    objective_trace: Vec<f64>,
    gap_trace: Vec<(usize, f64)>,
    iterations: usize,
    converged: bool,
    report: GapReport,
    lipschitz: Option<f64>,
) -> SolveResult {
    let x = x.to_vec();
    let clusters = cluster_report(&x, DEFAULT_CLUSTER_TOL);
    SolveResult {
        x,
        objective_trace,
        gap_trace,
        iterations,
        converged,
        objective: report.primal,
        duality_gap: report.gap,
        relative_gap: report.relative(),
        lipschitz,
        clusters,
    }
}
