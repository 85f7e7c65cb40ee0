//! Exact proximity operator of the sorted ℓ1 norm.
//!
//! `prox(v) = argmin_x Ω_w(x) + ½‖x − v‖²` is computed by
//!
//! 1. sorting `v` by non-increasing magnitude,
//! 2. grouping consecutive sorted magnitudes and averaging both the magnitudes
//!    and the weights within each group until the per-group differences
//!    `v̄ⱼ − w̄ⱼ` are non-increasing ([`group_and_average`]),
//! 3. clamping the differences at zero, and
//! 4. undoing the sort and restoring the signs of `v`.
//!
//! Step 2 is a pool-adjacent-violators pass on `|v̀| − w` run with a merge stack.

use std::ops::Range;

use crate::error::{check_len, Error, Result};
use crate::norm::{self, sort_by_abs_desc, SortPermutation};
use crate::weights::WeightVector;

/// Tolerance used by [`prox_certificate`].
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// One group of consecutive sorted positions sharing a common output value.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    /// Positions in the sorted vector, 0-based and half-open.
    pub range: Range<usize>,
    /// Mean of the sorted input magnitudes over the group.
    pub vbar: f64,
    /// Mean of the weights over the group.
    pub wbar: f64,
}

impl Group {
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn difference(&self) -> f64 {
        self.vbar - self.wbar
    }
}

/// Contiguous cover of `0..n` by groups, with strictly decreasing `v̄ⱼ − w̄ⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPartition {
    groups: Vec<Group>,
}

impl GroupPartition {
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group sizes `ϑⱼ`.
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Group::len).collect()
    }
}

/// Output of [`group_and_average`]: the expanded, piecewise-constant vectors and
/// the partition that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAverage {
    pub vbar: Vec<f64>,
    pub wbar: Vec<f64>,
    pub partition: GroupPartition,
}

#[derive(Debug, Clone, Copy)]
struct Block {
    start: usize,
    len: usize,
    vsum: f64,
    wsum: f64,
}

impl Block {
    fn vmean(&self) -> f64 {
        self.vsum / self.len as f64
    }

    fn wmean(&self) -> f64 {
        self.wsum / self.len as f64
    }

    // Must be computed exactly like the expanded output so that the
    // non-increasing property holds bit for bit.
    fn difference(&self) -> f64 {
        self.vmean() - self.wmean()
    }
}

/// Groups and averages sorted magnitudes against the weights.
///
/// `v_abs_sorted` must be non-negative and non-increasing. Each index is pushed
/// as a singleton block; the top two blocks are merged while the lower block's
/// difference is strictly smaller than the top block's. Ties are never merged.
pub fn group_and_average(v_abs_sorted: &[f64], w: &WeightVector) -> Result<GroupAverage> {
    check_len("sorted magnitudes vs weights", w.len(), v_abs_sorted.len())?;
    if let Some(index) = v_abs_sorted.iter().position(|v| v.is_nan() || *v < 0.0) {
        return Err(Error::NegativeInput { index });
    }
    if let Some(index) = v_abs_sorted.windows(2).position(|p| p[0] < p[1]) {
        return Err(Error::NotSortedInput { index });
    }
    Ok(group_and_average_unchecked(v_abs_sorted, w))
}

fn group_and_average_unchecked(v: &[f64], w: &[f64]) -> GroupAverage {
    let n = v.len();
    let mut stack: Vec<Block> = Vec::with_capacity(n);
    for (i, (&vi, &wi)) in v.iter().zip(w).enumerate() {
        let mut top = Block {
            start: i,
            len: 1,
            vsum: vi,
            wsum: wi,
        };
        while let Some(prev) = stack.last() {
            if prev.difference() < top.difference() {
                top = Block {
                    start: prev.start,
                    len: prev.len + top.len,
                    vsum: prev.vsum + top.vsum,
                    wsum: prev.wsum + top.wsum,
                };
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(top);
    }

    let mut vbar = Vec::with_capacity(n);
    let mut wbar = Vec::with_capacity(n);
    let groups = stack
        .iter()
        .map(|b| {
            let (vm, wm) = (b.vmean(), b.wmean());
            vbar.extend(std::iter::repeat_n(vm, b.len));
            wbar.extend(std::iter::repeat_n(wm, b.len));
            Group {
                range: b.start..b.start + b.len,
                vbar: vm,
                wbar: wm,
            }
        })
        .collect();
    GroupAverage {
        vbar,
        wbar,
        partition: GroupPartition { groups },
    }
}

/// Every intermediate quantity of a prox evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxTrace {
    /// `|v|` sorted non-increasingly.
    pub magnitudes: Vec<f64>,
    pub permutation: SortPermutation,
    pub grouping: GroupAverage,
    /// `max(v̄ − w̄, 0)`, in sorted order.
    pub sorted_output: Vec<f64>,
    pub output: Vec<f64>,
}

/// `prox_{Ω_w}(v)`.
pub fn prox(v: &[f64], w: &WeightVector) -> Result<Vec<f64>> {
    Ok(prox_trace(v, w)?.output)
}

/// [`prox`], keeping the sort, the grouping and the sorted output around.
pub fn prox_trace(v: &[f64], w: &WeightVector) -> Result<ProxTrace> {
    check_len("vector vs weights", w.len(), v.len())?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("prox input"));
    }
    let (sorted, permutation) = sort_by_abs_desc(v)?;
    let magnitudes: Vec<f64> = sorted.iter().map(|x| x.abs()).collect();
    let grouping = group_and_average_unchecked(&magnitudes, w);
    // clamp only after grouping is complete
    let sorted_output: Vec<f64> = grouping
        .vbar
        .iter()
        .zip(&grouping.wbar)
        .map(|(vb, wb)| (vb - wb).max(0.0))
        .collect();
    let mut output = vec![0.0; v.len()];
    for ((&idx, &b), &s) in permutation
        .forward()
        .iter()
        .zip(&sorted_output)
        .zip(&sorted)
    {
        // thresholded entries come out as +0, never -0
        output[idx] = if b > 0.0 { b * sign(s) } else { 0.0 };
    }
    Ok(ProxTrace {
        magnitudes,
        permutation,
        grouping,
        sorted_output,
        output,
    })
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `Ω_w(x) + ½‖x − v‖²`.
pub fn prox_objective(x: &[f64], v: &[f64], w: &WeightVector) -> Result<f64> {
    check_len("vector vs weights", w.len(), x.len())?;
    check_len("candidate vs input", v.len(), x.len())?;
    let quad: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(norm::evaluate_unchecked(x, w) + 0.5 * quad)
}

/// Result of [`prox_certificate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub optimal: bool,
    /// `Ω*(v − p) − 1`; non-positive up to rounding when dual-feasible.
    pub dual_excess: f64,
    /// `|⟨v − p, p⟩ − Ω(p)|`.
    pub complementarity: f64,
}

/// Checks `v − p ∈ ∂Ω(p)`, which holds exactly when `p = prox(v)`.
///
/// For a norm this is `Ω*(v − p) ≤ 1` together with `⟨v − p, p⟩ = Ω(p)`; both
/// are tested with tolerance [`CERTIFICATE_TOL`] (relative to `1 + Ω(p)` for the
/// second).
pub fn prox_certificate(v: &[f64], p: &[f64], w: &WeightVector) -> Result<Certificate> {
    check_len("vector vs weights", w.len(), v.len())?;
    check_len("candidate vs input", v.len(), p.len())?;
    let residual: Vec<f64> = v.iter().zip(p).map(|(a, b)| a - b).collect();
    let dual = norm::dual_norm_unchecked(&residual, w);
    let omega = norm::evaluate_unchecked(p, w);
    let inner: f64 = residual.iter().zip(p).map(|(r, x)| r * x).sum();
    let dual_excess = dual - 1.0;
    let complementarity = (inner - omega).abs();
    Ok(Certificate {
        optimal: dual_excess <= CERTIFICATE_TOL
            && complementarity <= CERTIFICATE_TOL * (1.0 + omega),
        dual_excess,
        complementarity,
    })
}

/// Slow reference prox: subgradient descent on the prox objective from `v`
/// with steps `c/√k`, `c = ‖v‖∞`, keeping the best iterate.
pub fn prox_oracle_slow(v: &[f64], w: &WeightVector) -> Result<Vec<f64>> {
    prox_oracle_slow_with(v, w, ORACLE_ITERATIONS)
}

pub const ORACLE_ITERATIONS: usize = 100_000;

/// Largest dimension accepted by the subgradient oracle.
pub const ORACLE_MAX_DIM: usize = 50;

pub fn prox_oracle_slow_with(v: &[f64], w: &WeightVector, iterations: usize) -> Result<Vec<f64>> {
    check_len("vector vs weights", w.len(), v.len())?;
    if v.len() > ORACLE_MAX_DIM {
        return Err(Error::TooLarge {
            n: v.len(),
            max: ORACLE_MAX_DIM,
        });
    }
    let c = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut x = v.to_vec();
    let mut best = x.clone();
    let mut best_obj = prox_objective(&x, v, w)?;
    if c == 0.0 {
        return Ok(best);
    }
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut g = vec![0.0; n];
    for k in 1..=iterations {
        // a subgradient of Ω at x: weights placed along the magnitude order of x
        order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
        for (&idx, &wi) in order.iter().zip(w.iter()) {
            g[idx] = wi * sign(x[idx]);
        }
        let step = c / (k as f64).sqrt();
        for i in 0..n {
            x[i] -= step * (x[i] - v[i] + g[i]);
        }
        let obj = prox_objective(&x, v, w)?;
        if obj < best_obj {
            best_obj = obj;
            best.copy_from_slice(&x);
        }
    }
    Ok(best)
}

/// `|v̀ᵢ| − πᵢ ≥ |v̀ᵢ₊₁| − πᵢ₊₁` for every `i`.
///
/// When this holds, soft-thresholding `|v̀|` by `π` keeps the sorted order.
pub fn check_lemma3_order(v_sorted: &[f64], pi: &[f64]) -> bool {
    v_sorted.len() == pi.len()
        && v_sorted
            .windows(2)
            .zip(pi.windows(2))
            .all(|(v, p)| v[0].abs() - p[0] >= v[1].abs() - p[1])
}

/// Counts groups with `v̄ⱼ − w̄ⱼ ≥ 0` that could be split at some `r` into a
/// head whose mean of `|v̀| − w` is larger than the tail's mean.
///
/// Such a split would give two groups with different values that still respect
/// the sorted output order, so a correct grouping has none. `slack` is a
/// relative tolerance for rounding in the means.
pub fn coherence_violations(
    v_abs_sorted: &[f64],
    w: &[f64],
    partition: &GroupPartition,
    slack: f64,
) -> usize {
    let mut violations = 0;
    for group in partition.groups() {
        if group.difference() < 0.0 {
            continue;
        }
        let d: Vec<f64> = group
            .range
            .clone()
            .map(|i| v_abs_sorted[i] - w[i])
            .collect();
        let total: f64 = d.iter().sum();
        let scale: f64 = group
            .range
            .clone()
            .map(|i| v_abs_sorted[i] + w[i])
            .fold(0.0, f64::max);
        let mut head = 0.0;
        for r in 0..d.len().saturating_sub(1) {
            head += d[r];
            let head_mean = head / (r + 1) as f64;
            let tail_mean = (total - head) / (d.len() - r - 1) as f64;
            if head_mean > tail_mean + slack * (1.0 + scale) {
                violations += 1;
            }
        }
    }
    violations
}
