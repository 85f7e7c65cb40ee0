//! Norm and dual-norm evaluation.
//!
//! `Ω_w(x) = Σ wᵢ·|x̀ᵢ|` where `x̀` is `x` sorted by non-increasing magnitude.
//! Its dual is `Ω*_w(x) = max_k (|x̀₁| + … + |x̀ₖ|) / (w₁ + … + wₖ)`.

use crate::error::{check_len, Error, Result};
use crate::weights::WeightVector;

/// Largest dimension accepted by [`dual_norm_by_vertex_enumeration`].
pub const MAX_ENUMERATION_DIM: usize = 8;

/// Permutation sorting a vector by non-increasing magnitude.
///
/// `forward[i]` is the original index of the entry at sorted position `i`, and
/// `inverse[forward[i]] == i`. Ties keep ascending original index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortPermutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl SortPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// Builds the permutation from its forward map. Returns `None` if `forward`
    /// is not a permutation of `0..n`.
    pub fn from_forward(forward: Vec<usize>) -> Option<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &f) in forward.iter().enumerate() {
            if f >= n || inverse[f] != usize::MAX {
                return None;
            }
            inverse[f] = i;
        }
        Some(Self { forward, inverse })
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }
}

fn magnitude_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    // stable: equal magnitudes keep ascending index
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()));
    order
}

/// Sorts `x` by non-increasing magnitude, keeping signs.
pub fn sort_by_abs_desc(x: &[f64]) -> Result<(Vec<f64>, SortPermutation)> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    let forward = magnitude_order(x);
    let sorted = forward.iter().map(|&i| x[i]).collect();
    let mut inverse = vec![0; x.len()];
    for (i, &f) in forward.iter().enumerate() {
        inverse[f] = i;
    }
    Ok((sorted, SortPermutation { forward, inverse }))
}

/// Undoes [`sort_by_abs_desc`]: `out[perm.forward[i]] = sorted[i]`.
pub fn unsort(sorted: &[f64], perm: &SortPermutation) -> Result<Vec<f64>> {
    check_len("sorted vector vs permutation", perm.len(), sorted.len())?;
    Ok(perm.inverse.iter().map(|&i| sorted[i]).collect())
}

/// Magnitudes of `x` in non-increasing order.
pub(crate) fn sorted_magnitudes(x: &[f64]) -> Vec<f64> {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    mags
}

/// `Ω_w(x)`.
pub fn evaluate(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_len("vector vs weights", w.len(), x.len())?;
    Ok(evaluate_unchecked(x, w))
}

pub(crate) fn evaluate_unchecked(x: &[f64], w: &[f64]) -> f64 {
    sorted_magnitudes(x)
        .iter()
        .zip(w)
        .map(|(m, wi)| m * wi)
        .sum()
}

/// `Ω*_w(x)`, via one sort and two running prefix sums.
///
/// Prefixes whose weight sum is zero are skipped; with `w₁ > 0` that never
/// happens.
pub fn dual_norm(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_len("vector vs weights", w.len(), x.len())?;
    Ok(dual_norm_unchecked(x, w))
}

pub(crate) fn dual_norm_unchecked(x: &[f64], w: &[f64]) -> f64 {
    let mut best = 0.0_f64;
    let mut mag_sum = 0.0;
    let mut weight_sum = 0.0;
    for (m, wi) in sorted_magnitudes(x).iter().zip(w) {
        mag_sum += m;
        weight_sum += wi;
        if weight_sum > 0.0 {
            best = best.max(mag_sum / weight_sum);
        }
    }
    best
}

/// All vertices of the unit ball `{u : Ω_w(u) ≤ 1}` candidates: for every `k`,
/// every placement of `k` entries equal to `τₖ = 1/(w₁+…+wₖ)` and every sign
/// pattern on them.
///
/// For some weights (for instance constant ones) a few of these points are not
/// extreme, but they all lie on the unit sphere, so maximizing a linear function
/// over them still gives the support function.
pub fn unit_ball_vertex_candidates(w: &WeightVector) -> Result<Vec<Vec<f64>>> {
    let n = w.len();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION_DIM,
        });
    }
    let mut prefix = Vec::with_capacity(n);
    let mut acc = 0.0;
    for wi in w.iter() {
        acc += wi;
        prefix.push(acc);
    }
    let mut vertices = Vec::new();
    for support in 1u32..(1 << n) {
        let k = support.count_ones() as usize;
        let tau = 1.0 / prefix[k - 1];
        let positions: Vec<usize> = (0..n).filter(|&i| support & (1 << i) != 0).collect();
        for signs in 0u32..(1 << k) {
            let mut v = vec![0.0; n];
            for (bit, &pos) in positions.iter().enumerate() {
                v[pos] = if signs & (1 << bit) != 0 { -tau } else { tau };
            }
            vertices.push(v);
        }
    }
    Ok(vertices)
}

/// `Ω*_w(x)` as the maximum of `⟨u, x⟩` over every unit-ball vertex, explicitly
/// enumerated. Exponential in `n`; intended as a check on [`dual_norm`].
pub fn dual_norm_by_vertex_enumeration(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_len("vector vs weights", w.len(), x.len())?;
    let vertices = unit_ball_vertex_candidates(w)?;
    Ok(vertices
        .iter()
        .map(|u| u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
        .fold(0.0, f64::max))
}

/// Vertices of a 2-D unit ball, counter-clockwise from the positive x axis.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitBall2d {
    pub vertices: Vec<[f64; 2]>,
    /// Set when `w₂ = 0`: the axis points and diagonal points are then all on
    /// the ℓ∞ sphere and the axis points are not extreme.
    pub degenerate: bool,
}

/// Unit ball of `Ω_w` for `n = 2`: `(±τ₁, 0)`, `(0, ±τ₁)`, `(±τ₂, ±τ₂)`.
///
/// Equal weights give the ℓ1 diamond (diagonal points dropped, they are edge
/// midpoints). A zero second weight gives the ℓ∞ square; all eight points are
/// returned and the result is flagged degenerate.
pub fn unit_ball_vertices_2d(w: &WeightVector) -> Result<UnitBall2d> {
    check_len("weights for a 2-D unit ball", 2, w.len())?;
    let tau1 = 1.0 / w[0];
    let tau2 = 1.0 / (w[0] + w[1]);
    let with_diagonals = w[0] != w[1];
    let mut vertices = Vec::with_capacity(8);
    let axes = [[tau1, 0.0], [0.0, tau1], [-tau1, 0.0], [0.0, -tau1]];
    let diagonals = [[tau2, tau2], [-tau2, tau2], [-tau2, -tau2], [tau2, -tau2]];
    for q in 0..4 {
        vertices.push(axes[q]);
        if with_diagonals {
            vertices.push(diagonals[q]);
        }
    }
    Ok(UnitBall2d {
        vertices,
        degenerate: w[1] == 0.0,
    })
}
