//! JSON report written by `owl solve`.
//!
//! Schema (keys in this order):
//!
//! ```text
//! {
//!   "input":        { "rows": int, "cols": int, "weights": "<weight spec>" },
//!   "algorithm":    "ista" | "fista",
//!   "solution":     [float, ...],
//!   "objective":    float,
//!   "duality_gap":  float,
//!   "relative_gap": float,
//!   "iterations":   int,
//!   "converged":    bool,
//!   "clusters":     [{ "indices": [int, ...], "magnitude": float, "zero": bool }, ...],
//!   "wall_time_ms": float
//! }
//! ```

use serde::{Deserialize, Serialize};

use owl_core::solver::Cluster;
use owl_core::SolveResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub rows: usize,
    pub cols: usize,
    pub weights: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub indices: Vec<usize>,
    pub magnitude: f64,
    pub zero: bool,
}

impl From<&Cluster> for ClusterReport {
    fn from(c: &Cluster) -> Self {
        Self {
            indices: c.indices.clone(),
            magnitude: c.magnitude,
            zero: c.zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: InputDigest,
    pub algorithm: String,
    pub solution: Vec<f64>,
    pub objective: f64,
    pub duality_gap: f64,
    pub relative_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub clusters: Vec<ClusterReport>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(
        input: InputDigest,
        algorithm: &str,
        result: &SolveResult,
        wall_time_ms: f64,
    ) -> Self {
        Self {
            input,
            algorithm: algorithm.to_string(),
            solution: result.x.clone(),
            objective: result.objective,
            duality_gap: result.duality_gap,
            relative_gap: result.relative_gap,
            iterations: result.iterations,
            converged: result.converged,
            clusters: result.clusters.iter().map(ClusterReport::from).collect(),
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
