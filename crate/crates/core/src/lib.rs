//! Decreasing weighted sorted ℓ1 norm (also known as the OWL norm, with OSCAR as
//! its best-known instance).
//!
//! The crate provides:
//!
//! - [`weights`]: validated non-increasing weight vectors and the OSCAR, ℓ1 and
//!   ℓ∞ constructors.
//! - [`norm`]: the norm, its dual norm (top-k partial sum formula), a brute-force
//!   vertex enumeration of the unit ball used as an oracle, and the 2-D unit ball.
//! - [`prox`]: the exact Moreau proximity operator through sign/sort reduction and
//!   a stack-based group-and-average pass, with an optimality certificate.
//! - [`solver`]: ISTA/FISTA for `½‖y − Ax‖² + Ω(x)` with a duality-gap stopping rule.

pub mod error;
pub mod norm;
pub mod prox;
pub mod solver;
pub mod weights;

pub use error::{Error, Result, WeightError};
pub use norm::{dual_norm, evaluate, sort_by_abs_desc, unsort, SortPermutation};
pub use prox::{group_and_average, prox, prox_certificate, GroupPartition};
pub use solver::{solve, Algorithm, Problem, SolveResult, SolverConfig, StepMode};
pub use weights::WeightVector;
