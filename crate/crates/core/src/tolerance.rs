//! Tolerance policy shared by every invariant check.

use serde::{Deserialize, Serialize};

/// Default absolute tolerance for invariant checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative tolerance on the slack of an inequality used to flag equality.
pub const DEFAULT_EQUALITY_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance for hypotheses and soundness (`slack ≥ -tol`).
    pub tol: f64,
    /// Equality is reported when `|slack| ≤ equality_rel · max(1, bound)`.
    pub equality_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            equality_rel: DEFAULT_EQUALITY_REL,
        }
    }
}

impl Tolerances {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn is_equality(&self, slack: f64, bound: f64) -> bool {
        slack.abs() <= self.equality_rel * bound.abs().max(1.0)
    }
}
