//! Shared numeric building blocks: convex minimization, root finding,
//! quadrature and finite-difference derivatives.

mod derivative;
mod minimize;
mod quadrature;
mod root;

pub use derivative::{derivative1, derivative2};
pub use minimize::{
    minimize, minimize_scalar, minimizer_extremes, ConvexProgram, Minimum, ScalarMinimum,
};
pub use quadrature::{integrate_finite, integrate_semi_infinite, Direction};
pub use root::find_root;

use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

/// Working precision of numeric sub-procedures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub epsilon: f64,
    /// Interpret `epsilon` relative to the magnitude of the objective.
    pub relative: bool,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { epsilon: 1e-2, relative: true }
    }
}

impl Tolerance {
    pub fn new(epsilon: f64, relative: bool) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(SocoError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Tolerance { epsilon, relative })
    }

    /// Absolute tolerance for an objective of the given magnitude.
    pub fn absolute_for(&self, magnitude: f64) -> f64 {
        if self.relative {
            self.epsilon * magnitude.abs().max(1.0)
        } else {
            self.epsilon
        }
    }

    /// Snaps `x` to the nearest integer when it lies within `epsilon` of it.
    pub fn snap(&self, x: f64) -> f64 {
        let r = x.round();
        if (x - r).abs() <= self.epsilon {
            r
        } else {
            x
        }
    }

    /// Ceiling after snapping to precision.
    pub fn ceil(&self, x: f64) -> f64 {
        self.snap(x).ceil()
    }

    /// Floor after snapping to precision.
    pub fn floor(&self, x: f64) -> f64 {
        self.snap(x).floor()
    }
}

/// Evaluation budget of [`minimize`] per decision variable.
pub const MINIMIZE_BUDGET: usize = 10_000;
/// Iteration budget of [`find_root`].
pub const ROOT_BUDGET: usize = 200;
/// Node budget of the quadratures.
pub const QUADRATURE_BUDGET: usize = 1_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_rounds_near_integers() {
        let tol = Tolerance::default();
        assert_eq!(tol.ceil(1e-3), 0.0);
        assert_eq!(tol.ceil(0.5), 1.0);
        assert_eq!(tol.floor(2.995), 3.0);
    }

    #[test]
    fn rejects_non_positive_epsilon() {
        assert!(Tolerance::new(0.0, false).is_err());
        assert!(Tolerance::new(-1.0, true).is_err());
    }
}
