//! Offline solvers: exact and approximate graph searches, the uni-dimensional
//! fractional recursions, static optima and a brute-force oracle.

mod bcp;
mod brute;
mod fractional;
mod graph;
mod graph1d;
mod static_opt;
mod value;

pub use bcp::backward_capacity_provisioning;
pub use brute::{brute_force_offline, BRUTE_FORCE_LIMIT};
pub use fractional::{fractional_offline, window_optimum};
pub use graph::{approx_values, graph_search_md, GraphSearch, GRAPH_SIZE_LIMIT};
pub use graph1d::graph_search_1d;
pub use static_opt::static_optimum;
pub use value::{Charge, GridRecursion, ValueRecursion};

use crate::error::{Result, SocoError};
use crate::problem::{Config, Schedule, SscoProblem};
use serde::{Deserialize, Serialize};

/// Options shared by the offline solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSearchOptions {
    /// Approximation parameter; exact search when absent.
    pub gamma: Option<f64>,
    /// First slot to solve.
    pub initial_slot: usize,
    /// Configuration before `initial_slot` (zero by default).
    pub initial_config: Option<Config>,
    /// Pay switching costs on decreases (including the final return to zero).
    pub inverted: bool,
    /// Bound on the total movement (fractional solver only).
    pub l_constraint: Option<f64>,
    pub alpha: f64,
}

impl Default for GraphSearchOptions {
    fn default() -> Self {
        GraphSearchOptions {
            gamma: None,
            initial_slot: 1,
            initial_config: None,
            inverted: false,
            l_constraint: None,
            alpha: 1.0,
        }
    }
}

impl GraphSearchOptions {
    pub fn approximate(gamma: f64) -> Self {
        GraphSearchOptions { gamma: Some(gamma), ..Default::default() }
    }

    pub fn from_state(initial_slot: usize, initial_config: Config) -> Self {
        GraphSearchOptions { initial_slot, initial_config: Some(initial_config), ..Default::default() }
    }

    pub(crate) fn validate(&self, problem: &SscoProblem) -> Result<Config> {
        if let Some(g) = self.gamma {
            if !(g > 1.0) {
                return Err(SocoError::InvalidArgument(format!("gamma must exceed 1, got {g}")));
            }
        }
        if self.alpha < 1.0 {
            return Err(SocoError::InvalidArgument(format!("alpha must be at least 1, got {}", self.alpha)));
        }
        if self.initial_slot == 0 {
            return Err(SocoError::InvalidArgument("slots are numbered from 1".into()));
        }
        let x0 = self.initial_config.clone().unwrap_or_else(|| Config::zeros(problem.dim));
        if x0.dim() != problem.dim {
            return Err(SocoError::InvalidArgument("initial configuration has wrong dimension".into()));
        }
        Ok(x0)
    }
}

/// An offline schedule with its cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineSolution {
    /// Configurations of slots `initial_slot..=T`.
    pub schedule: Schedule,
    pub cost: f64,
}

/// Cost of `schedule` covering slots `t0..` starting from `x0`.
pub(crate) fn schedule_cost(
    problem: &SscoProblem,
    schedule: &Schedule,
    opts: &GraphSearchOptions,
    x0: &Config,
) -> Result<f64> {
    let mut prev: &[f64] = x0;
    let mut hitting = 0.0;
    let mut movement = 0.0;
    let last = schedule.len();
    for (i, x) in schedule.iter().enumerate() {
        hitting += problem.hit(opts.initial_slot + i, x)?;
        movement += opts.alpha * switching(problem, prev, x, opts.inverted);
        if opts.inverted && i + 1 == last {
            movement += opts.alpha * switching(problem, x, &vec![0.0; x.len()], true);
        }
        prev = x;
    }
    Ok(hitting + movement)
}

pub(crate) fn switching(problem: &SscoProblem, prev: &[f64], next: &[f64], inverted: bool) -> f64 {
    problem
        .switching
        .iter()
        .zip(prev.iter().zip(next))
        .map(|(b, (p, n))| b * if inverted { (p - n).max(0.0) } else { (n - p).max(0.0) })
        .sum()
}

pub(crate) fn require_integral_bounds(problem: &SscoProblem) -> Result<Vec<usize>> {
    problem
        .bounds
        .iter()
        .map(|m| {
            if m.fract() != 0.0 || !m.is_finite() {
                Err(SocoError::InvalidArgument(format!("integral solvers need integer bounds, got {m}")))
            } else {
                Ok(*m as usize)
            }
        })
        .collect()
}
