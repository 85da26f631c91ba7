//! Problem instances, schedules, cost evaluation, reductions and metrics.

mod dispatch;
mod evaluate;
mod instance;
mod metrics;
mod norm;
mod reduce;
mod store;

pub use dispatch::{dispatch, Dispatch};
pub use evaluate::{evaluate_cost, CostBreakdown, EvalOptions, SlotCost};
pub use instance::{
    LoadCost, Problem, ProblemInstance, ProblemVariant, SbloProblem, ScoProblem, SloProblem, SscoProblem,
};
pub use metrics::{metrics, Metrics};
pub use norm::{Norm, NormKind, NormModifier};
pub use reduce::{reduce_slo_to_sblo, reduce_ssco_to_sco};
pub use store::{quantile, CostFn, HittingCostStore, Reducer, SingleHittingCost};

use serde::{Deserialize, Serialize};
use std::ops::{Deref, DerefMut};

/// Slack used when checking bounds and load coverage.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// A point of the decision space.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Config(pub Vec<f64>);

impl Config {
    pub fn zeros(d: usize) -> Self {
        Config(vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl Deref for Config {
    type Target = Vec<f64>;
    fn deref(&self) -> &Vec<f64> {
        &self.0
    }
}

impl DerefMut for Config {
    fn deref_mut(&mut self) -> &mut Vec<f64> {
        &mut self.0
    }
}

impl From<Vec<f64>> for Config {
    fn from(v: Vec<f64>) -> Self {
        Config(v)
    }
}

/// A sequence of configurations; index `i` holds slot `i + 1`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule(pub Vec<Config>);

impl Schedule {
    pub fn new() -> Self {
        Schedule(Vec::new())
    }

    /// Uni-dimensional schedule from scalar values.
    pub fn from_scalars(values: &[f64]) -> Self {
        Schedule(values.iter().map(|v| Config(vec![*v])).collect())
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        Schedule(rows.into_iter().map(Config).collect())
    }

    pub fn horizon(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.0.first().map(|c| c.dim())
    }

    /// Configuration at slot `t`, with the zero configuration before slot 1.
    pub fn at(&self, t: usize, d: usize) -> Config {
        if t == 0 {
            Config::zeros(d)
        } else {
            self.0[t - 1].clone()
        }
    }

    /// Values of dimension `k` over time.
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.0.iter().map(|c| c[k]).collect()
    }
}

impl Deref for Schedule {
    type Target = Vec<Config>;
    fn deref(&self) -> &Vec<Config> {
        &self.0
    }
}

impl DerefMut for Schedule {
    fn deref_mut(&mut self) -> &mut Vec<Config> {
        &mut self.0
    }
}

/// `(x)^+`
pub fn pos(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}
