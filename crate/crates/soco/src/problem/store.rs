use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Evaluates a hitting cost at `(slot, point)` to one or more samples.
pub type CostFn = Arc<dyn Fn(usize, &[f64]) -> Vec<f64> + Send + Sync>;

/// Collapses sampled (uncertain) cost values into a single value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reducer {
    #[default]
    Mean,
    Median,
    Quantile { q: f64 },
}

impl Reducer {
    pub fn reduce(&self, samples: &[f64]) -> f64 {
        match samples {
            [] => f64::NAN,
            [v] => *v,
            _ => match self {
                Reducer::Mean => {
                    if samples.iter().any(|v| v.is_infinite()) {
                        f64::INFINITY
                    } else {
                        samples.iter().sum::<f64>() / samples.len() as f64
                    }
                }
                Reducer::Median => quantile(samples, 0.5),
                Reducer::Quantile { q } => quantile(samples, *q),
            },
        }
    }
}

/// Linear-interpolation quantile of a sample.
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi || sorted[lo] == sorted[hi] {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// A hitting cost that became known at slot `arrival`.
#[derive(Clone)]
pub struct SingleHittingCost {
    pub arrival: usize,
    eval: CostFn,
}

impl SingleHittingCost {
    pub fn new(arrival: usize, eval: CostFn) -> Self {
        SingleHittingCost { arrival, eval }
    }

    pub fn samples(&self, t: usize, x: &[f64]) -> Vec<f64> {
        (self.eval)(t, x)
    }
}

impl fmt::Debug for SingleHittingCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SingleHittingCost").field("arrival", &self.arrival).finish_non_exhaustive()
    }
}

/// Hitting costs keyed by the slot in which they arrived.
///
/// The cost of slot `t` is given by the latest entry that arrived no later than `t`.
#[derive(Clone, Debug, Default)]
pub struct HittingCostStore {
    entries: BTreeMap<usize, SingleHittingCost>,
    pub reducer: Reducer,
}

impl HittingCostStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// A store with one certain cost function known from slot 1.
    pub fn certain(f: impl Fn(usize, &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        let mut store = Self::new();
        store.insert(1, Arc::new(move |t, x| vec![f(t, x)]));
        store
    }

    pub fn with_reducer(mut self, reducer: Reducer) -> Self {
        self.reducer = reducer;
        self
    }

    pub fn insert(&mut self, arrival: usize, eval: CostFn) {
        self.entries.insert(arrival, SingleHittingCost::new(arrival, eval));
    }

    /// Applies `g` to the samples of every entry.
    pub fn map(&self, g: impl Fn(usize, &[f64], Vec<f64>) -> Vec<f64> + Send + Sync + 'static) -> Self {
        let g = Arc::new(g);
        let entries = self
            .entries
            .iter()
            .map(|(arrival, entry)| {
                let inner = entry.eval.clone();
                let g = g.clone();
                let eval: CostFn = Arc::new(move |t, x| g(t, x, inner(t, x)));
                (*arrival, SingleHittingCost::new(*arrival, eval))
            })
            .collect();
        HittingCostStore { entries, reducer: self.reducer }
    }

    /// Arrival slots of all entries.
    pub fn arrivals(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn resolve(&self, t: usize) -> Result<&SingleHittingCost> {
        self.entries.range(..=t).next_back().map(|(_, e)| e).ok_or(SocoError::NoCostAvailable(t))
    }

    pub fn samples(&self, t: usize, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.resolve(t)?.samples(t, x))
    }

    /// Reduced cost of slot `t` at `x`.
    pub fn eval(&self, t: usize, x: &[f64]) -> Result<f64> {
        let samples = self.samples(t, x)?;
        if samples.is_empty() {
            return Err(SocoError::NonFinite(format!("empty sample list at slot {t}")));
        }
        Ok(self.reducer.reduce(&samples))
    }
}
