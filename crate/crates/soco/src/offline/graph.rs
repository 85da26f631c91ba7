//! Layered shortest-path search over integral configurations.
//!
//! Each slot has a power-up layer followed by a power-down layer. Power-up edges
//! increase one dimension to its next value, power-down edges decrease one
//! dimension, and the edge from a power-up vertex to the power-down vertex of the
//! same configuration carries the hitting cost. Power-down vertices connect to
//! the power-up vertex of the same configuration in the next slot.

use super::{require_integral_bounds, schedule_cost, GraphSearchOptions, OfflineSolution};
use crate::error::{Result, SocoError};
use crate::problem::{Config, Schedule, SscoProblem};

/// Maximum number of vertices per layer.
pub const GRAPH_SIZE_LIMIT: usize = 50_000_000;

/// Candidate values `{0, m} ∪ {⌊γ^i⌋, ⌈γ^i⌉}` within `[0, m]`.
pub fn approx_values(m: usize, gamma: f64) -> Vec<usize> {
    let mut values = vec![0, m];
    let mut p = 1.0f64;
    while p <= m as f64 {
        values.push(p.floor() as usize);
        let c = p.ceil() as usize;
        if c <= m {
            values.push(c);
        }
        p *= gamma;
    }
    values.sort_unstable();
    values.dedup();
    values
}

/// Incremental graph search; slots are appended one at a time.
#[derive(Debug, Clone)]
pub struct GraphSearch {
    values: Vec<Vec<f64>>,
    strides: Vec<usize>,
    size: usize,
    up_cost: Vec<f64>,
    down_cost: Vec<f64>,
    /// Costs of the latest power-down layer.
    down: Vec<f64>,
    /// Predecessors per slot: 0 is the layer transition (or the hitting-cost edge),
    /// `l + 1` the edge along dimension `l`.
    up_preds: Vec<Vec<u16>>,
    down_preds: Vec<Vec<u16>>,
    initial_slot: usize,
}

impl GraphSearch {
    /// Search over the given sorted per-dimension values, each containing zero.
    pub fn new(
        values: Vec<Vec<f64>>,
        switching: &[f64],
        opts: &GraphSearchOptions,
        initial: &Config,
    ) -> Result<Self> {
        let d = values.len();
        if d > u16::MAX as usize - 1 {
            return Err(SocoError::TooLarge { size: d as f64, limit: (u16::MAX - 1) as f64 });
        }
        let mut values = values;
        for (k, vs) in values.iter_mut().enumerate() {
            if !vs.contains(&initial[k]) {
                vs.push(initial[k]);
                vs.sort_by(|a, b| a.total_cmp(b));
            }
        }
        let size = values.iter().try_fold(1usize, |acc, vs| acc.checked_mul(vs.len()));
        let size = match size {
            Some(s) if s <= GRAPH_SIZE_LIMIT => s,
            _ => {
                let approx: f64 = values.iter().map(|v| v.len() as f64).product();
                return Err(SocoError::TooLarge { size: approx, limit: GRAPH_SIZE_LIMIT as f64 });
            }
        };
        let mut strides = vec![1usize; d];
        for k in (0..d.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * values[k + 1].len();
        }
        let scaled: Vec<f64> = switching.iter().map(|b| b * opts.alpha).collect();
        let (up_cost, down_cost) =
            if opts.inverted { (vec![0.0; d], scaled) } else { (scaled, vec![0.0; d]) };
        let mut search = GraphSearch {
            values,
            strides,
            size,
            up_cost,
            down_cost,
            down: Vec::new(),
            up_preds: Vec::new(),
            down_preds: Vec::new(),
            initial_slot: opts.initial_slot,
        };
        let start = search.index_of(initial);
        let mut op = vec![f64::INFINITY; size];
        op[start] = 0.0;
        search.down = search.down_pass(&op).0;
        Ok(search)
    }

    /// Exact search over all integral configurations of the problem.
    pub fn exact(problem: &SscoProblem, opts: &GraphSearchOptions, initial: &Config) -> Result<Self> {
        let bounds = require_integral_bounds(problem)?;
        let values = bounds.iter().map(|m| (0..=*m).map(|v| v as f64).collect()).collect();
        Self::new(values, &problem.switching, opts, initial)
    }

    /// Search restricted to the approximate value sets for `gamma`.
    pub fn approximate(problem: &SscoProblem, gamma: f64, opts: &GraphSearchOptions, initial: &Config) -> Result<Self> {
        let bounds = require_integral_bounds(problem)?;
        let values = bounds.iter().map(|m| approx_values(*m, gamma).into_iter().map(|v| v as f64).collect()).collect();
        Self::new(values, &problem.switching, opts, initial)
    }

    pub fn vertices(&self) -> usize {
        self.size
    }

    /// Number of slots searched so far.
    pub fn slots(&self) -> usize {
        self.up_preds.len()
    }

    fn digit(&self, v: usize, k: usize) -> usize {
        (v / self.strides[k]) % self.values[k].len()
    }

    fn config(&self, v: usize) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.values[k][self.digit(v, k)]).collect()
    }

    fn index_of(&self, x: &[f64]) -> usize {
        x.iter()
            .enumerate()
            .map(|(k, value)| {
                let i = self.values[k].iter().position(|v| v == value).expect("value present");
                i * self.strides[k]
            })
            .sum()
    }

    fn down_pass(&self, op: &[f64]) -> (Vec<f64>, Vec<u16>) {
        let d = self.values.len();
        let mut down = op.to_vec();
        let mut preds = vec![0u16; self.size];
        for v in (0..self.size).rev() {
            for l in 0..d {
                let i = self.digit(v, l);
                if i + 1 < self.values[l].len() {
                    let u = v + self.strides[l];
                    let cand = down[u] + self.down_cost[l] * (self.values[l][i + 1] - self.values[l][i]);
                    if cand < down[v] {
                        down[v] = cand;
                        preds[v] = (l + 1) as u16;
                    }
                }
            }
        }
        (down, preds)
    }

    /// Appends the next slot with hitting cost `f`.
    pub fn extend(&mut self, f: impl Fn(&[f64]) -> f64) {
        let d = self.values.len();
        let mut up = vec![f64::INFINITY; self.size];
        let mut up_preds = vec![0u16; self.size];
        for v in 0..self.size {
            // Powering up within this slot wins ties against arriving powered up, so
            // optimal schedules power up as late as possible.
            let mut best = f64::INFINITY;
            let mut pred = 0u16;
            for l in 0..d {
                let i = self.digit(v, l);
                if i > 0 {
                    let u = v - self.strides[l];
                    let cand = up[u] + self.up_cost[l] * (self.values[l][i] - self.values[l][i - 1]);
                    if cand < best {
                        best = cand;
                        pred = (l + 1) as u16;
                    }
                }
            }
            if self.down[v] < best {
                best = self.down[v];
                pred = 0;
            }
            up[v] = best;
            up_preds[v] = pred;
        }
        let op: Vec<f64> = (0..self.size)
            .map(|v| if up[v].is_finite() { up[v] + f(&self.config(v)) } else { f64::INFINITY })
            .collect();
        let (down, down_preds) = self.down_pass(&op);
        self.down = down;
        self.up_preds.push(up_preds);
        self.down_preds.push(down_preds);
    }

    /// Cost of the best path ending in the zero configuration after the latest slot.
    pub fn value(&self) -> f64 {
        self.down[0]
    }

    /// Cost of ending the latest slot's power-down layer in each configuration.
    pub fn down_layer(&self) -> &[f64] {
        &self.down
    }

    /// Configuration of the latest slot on the best path.
    pub fn last_config(&self) -> Option<Config> {
        let n = self.slots();
        if n == 0 {
            return None;
        }
        let mut v = 0;
        while self.down_preds[n - 1][v] != 0 {
            v += self.strides[self.down_preds[n - 1][v] as usize - 1];
        }
        Some(Config(self.config(v)))
    }

    /// Best schedule of all searched slots.
    pub fn schedule(&self) -> Schedule {
        let n = self.slots();
        let mut out = vec![Config::default(); n];
        let mut v = 0;
        for s in (0..n).rev() {
            while self.down_preds[s][v] != 0 {
                v += self.strides[self.down_preds[s][v] as usize - 1];
            }
            out[s] = Config(self.config(v));
            while self.up_preds[s][v] != 0 {
                v -= self.strides[self.up_preds[s][v] as usize - 1];
            }
        }
        Schedule(out)
    }

    pub fn initial_slot(&self) -> usize {
        self.initial_slot
    }
}

/// Optimal (or, with `gamma`, approximate) integral schedule of a multi-dimensional instance.
pub fn graph_search_md(problem: &SscoProblem, opts: &GraphSearchOptions) -> Result<OfflineSolution> {
    let x0 = opts.validate(problem)?;
    let mut search = match opts.gamma {
        Some(g) => GraphSearch::approximate(problem, g, opts, &x0)?,
        None => GraphSearch::exact(problem, opts, &x0)?,
    };
    for t in opts.initial_slot..=problem.horizon {
        let f = problem.slot_fn_md(t)?;
        search.extend(f);
    }
    if !search.value().is_finite() && search.slots() > 0 {
        return Err(SocoError::Infeasible("every integral schedule has infinite cost".into()));
    }
    let schedule = search.schedule();
    let cost = schedule_cost(problem, &schedule, opts, &x0)?;
    Ok(OfflineSolution { schedule, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::HittingCostStore;

    #[test]
    fn approx_value_set() {
        assert_eq!(approx_values(10, 2.0), vec![0, 1, 2, 4, 8, 10]);
        assert_eq!(approx_values(5, 1.5), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn single_slot_two_dimensions() {
        // f(x) = 10 unless x = (2, 0), which costs 0; powering up costs 1 + 1.
        let p = SscoProblem::new(
            1,
            vec![2.0, 1.0],
            vec![1.0, 3.0],
            HittingCostStore::certain(|_, x| if x == [2.0, 0.0] { 0.0 } else { 10.0 - x[1] }),
        )
        .unwrap()
        .integral();
        let s = graph_search_md(&p, &GraphSearchOptions::default()).unwrap();
        assert_eq!(s.schedule, Schedule::from_rows(vec![vec![2.0, 0.0]]));
        assert_eq!(s.cost, 2.0);
    }

    #[test]
    fn zero_costs() {
        let p = SscoProblem::new(3, vec![2.0, 2.0], vec![1.0, 1.0], HittingCostStore::certain(|_, _| 0.0))
            .unwrap()
            .integral();
        let s = graph_search_md(&p, &GraphSearchOptions::default()).unwrap();
        assert!(s.schedule.iter().all(|c| c.iter().all(|v| *v == 0.0)));
        assert_eq!(s.cost, 0.0);
    }

    #[test]
    fn powers_up_late_and_down_early() {
        // Only slot 3 needs a server; every schedule powering up earlier or staying on
        // longer costs the same.
        let p = SscoProblem::uni(5, 1.0, 1.0, |t, x| if t == 3 && x < 1.0 { f64::INFINITY } else { 0.0 })
            .unwrap()
            .integral();
        let s = graph_search_md(&p, &GraphSearchOptions::default()).unwrap();
        assert_eq!(s.schedule, Schedule::from_scalars(&[0.0, 0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn initial_condition() {
        let p = SscoProblem::uni(2, 3.0, 1.0, |_, x| (x - 2.0).abs()).unwrap().integral();
        let opts = GraphSearchOptions::from_state(1, Config(vec![3.0]));
        let s = graph_search_md(&p, &opts).unwrap();
        assert_eq!(s.schedule, Schedule::from_scalars(&[2.0, 2.0]));
        assert_eq!(s.cost, 0.0);
    }
}
