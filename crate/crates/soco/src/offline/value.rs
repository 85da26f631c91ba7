//! Exact cost-to-arrive recursions for uni-dimensional instances.
//!
//! With `F_t = f_t + M_{t-1}`, the cost of reaching `x` in slot `t` when
//! increases are charged is `M_t(x) = F_t(clamp(x, a, b)) + beta (x - b)^+`,
//! where `a` minimizes `F_t` and `b` minimizes `F_t(y) - beta y`. Charging
//! decreases mirrors this. Each `F_t` is convex, so the recursion is exact up
//! to the precision of the scalar minimizations.

use crate::error::Result;
use crate::numerics::{minimize_scalar, minimizer_extremes};

/// Which direction of movement is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Charge {
    Increase,
    Decrease,
}

struct Slot<'a> {
    f: Box<dyn Fn(f64) -> f64 + 'a>,
    /// Clamp interval of `M_t`.
    lo: f64,
    hi: f64,
    /// Smallest and largest minimizers of `F_t`.
    argmin: (f64, f64),
    min: f64,
}

/// Fractional cost-to-arrive recursion over `[0, bound]`.
pub struct ValueRecursion<'a> {
    beta: f64,
    bound: f64,
    charge: Charge,
    initial: f64,
    xtol: f64,
    slots: Vec<Slot<'a>>,
}

impl<'a> ValueRecursion<'a> {
    pub fn new(beta: f64, bound: f64, charge: Charge, initial: f64) -> Self {
        ValueRecursion { beta, bound, charge, initial, xtol: 1e-10 * bound.max(1.0), slots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    fn penalty(&self, x: f64, lo: f64, hi: f64) -> f64 {
        match self.charge {
            Charge::Increase => self.beta * (x - hi).max(0.0),
            Charge::Decrease => self.beta * (lo - x).max(0.0),
        }
    }

    fn initial_cost(&self, x: f64) -> f64 {
        self.penalty(x, self.initial, self.initial)
    }

    /// `F_n(x)` for the first `n` slots (`M_0` when `n = 0`).
    pub fn value_at(&self, n: usize, x: f64) -> f64 {
        let mut total = 0.0;
        let mut x = x;
        for s in (0..n).rev() {
            let fx = (self.slots[s].f)(x);
            if !fx.is_finite() {
                return f64::INFINITY;
            }
            total += fx;
            if s > 0 {
                let prev = &self.slots[s - 1];
                total += self.penalty(x, prev.lo, prev.hi);
                x = x.clamp(prev.lo, prev.hi);
            }
        }
        total + self.initial_cost(x)
    }

    /// `F_n` of the latest slot.
    pub fn value(&self, x: f64) -> f64 {
        self.value_at(self.slots.len(), x)
    }

    /// Appends the hitting cost of the next slot.
    pub fn push(&mut self, f: impl Fn(f64) -> f64 + 'a) -> Result<()> {
        self.slots.push(Slot { f: Box::new(f), lo: 0.0, hi: 0.0, argmin: (0.0, 0.0), min: 0.0 });
        let n = self.slots.len();
        let (bound, beta, xtol) = (self.bound, self.beta, self.xtol);
        let (small, large, min) = minimizer_extremes(|x| self.value_at(n, x), 0.0, bound, xtol)?;
        let (lo, hi) = match self.charge {
            Charge::Increase => {
                let b = minimizer_extremes(|x| self.value_at(n, x) - beta * x, 0.0, bound, xtol)?.0;
                (small, b.max(small))
            }
            Charge::Decrease => {
                let b = minimizer_extremes(|x| self.value_at(n, x) + beta * x, 0.0, bound, xtol)?.1;
                (b.min(large), large)
            }
        };
        let slot = self.slots.last_mut().expect("just pushed");
        slot.lo = lo;
        slot.hi = hi;
        slot.argmin = (small, large);
        slot.min = min;
        Ok(())
    }

    /// Smallest and largest minimizers of `F_t` and its minimum (1-based `t`).
    pub fn minimizers(&self, t: usize) -> (f64, f64, f64) {
        let s = &self.slots[t - 1];
        (s.argmin.0, s.argmin.1, s.min)
    }

    /// Optimal trajectory of all slots ending in `last`.
    pub fn backtrack(&self, last: f64) -> Vec<f64> {
        let n = self.slots.len();
        let mut path = vec![0.0; n];
        if n == 0 {
            return path;
        }
        path[n - 1] = last;
        for s in (1..n).rev() {
            let prev = &self.slots[s - 1];
            path[s - 1] = path[s].clamp(prev.lo, prev.hi);
        }
        path
    }

    /// An optimal schedule of all slots: the smallest one when increases are charged and
    /// the largest otherwise.
    pub fn optimum(&self) -> (Vec<f64>, f64) {
        let Some(last) = self.slots.last() else {
            return (Vec::new(), 0.0);
        };
        let end = match self.charge {
            Charge::Increase => last.argmin.0,
            Charge::Decrease => last.argmin.1,
        };
        (self.backtrack(end), last.min)
    }

    /// Minimum of `F_n(x) + extra(x)` over `[0, bound]`, e.g. to add a terminal cost.
    pub fn minimize_with(&self, extra: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
        let m = minimize_scalar(|x| self.value(x) + extra(x), 0.0, self.bound, self.xtol)?;
        Ok((m.x, m.value))
    }
}

/// Integral cost-to-arrive recursion on `{0, ..., m}` with back-pointers.
#[derive(Debug, Clone)]
pub struct GridRecursion {
    beta: f64,
    charge: Charge,
    cost: Vec<f64>,
    preds: Vec<Vec<u32>>,
}

impl GridRecursion {
    pub fn new(beta: f64, m: usize, charge: Charge, initial: usize) -> Self {
        let mut cost = vec![f64::INFINITY; m + 1];
        cost[initial.min(m)] = 0.0;
        GridRecursion { beta, charge, cost, preds: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// Ties prefer small values when increases are charged and large values otherwise.
    fn prefers_small(&self) -> bool {
        self.charge == Charge::Increase
    }

    fn better(&self, cand: (f64, usize), best: (f64, usize)) -> bool {
        cand.0 < best.0 || (cand.0 == best.0 && (cand.1 < best.1) == self.prefers_small() && cand.1 != best.1)
    }

    /// Appends the next slot with hitting cost `f` on the grid.
    pub fn push(&mut self, f: impl Fn(usize) -> f64) {
        let n = self.cost.len();
        let (up_cost, down_cost) = match self.charge {
            Charge::Increase => (self.beta, 0.0),
            Charge::Decrease => (0.0, self.beta),
        };
        // Moving up to j from i <= j.
        let mut from_below: Vec<(f64, usize)> = Vec::with_capacity(n);
        for j in 0..n {
            let here = (self.cost[j], j);
            let best = match from_below.last() {
                Some(&(v, i)) => {
                    let cand = (v + up_cost, i);
                    if self.better(here, cand) {
                        here
                    } else {
                        cand
                    }
                }
                None => here,
            };
            from_below.push(best);
        }
        let mut from_above: Vec<(f64, usize)> = vec![(f64::INFINITY, 0); n];
        for j in (0..n).rev() {
            let here = (self.cost[j], j);
            from_above[j] = if j + 1 < n {
                let (v, i) = from_above[j + 1];
                let cand = (v + down_cost, i);
                if self.better(here, cand) {
                    here
                } else {
                    cand
                }
            } else {
                here
            };
        }
        let mut next = vec![f64::INFINITY; n];
        let mut preds = vec![0u32; n];
        for j in 0..n {
            let best = if self.better(from_above[j], from_below[j]) { from_above[j] } else { from_below[j] };
            preds[j] = best.1 as u32;
            if best.0.is_finite() {
                let fj = f(j);
                next[j] = best.0 + fj;
            }
        }
        self.cost = next;
        self.preds.push(preds);
    }

    /// Cost of reaching each grid point in the latest slot.
    pub fn costs(&self) -> &[f64] {
        &self.cost
    }

    /// Smallest and largest minimizers of the latest slot's cost and the minimum.
    pub fn minimizers(&self) -> (usize, usize, f64) {
        let min = self.cost.iter().cloned().fold(f64::INFINITY, f64::min);
        let small = self.cost.iter().position(|c| *c == min).unwrap_or(0);
        let large = self.cost.iter().rposition(|c| *c == min).unwrap_or(0);
        (small, large, min)
    }

    /// Trajectory ending in `last`.
    pub fn backtrack(&self, last: usize) -> Vec<usize> {
        let n = self.preds.len();
        let mut path = vec![0; n];
        if n == 0 {
            return path;
        }
        path[n - 1] = last;
        for s in (1..n).rev() {
            path[s - 1] = self.preds[s][path[s]] as usize;
        }
        path
    }

    /// Optimal schedule, smallest under increase charging and largest otherwise.
    pub fn optimum(&self) -> (Vec<usize>, f64) {
        let (small, large, min) = self.minimizers();
        let end = if self.prefers_small() { small } else { large };
        (self.backtrack(end), min)
    }
}
