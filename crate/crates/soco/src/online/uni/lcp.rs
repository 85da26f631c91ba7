use super::super::{uni_view, window_end, OnlineAlgorithm};
use crate::error::Result;
use crate::offline::{require_integral_bounds, Charge, GridRecursion, ValueRecursion};
use crate::problem::{Config, ProblemInstance, SscoProblem};
use serde::{Deserialize, Serialize};

/// Shortened history of lazy capacity provisioning.
///
/// Bounds are computed from slot `t0` onwards starting in `x0`; earlier slots are
/// settled for good once both bounds moved in the same direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LcpMemory {
    pub t0: usize,
    pub x0: f64,
}

impl Default for LcpMemory {
    fn default() -> Self {
        LcpMemory { t0: 1, x0: 0.0 }
    }
}

struct Bounds {
    /// Lower and upper bound of slot `t` in the prefix problem ending at `end`.
    lower: f64,
    upper: f64,
    /// Bounds of slots `t` and `t - 1` in the prefix problem ending at `t`.
    reset: Option<f64>,
}

fn settle_tol(m: f64) -> f64 {
    1e-7 * m.max(1.0)
}

fn fractional_bounds(p: &SscoProblem, t: usize, mem: &LcpMemory, w: usize) -> Result<Bounds> {
    let (m, beta) = (p.bounds[0], p.switching[0]);
    let end = window_end(p, t, w);
    let mut lower = ValueRecursion::new(beta, m, Charge::Increase, mem.x0);
    let mut upper = ValueRecursion::new(beta, m, Charge::Decrease, mem.x0);
    let mut reset = None;
    let i = t - mem.t0;
    for s in mem.t0..=end {
        lower.push(p.slot_fn(s)?)?;
        upper.push(p.slot_fn(s)?)?;
        if s == t && t > mem.t0 {
            let (l_now, _, _) = lower.minimizers(lower.len());
            let (_, u_now, _) = upper.minimizers(upper.len());
            let l_prev = lower.backtrack(l_now)[i - 1];
            let u_prev = upper.backtrack(u_now)[i - 1];
            let tol = settle_tol(m);
            if u_now < u_prev - tol || l_now > l_prev + tol {
                reset = Some(u_prev);
            }
        }
    }
    let low_end = lower.minimizers(lower.len()).0;
    let up_end = upper.minimizers(upper.len()).1;
    Ok(Bounds { lower: lower.backtrack(low_end)[i], upper: upper.backtrack(up_end)[i], reset })
}

fn integral_bounds(p: &SscoProblem, t: usize, mem: &LcpMemory, w: usize) -> Result<Bounds> {
    let m = require_integral_bounds(p)?[0];
    let beta = p.switching[0];
    let end = window_end(p, t, w);
    let x0 = mem.x0.round() as usize;
    let mut lower = GridRecursion::new(beta, m, Charge::Increase, x0);
    let mut upper = GridRecursion::new(beta, m, Charge::Decrease, x0);
    let mut reset = None;
    let i = t - mem.t0;
    for s in mem.t0..=end {
        let f = p.slot_fn(s)?;
        lower.push(|x| f(x as f64));
        upper.push(|x| f(x as f64));
        if s == t && t > mem.t0 {
            let l_now = lower.minimizers().0;
            let u_now = upper.minimizers().1;
            let l_prev = lower.backtrack(l_now)[i - 1];
            let u_prev = upper.backtrack(u_now)[i - 1];
            if u_now < u_prev || l_now > l_prev {
                reset = Some(u_prev as f64);
            }
        }
    }
    let low_end = lower.minimizers().0;
    let up_end = upper.minimizers().1;
    Ok(Bounds { lower: lower.backtrack(low_end)[i] as f64, upper: upper.backtrack(up_end)[i] as f64, reset })
}

fn lcp_update(bounds: Bounds, t: usize, prev: f64, mem: &LcpMemory) -> (f64, LcpMemory) {
    let x = prev.clamp(bounds.lower.min(bounds.upper), bounds.upper.max(bounds.lower));
    let next = match bounds.reset {
        Some(x0) => LcpMemory { t0: t, x0 },
        None => *mem,
    };
    (x, next)
}

/// Without a window the reset test and the projection use the same prefix problem;
/// with a window the reset test needs the bounds of the unextended prefix.
fn with_reset(
    p: &SscoProblem,
    t: usize,
    mem: &LcpMemory,
    w: usize,
    bounds: impl Fn(&SscoProblem, usize, &LcpMemory, usize) -> Result<Bounds>,
) -> Result<Bounds> {
    let mut b = bounds(p, t, mem, w)?;
    if window_end(p, t, w) > t {
        b.reset = bounds(p, t, mem, 0)?.reset;
    }
    Ok(b)
}

/// One step of fractional lazy capacity provisioning with prediction window `w`.
///
/// Returns the configuration of slot `t` and the memory for slot `t + 1`.
pub fn lcp_step(problem: &SscoProblem, t: usize, prev: f64, mem: &LcpMemory, w: usize) -> Result<(f64, LcpMemory)> {
    let b = with_reset(problem, t, mem, w, fractional_bounds)?;
    Ok(lcp_update(b, t, prev, mem))
}

/// One step of integral lazy capacity provisioning; bounds come from the integral
/// cost-to-arrive recursion started at the memory's initial condition.
pub fn int_lcp_step(problem: &SscoProblem, t: usize, prev: f64, mem: &LcpMemory, w: usize) -> Result<(f64, LcpMemory)> {
    let b = with_reset(problem, t, mem, w, integral_bounds)?;
    Ok(lcp_update(b, t, prev, mem))
}

/// Fractional lazy capacity provisioning.
#[derive(Debug, Clone, Default)]
pub struct Lcp {
    pub window: usize,
    pub memory: LcpMemory,
    prev: f64,
}

impl Lcp {
    pub fn new(window: usize) -> Self {
        Lcp { window, ..Default::default() }
    }
}

impl OnlineAlgorithm for Lcp {
    fn name(&self) -> &'static str {
        "lcp"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = uni_view(problem)?;
        let (x, mem) = lcp_step(&p, t, self.prev, &self.memory, self.window)?;
        self.prev = x;
        self.memory = mem;
        Ok(Config(vec![x]))
    }
}

/// Integral lazy capacity provisioning.
#[derive(Debug, Clone, Default)]
pub struct IntLcp {
    pub window: usize,
    pub memory: LcpMemory,
    prev: f64,
}

impl IntLcp {
    pub fn new(window: usize) -> Self {
        IntLcp { window, ..Default::default() }
    }
}

impl OnlineAlgorithm for IntLcp {
    fn name(&self) -> &'static str {
        "int_lcp"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = uni_view(problem)?;
        let (x, mem) = int_lcp_step(&p, t, self.prev, &self.memory, self.window)?;
        self.prev = x;
        self.memory = mem;
        Ok(Config(vec![x]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::online::run_online;

    fn run(alg: &mut dyn OnlineAlgorithm, p: SscoProblem) -> Vec<f64> {
        run_online(alg, &ProblemInstance::Ssco(p)).unwrap().column(0)
    }

    #[test]
    fn stays_at_interior_minimizer() {
        let p = SscoProblem::uni(5, 4.0, 1.0, |_, x| (x - 2.0).powi(2)).unwrap();
        let mut mem = LcpMemory::default();
        let mut prev = 2.0;
        for t in 1..=5 {
            let (x, m) = lcp_step(&p, t, prev, &mem, 0).unwrap();
            assert!((x - 2.0).abs() < 1e-6, "{x}");
            prev = x;
            mem = m;
        }
    }

    #[test]
    fn first_slot_minimized_at_zero() {
        let p = SscoProblem::uni(1, 4.0, 1.0, |_, x| x).unwrap();
        assert_eq!(run(&mut Lcp::new(0), p), vec![0.0]);
    }

    #[test]
    fn forced_on_integral() {
        let p = SscoProblem::uni(4, 1.0, 1.0, |_, x| if x < 1.0 { 10.0 } else { 0.0 }).unwrap().integral();
        assert_eq!(run(&mut IntLcp::new(0), p), vec![1.0; 4]);
    }

    #[test]
    fn zero_costs_integral() {
        let p = SscoProblem::uni(4, 3.0, 1.0, |_, _| 0.0).unwrap().integral();
        assert_eq!(run(&mut IntLcp::new(0), p), vec![0.0; 4]);
    }

    #[test]
    fn windows_stay_three_competitive() {
        let p = SscoProblem::uni(4, 5.0, 1.0, |t, x| (x - [3.0, 1.0, 4.0, 0.5][t - 1]).powi(2)).unwrap();
        let opt = crate::offline::fractional_offline(&p, &Default::default(), Default::default()).unwrap().cost;
        for w in 0..4 {
            let xs = run(&mut Lcp::new(w), p.clone());
            let sched = crate::problem::Schedule::from_scalars(&xs);
            let cost = crate::problem::evaluate_cost(&p, &sched, &Default::default()).unwrap().total;
            assert!(cost <= 3.0 * opt + 1e-6, "w = {w}: {cost} vs {opt}");
        }
    }
}
