use super::super::{uni_view, OnlineAlgorithm};
use crate::error::Result;
use crate::numerics::{find_root, minimize_scalar};
use crate::problem::{Config, ProblemInstance, SscoProblem};

/// Moves from `prev` towards the minimizer of `f` until the movement cost reaches half
/// the hitting cost of the new point.
pub fn memoryless_step(f: impl Fn(f64) -> f64, bound: f64, beta: f64, prev: f64) -> Result<f64> {
    let xtol = 1e-10 * bound.max(1.0);
    let target = minimize_scalar(&f, 0.0, bound, xtol)?.x;
    let slack = |x: f64| f(x) / 2.0 - beta * (x - prev).abs();
    if slack(target) >= 0.0 {
        return Ok(target);
    }
    if slack(prev) <= 0.0 {
        return Ok(prev);
    }
    // `slack` is positive at `prev`, negative at the minimizer and decreasing in between.
    find_root(slack, prev, target, xtol)
}

/// The memoryless algorithm.
#[derive(Debug, Clone, Default)]
pub struct Memoryless {
    prev: f64,
}

impl Memoryless {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step_uni(&mut self, p: &SscoProblem, t: usize) -> Result<f64> {
        let x = memoryless_step(p.slot_fn(t)?, p.bounds[0], p.switching[0], self.prev)?;
        self.prev = x;
        Ok(x)
    }
}

impl OnlineAlgorithm for Memoryless {
    fn name(&self) -> &'static str {
        "memoryless"
    }

    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config> {
        let p = uni_view(problem)?;
        Ok(Config(vec![self.step_uni(&p, t)?]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stays_at_minimizer() {
        let x = memoryless_step(|x| (x - 3.0).powi(2), 10.0, 1.0, 3.0).unwrap();
        assert!((x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn zero_cost_at_prev_stays() {
        let x = memoryless_step(|x| (x - 1.0).abs() * 0.0 + (x - 1.0).max(0.0), 10.0, 1.0, 1.0).unwrap();
        assert!((x - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quadratic_balance_point() {
        // Oracle: bisection on 2 * beta * x = (x - 4)^2 over [0, 4] gives the largest
        // feasible point on the way to the minimizer.
        let (mut a, mut b) = (0.0f64, 4.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (mid - 4.0).powi(2) / 2.0 - mid >= 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let x = memoryless_step(|x| (x - 4.0).powi(2), 10.0, 1.0, 0.0).unwrap();
        assert!((x - a).abs() < 1e-8, "{x} vs {a}");
        assert!((x - 2.0).abs() < 1e-8);
    }
}
