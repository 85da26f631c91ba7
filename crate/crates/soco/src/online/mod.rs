//! Online algorithms and a driver that streams them over an instance.
//!
//! Every algorithm keeps its memory in a value and exposes a step that maps the
//! instance as known at slot `t` to the configuration of `t`.

pub mod multi;
mod spec;
pub mod uni;

pub use spec::OnlineSpec;

use crate::error::{Result, SocoError};
use crate::problem::{Config, Problem, ProblemInstance, Schedule, SscoProblem};

/// A stateful online algorithm.
pub trait OnlineAlgorithm: Send {
    fn name(&self) -> &'static str;

    /// Configuration of slot `t` (1-based). Hitting costs of later slots within the
    /// algorithm's prediction window may be consulted.
    fn step(&mut self, problem: &ProblemInstance, t: usize) -> Result<Config>;
}

/// Runs `alg` over slots `1..=T` of a fully known instance.
pub fn run_online(alg: &mut dyn OnlineAlgorithm, problem: &ProblemInstance) -> Result<Schedule> {
    let mut schedule = Schedule::new();
    for t in 1..=problem.horizon() {
        let x = alg.step(problem, t)?;
        schedule.push(x);
    }
    Ok(schedule)
}

/// Uni-dimensional SSCO view of an instance.
pub(crate) fn uni_view(problem: &ProblemInstance) -> Result<SscoProblem> {
    let p = problem.to_ssco()?;
    if p.dim != 1 {
        return Err(SocoError::InvalidArgument(format!("algorithm is uni-dimensional, instance has d = {}", p.dim)));
    }
    Ok(p)
}

/// Last slot whose hitting cost may be consulted at `t` with prediction window `w`.
pub(crate) fn window_end(problem: &SscoProblem, t: usize, w: usize) -> usize {
    (t + w).min(problem.horizon.max(t))
}
