use super::value::{Charge, ValueRecursion};
use super::{schedule_cost, GraphSearchOptions, OfflineSolution};
use crate::error::{Result, SocoError};
use crate::numerics::{minimize, ConvexProgram, Tolerance};
use crate::problem::{Config, Schedule, SscoProblem};

/// Optimal fractional schedule.
///
/// Uni-dimensional instances use the exact cost-to-arrive recursion; otherwise (and whenever a
/// movement budget `L` is set) the whole schedule is one convex program.
pub fn fractional_offline(problem: &SscoProblem, opts: &GraphSearchOptions, tol: Tolerance) -> Result<OfflineSolution> {
    let x0 = opts.validate(problem)?;
    let t0 = opts.initial_slot;
    let last = problem.horizon;
    if t0 > last {
        return Ok(OfflineSolution { schedule: Schedule::new(), cost: 0.0 });
    }
    let schedule = if problem.dim == 1 && opts.l_constraint.is_none() {
        let beta = problem.switching[0] * opts.alpha;
        let charge = if opts.inverted { Charge::Decrease } else { Charge::Increase };
        let mut rec = ValueRecursion::new(beta, problem.bounds[0], charge, x0[0]);
        for t in t0..=last {
            rec.push(problem.slot_fn(t)?)?;
        }
        let path = if opts.inverted {
            let (end, _) = rec.minimize_with(|x| beta * x)?;
            rec.backtrack(end)
        } else {
            rec.optimum().0
        };
        Schedule::from_scalars(&path)
    } else {
        solve_program(problem, t0, last, &x0, opts, tol)?
    };
    let cost = schedule_cost(problem, &schedule, opts, &x0)?;
    Ok(OfflineSolution { schedule, cost })
}

/// Optimal fractional configurations for slots `from..=to` starting from `prev`.
pub fn window_optimum(problem: &SscoProblem, from: usize, to: usize, prev: &Config, tol: Tolerance) -> Result<Vec<Config>> {
    let opts = GraphSearchOptions::from_state(from, prev.clone());
    if from > to {
        return Ok(Vec::new());
    }
    if problem.dim == 1 {
        let mut rec = ValueRecursion::new(problem.switching[0], problem.bounds[0], Charge::Increase, prev[0]);
        for t in from..=to {
            rec.push(problem.slot_fn(t)?)?;
        }
        return Ok(rec.optimum().0.into_iter().map(|x| Config(vec![x])).collect());
    }
    Ok(solve_program(problem, from, to, prev, &opts, tol)?.0)
}

fn solve_program(
    problem: &SscoProblem,
    from: usize,
    to: usize,
    x0: &Config,
    opts: &GraphSearchOptions,
    tol: Tolerance,
) -> Result<Schedule> {
    let d = problem.dim;
    let n = to + 1 - from;
    for t in from..=to {
        problem.costs.resolve(t)?;
    }
    let split = |v: &[f64]| -> Vec<Vec<f64>> { v.chunks(d).map(|c| c.to_vec()).collect() };
    let movement = |v: &[f64]| -> f64 {
        let mut prev: &[f64] = x0;
        let mut sum = 0.0;
        for x in v.chunks(d) {
            sum += super::switching(problem, prev, x, opts.inverted);
            prev = x;
        }
        if opts.inverted {
            sum += super::switching(problem, prev, &vec![0.0; d], true);
        }
        sum
    };
    let objective = |v: &[f64]| -> f64 {
        let mut sum = opts.alpha * movement(v);
        for (i, x) in v.chunks(d).enumerate() {
            sum += problem.hit(from + i, x).unwrap_or(f64::INFINITY);
            if !sum.is_finite() {
                return f64::INFINITY;
            }
        }
        sum
    };
    let lower = vec![0.0; n * d];
    let upper: Vec<f64> = (0..n).flat_map(|_| problem.bounds.iter().copied()).collect();
    let mut program = ConvexProgram::new(objective, lower, upper);
    if let Some(budget) = opts.l_constraint {
        if budget < 0.0 {
            return Err(SocoError::InvalidArgument("movement budget must be nonnegative".into()));
        }
        program = program.with_constraint(move |v: &[f64]| movement(v) - budget);
    }
    let m = minimize(&program, tol)?;
    Ok(Schedule::from_rows(split(&m.point)))
}
