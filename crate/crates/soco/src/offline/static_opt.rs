use super::brute::enumerate;
use crate::error::{Result, SocoError};
use crate::numerics::{minimize, ConvexProgram, Tolerance};
use crate::problem::{Config, Problem};

/// Maximum number of configurations enumerated by the integral static optimum.
const STATIC_ENUMERATION_LIMIT: f64 = 1e6;

/// Best configuration held constant over all slots, paying for the initial move from zero.
pub fn static_optimum<P: Problem + ?Sized>(problem: &P, integral: bool, tol: Tolerance) -> Result<(Config, f64)> {
    let bounds = problem
        .bounds()
        .ok_or_else(|| SocoError::InvalidArgument("static optimum requires a bounded instance".into()))?
        .to_vec();
    let d = problem.dim();
    let horizon = problem.horizon();
    let zero = vec![0.0; d];
    let total = |x: &[f64]| -> f64 {
        let mut sum = problem.movement(&zero, x, false);
        for t in 1..=horizon {
            match problem.hitting_cost(t, x) {
                Ok(v) if v.is_finite() => sum += v,
                _ => return f64::INFINITY,
            }
        }
        sum
    };
    if horizon == 0 {
        return Ok((Config::zeros(d), 0.0));
    }
    if integral {
        let count: f64 = bounds.iter().map(|m| m.floor() + 1.0).product();
        if count > STATIC_ENUMERATION_LIMIT {
            return Err(SocoError::TooLarge { size: count, limit: STATIC_ENUMERATION_LIMIT });
        }
        let ints: Vec<usize> = bounds.iter().map(|m| m.floor() as usize).collect();
        let mut best = (Config::zeros(d), f64::INFINITY);
        for x in enumerate(&ints) {
            let v = total(&x);
            if v < best.1 {
                best = (Config(x), v);
            }
        }
        if !best.1.is_finite() {
            return Err(SocoError::Infeasible("no static configuration has finite cost".into()));
        }
        return Ok(best);
    }
    let program = ConvexProgram::new(total, vec![0.0; d], bounds);
    let m = minimize(&program, tol)?;
    Ok((Config(m.point), m.value))
}
