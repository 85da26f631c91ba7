use super::{require_integral_bounds, schedule_cost, GraphSearchOptions, OfflineSolution};
use crate::error::{Result, SocoError};
use crate::problem::{Config, Schedule, SscoProblem};

/// Optimal integral schedule of a uni-dimensional instance by refining five-row subgraphs.
///
/// The bound is padded to the next power of two `m'` with a convex extension of the hitting
/// costs beyond `m`, which never makes the padded rows optimal. The first pass uses rows
/// `0, m'/4, .., m'`; each further pass keeps the rows within two steps of the previous
/// schedule at half the step size.
pub fn graph_search_1d(problem: &SscoProblem, opts: &GraphSearchOptions) -> Result<OfflineSolution> {
    if problem.dim != 1 {
        return Err(SocoError::InvalidArgument("graph_search_1d expects a uni-dimensional instance".into()));
    }
    let x0 = opts.validate(problem)?;
    let m = require_integral_bounds(problem)?[0];
    let start = x0[0];
    if start.fract() != 0.0 || start < 0.0 || start > m as f64 {
        return Err(SocoError::InvalidArgument("initial configuration must be an integral point".into()));
    }
    let t0 = opts.initial_slot;
    let slots = (problem.horizon + 1).saturating_sub(t0);
    if slots == 0 {
        return Ok(OfflineSolution { schedule: Schedule::new(), cost: 0.0 });
    }
    let beta = problem.switching[0] * opts.alpha;
    let costs: Vec<Vec<f64>> = (0..slots)
        .map(|s| {
            let f = problem.slot_fn(t0 + s)?;
            Ok((0..=m).map(|j| f(j as f64)).collect())
        })
        .collect::<Result<_>>()?;
    let padded = m.next_power_of_two().max(1);
    let cost_at = |s: usize, j: usize| -> f64 {
        let row = &costs[s];
        if j <= m {
            row[j]
        } else if !row[m].is_finite() {
            f64::INFINITY
        } else {
            let slope = if m > 0 { (row[m] - row[m - 1]).max(0.0) } else { 0.0 };
            row[m] + (j - m) as f64 * (slope + 1.0)
        }
    };
    let path = if padded <= 4 {
        let rows: Vec<usize> = (0..=m).collect();
        shortest_path(&vec![rows; slots], &cost_at, beta, start as usize, opts.inverted)
    } else {
        let levels = padded.trailing_zeros() as usize - 2;
        let first: Vec<usize> = (0..=4).map(|z| z * padded / 4).collect();
        let mut path = shortest_path(&vec![first; slots], &cost_at, beta, start as usize, opts.inverted);
        for k in (0..levels).rev() {
            let step = 1usize << k;
            let rows: Vec<Vec<usize>> = path
                .iter()
                .map(|&x| {
                    (-2i64..=2)
                        .map(|z| x as i64 + z * step as i64)
                        .filter(|j| *j >= 0 && *j <= padded as i64)
                        .map(|j| j as usize)
                        .collect()
                })
                .collect();
            path = shortest_path(&rows, &cost_at, beta, start as usize, opts.inverted);
        }
        path
    };
    if path.iter().any(|j| *j > m) {
        return Err(SocoError::Infeasible("every integral schedule has infinite cost".into()));
    }
    let schedule = Schedule(path.into_iter().map(|j| Config(vec![j as f64])).collect());
    let cost = schedule_cost(problem, &schedule, opts, &x0)?;
    if !cost.is_finite() {
        return Err(SocoError::Infeasible("every integral schedule has infinite cost".into()));
    }
    Ok(OfflineSolution { schedule, cost })
}

/// Shortest path through the given per-slot rows (ascending), ties resolved to the lowest row.
fn shortest_path(
    rows: &[Vec<usize>],
    cost_at: &dyn Fn(usize, usize) -> f64,
    beta: f64,
    start: usize,
    inverted: bool,
) -> Vec<usize> {
    let move_cost = |from: usize, to: usize| {
        let delta = if inverted { from as f64 - to as f64 } else { to as f64 - from as f64 };
        beta * delta.max(0.0)
    };
    let mut prev_rows = vec![start];
    let mut prev_cost = vec![0.0];
    let mut preds: Vec<Vec<usize>> = Vec::with_capacity(rows.len());
    for (s, layer) in rows.iter().enumerate() {
        let mut cost = Vec::with_capacity(layer.len());
        let mut pred = Vec::with_capacity(layer.len());
        for &j in layer {
            let f = cost_at(s, j);
            let mut best = f64::INFINITY;
            let mut arg = 0;
            for (i, &p) in prev_rows.iter().enumerate() {
                let c = prev_cost[i] + f + move_cost(p, j);
                if c < best {
                    best = c;
                    arg = i;
                }
            }
            cost.push(best);
            pred.push(arg);
        }
        preds.push(pred);
        prev_rows = layer.clone();
        prev_cost = cost;
    }
    let closing = |j: usize| if inverted { move_cost(j, 0) } else { 0.0 };
    let mut best = f64::INFINITY;
    let mut arg = 0;
    for (i, &j) in prev_rows.iter().enumerate() {
        let c = prev_cost[i] + closing(j);
        if c < best {
            best = c;
            arg = i;
        }
    }
    let mut path = vec![0; rows.len()];
    for s in (0..rows.len()).rev() {
        path[s] = rows[s][arg];
        arg = preds[s][arg];
    }
    path
}
