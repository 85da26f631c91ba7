use super::{LoadCost, Norm, SbloProblem, ScoProblem, SloProblem, SscoProblem};
use crate::error::{Result, SocoError};
use std::sync::Arc;

/// SBLO instance whose per-server cost is `c_k` up to one unit of load.
pub fn reduce_slo_to_sblo(slo: &SloProblem) -> SbloProblem {
    SbloProblem {
        horizon: slo.horizon,
        bounds: slo.bounds.clone(),
        switching: slo.switching.clone(),
        load_costs: slo.costs.iter().map(|c| LoadCost::constant(*c, 1.0)).collect(),
        loads: slo.loads.clone(),
        integral: slo.integral,
    }
}

/// SCO instance with the scaled Manhattan norm `sum_k beta_k / 2 |x_k|`.
///
/// The final hitting cost absorbs the cost of returning to zero, so costs agree for every
/// schedule. Online callers that extend the horizon must apply that correction themselves.
pub fn reduce_ssco_to_sco(ssco: &SscoProblem) -> Result<ScoProblem> {
    if !ssco.horizon_known {
        return Err(SocoError::UnknownHorizon);
    }
    let half: Vec<f64> = ssco.switching.iter().map(|b| b / 2.0).collect();
    let horizon = ssco.horizon;
    let weights = Arc::new(half.clone());
    let costs = ssco.costs.map(move |t, x, samples| {
        if t == horizon {
            let extra: f64 = weights.iter().zip(x).map(|(w, v)| w * v.abs()).sum();
            samples.into_iter().map(|s| s + extra).collect()
        } else {
            samples
        }
    });
    Ok(ScoProblem {
        dim: ssco.dim,
        horizon,
        bounds: Some(ssco.bounds.clone()),
        norm: Norm::scaled_manhattan(half)?,
        costs,
        integral: ssco.integral,
        horizon_known: true,
    })
}
