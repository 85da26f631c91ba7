use super::{Config, Problem, Schedule, FEASIBILITY_SLACK};
use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

/// Options of [`evaluate_cost`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Factor applied to movement costs (at least 1).
    pub alpha: f64,
    /// Pay switching costs on decreases, including the return to zero after the last slot.
    pub inverted: bool,
    /// Configuration before slot 1 (zero by default).
    pub initial: Option<Config>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { alpha: 1.0, inverted: false, initial: None }
    }
}

impl EvalOptions {
    pub fn alpha(alpha: f64) -> Self {
        EvalOptions { alpha, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotCost {
    pub hitting: f64,
    pub movement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub per_slot: Vec<SlotCost>,
    pub total: f64,
}

impl CostBreakdown {
    pub fn hitting(&self) -> f64 {
        self.per_slot.iter().map(|s| s.hitting).sum()
    }

    pub fn movement(&self) -> f64 {
        self.per_slot.iter().map(|s| s.movement).sum()
    }
}

/// Total cost of a schedule: hitting costs plus (scaled) movement costs.
///
/// Shorter schedules are evaluated as prefixes of the instance.
pub fn evaluate_cost<P: Problem + ?Sized>(
    problem: &P,
    schedule: &Schedule,
    opts: &EvalOptions,
) -> Result<CostBreakdown> {
    if opts.alpha < 1.0 {
        return Err(SocoError::InvalidArgument(format!("alpha must be at least 1, got {}", opts.alpha)));
    }
    let d = problem.dim();
    if schedule.horizon() > problem.horizon() {
        return Err(SocoError::InvalidArgument(format!(
            "schedule has {} slots but the instance only {}",
            schedule.horizon(),
            problem.horizon()
        )));
    }
    let mut prev = opts.initial.clone().unwrap_or_else(|| Config::zeros(d));
    let mut per_slot = Vec::with_capacity(schedule.horizon());
    for (i, x) in schedule.iter().enumerate() {
        let t = i + 1;
        if x.dim() != d {
            return Err(SocoError::InvalidArgument(format!("configuration at slot {t} has wrong dimension")));
        }
        if let Some(bounds) = problem.bounds() {
            for (k, (v, m)) in x.iter().zip(bounds).enumerate() {
                if *v < -FEASIBILITY_SLACK || *v > m + FEASIBILITY_SLACK || v.is_nan() {
                    return Err(SocoError::OutOfBounds { slot: t, dim: k, value: *v, bound: *m });
                }
            }
        }
        problem.check_slot(t, x)?;
        let hitting = problem.hitting_cost(t, x)?;
        let mut movement = opts.alpha * problem.movement(&prev, x, opts.inverted);
        if opts.inverted && t == schedule.horizon() {
            movement += opts.alpha * problem.movement(x, &Config::zeros(d), true);
        }
        per_slot.push(SlotCost { hitting, movement });
        prev = x.clone();
    }
    let total = per_slot.iter().map(|s| s.hitting).sum::<f64>() + per_slot.iter().map(|s| s.movement).sum::<f64>();
    Ok(CostBreakdown { per_slot, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{SloProblem, SscoProblem};

    #[test]
    fn slo_single_step() {
        let p = SloProblem::new(vec![2.0], vec![3.0], vec![2.0], vec![1.0]).unwrap();
        let c = evaluate_cost(&p, &Schedule::from_scalars(&[1.0]), &EvalOptions::default()).unwrap();
        assert_eq!(c.total, 5.0);
    }

    #[test]
    fn slo_uncovered_load_is_an_error() {
        let p = SloProblem::new(vec![2.0], vec![3.0], vec![2.0], vec![2.0]).unwrap();
        let e = evaluate_cost(&p, &Schedule::from_scalars(&[1.0]), &EvalOptions::default());
        assert!(matches!(e, Err(SocoError::InfeasibleSchedule { slot: 1, .. })));
    }

    #[test]
    fn moving_target_costs_movement_only() {
        let p = SscoProblem::uni(3, 5.0, 1.0, |t, x| (x - t as f64).powi(2)).unwrap();
        let c = evaluate_cost(&p, &Schedule::from_scalars(&[1.0, 2.0, 3.0]), &EvalOptions::default()).unwrap();
        assert_eq!(c.hitting(), 0.0);
        assert_eq!(c.movement(), 3.0);
        assert_eq!(c.total, 3.0);
    }

    #[test]
    fn zero_schedule_has_no_movement() {
        let p = SscoProblem::uni(3, 5.0, 1.0, |t, x| x + t as f64).unwrap();
        let c = evaluate_cost(&p, &Schedule::from_scalars(&[0.0; 3]), &EvalOptions::default()).unwrap();
        assert_eq!(c.total, 6.0);
        assert_eq!(c.movement(), 0.0);
    }

    #[test]
    fn out_of_bounds_rejected() {
        let p = SscoProblem::uni(1, 1.0, 1.0, |_, _| 0.0).unwrap();
        let e = evaluate_cost(&p, &Schedule::from_scalars(&[2.0]), &EvalOptions::default());
        assert!(matches!(e, Err(SocoError::OutOfBounds { .. })));
    }

    #[test]
    fn alpha_is_monotone() {
        let p = SscoProblem::uni(3, 5.0, 1.0, |t, x| (x - t as f64).powi(2)).unwrap();
        let s = Schedule::from_scalars(&[1.0, 0.5, 3.0]);
        let mut last = 0.0;
        for alpha in [1.0, 1.5, 2.0, 4.0] {
            let c = evaluate_cost(&p, &s, &EvalOptions::alpha(alpha)).unwrap().total;
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn inverted_equals_normal_for_closed_paths() {
        let p = SscoProblem::uni(4, 5.0, 2.0, |_, x| x).unwrap();
        let s = Schedule::from_scalars(&[1.0, 3.0, 2.0, 2.5]);
        let normal = evaluate_cost(&p, &s, &EvalOptions::default()).unwrap();
        let inverted = evaluate_cost(&p, &s, &EvalOptions { inverted: true, ..Default::default() }).unwrap();
        assert_eq!(normal.total, inverted.total);
    }
}
