use super::{require_integral_bounds, schedule_cost, GraphSearchOptions, OfflineSolution};
use crate::error::{Result, SocoError};
use crate::problem::{Config, Schedule, SscoProblem};

/// Maximum number of schedules the brute-force oracle enumerates.
pub const BRUTE_FORCE_LIMIT: f64 = 1e7;

/// Exhaustive search over all integral schedules.
///
/// Among optimal schedules the lexicographically smallest is returned.
pub fn brute_force_offline(problem: &SscoProblem, opts: &GraphSearchOptions) -> Result<OfflineSolution> {
    let x0 = opts.validate(problem)?;
    let bounds = require_integral_bounds(problem)?;
    let t0 = opts.initial_slot;
    let slots = (problem.horizon + 1).saturating_sub(t0);
    let per_slot: f64 = bounds.iter().map(|m| (*m + 1) as f64).product();
    let size = per_slot.powi(slots as i32);
    if size > BRUTE_FORCE_LIMIT {
        return Err(SocoError::TooLarge { size, limit: BRUTE_FORCE_LIMIT });
    }
    let configs = enumerate(&bounds);
    let hitting: Vec<Vec<f64>> = (0..slots)
        .map(|s| configs.iter().map(|x| problem.hit(t0 + s, x)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let step = |prev: &[f64], next: &[f64]| opts.alpha * super::switching(problem, prev, next, opts.inverted);
    let closing = |x: &[f64]| {
        if opts.inverted {
            opts.alpha * super::switching(problem, x, &vec![0.0; x.len()], true)
        } else {
            0.0
        }
    };

    struct Search<'s> {
        configs: &'s [Vec<f64>],
        hitting: &'s [Vec<f64>],
        step: &'s dyn Fn(&[f64], &[f64]) -> f64,
        closing: &'s dyn Fn(&[f64]) -> f64,
        best: f64,
        best_path: Vec<usize>,
        path: Vec<usize>,
    }

    impl Search<'_> {
        fn visit(&mut self, prev: &[f64], partial: f64) {
            let depth = self.path.len();
            if depth == self.hitting.len() {
                let total = partial + (self.closing)(prev);
                if total < self.best {
                    self.best = total;
                    self.best_path = self.path.clone();
                }
                return;
            }
            for i in 0..self.configs.len() {
                let x = &self.configs[i];
                let cost = partial + self.hitting[depth][i] + (self.step)(prev, x);
                // Costs are nonnegative, so no completion of a worse prefix can win.
                if cost.is_finite() && cost < self.best {
                    self.path.push(i);
                    self.visit(x, cost);
                    self.path.pop();
                }
            }
        }
    }

    let mut search = Search {
        configs: &configs,
        hitting: &hitting,
        step: &step,
        closing: &closing,
        best: f64::INFINITY,
        best_path: Vec::new(),
        path: Vec::with_capacity(slots),
    };
    search.visit(&x0, 0.0);
    let best_path = search.best_path;
    if slots == 0 {
        return Ok(OfflineSolution { schedule: Schedule::new(), cost: 0.0 });
    }
    if best_path.is_empty() {
        return Err(SocoError::Infeasible("every integral schedule has infinite cost".into()));
    }
    let schedule = Schedule(best_path.into_iter().map(|i| Config(configs[i].clone())).collect());
    let cost = schedule_cost(problem, &schedule, opts, &x0)?;
    Ok(OfflineSolution { schedule, cost })
}

/// All integral configurations of the box in lexicographic order.
pub(crate) fn enumerate(bounds: &[usize]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for m in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                (0..=*m).map(move |v| {
                    let mut x = prefix.clone();
                    x.push(v as f64);
                    x
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::HittingCostStore;

    #[test]
    fn single_slot() {
        let p = SscoProblem::uni(1, 1.0, 1.0, |_, x| if x == 0.0 { 5.0 } else { 0.0 }).unwrap().integral();
        let s = brute_force_offline(&p, &GraphSearchOptions::default()).unwrap();
        assert_eq!(s.schedule, Schedule::from_scalars(&[1.0]));
        assert_eq!(s.cost, 1.0);
    }

    #[test]
    fn zero_costs() {
        let p = SscoProblem::uni(3, 2.0, 1.0, |_, _| 0.0).unwrap().integral();
        let s = brute_force_offline(&p, &GraphSearchOptions::default()).unwrap();
        assert_eq!(s.schedule, Schedule::from_scalars(&[0.0; 3]));
        assert_eq!(s.cost, 0.0);
    }

    #[test]
    fn alternating_fixture() {
        let p = SscoProblem::uni(3, 2.0, 0.4, |t, x| (x - (t % 2) as f64).abs()).unwrap().integral();
        let s = brute_force_offline(&p, &GraphSearchOptions::default()).unwrap();
        // Recorded once: staying at 1 costs 0.4 + 0 + 1 + 0 = 1.4, alternating costs 0.8.
        assert_eq!(s.schedule, Schedule::from_scalars(&[1.0, 0.0, 1.0]));
        assert!((s.cost - 0.8).abs() < 1e-12);
    }

    #[test]
    fn too_large() {
        let p = SscoProblem::new(
            10,
            vec![9.0, 9.0],
            vec![1.0, 1.0],
            HittingCostStore::certain(|_, _| 0.0),
        )
        .unwrap();
        assert!(matches!(brute_force_offline(&p, &GraphSearchOptions::default()), Err(SocoError::TooLarge { .. })));
    }

    #[test]
    fn lexicographic_order() {
        assert_eq!(enumerate(&[1, 1]), vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
    }
}
