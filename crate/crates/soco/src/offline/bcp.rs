use super::value::{Charge, ValueRecursion};
use crate::error::{Result, SocoError};
use crate::problem::{Schedule, SscoProblem};

/// Optimal fractional schedule of a uni-dimensional instance by backward projection.
///
/// For every prefix `tau` the lower bound is the smallest minimizer of the prefix cost that
/// charges increases and the upper bound the largest minimizer of the prefix cost that charges
/// decreases. Starting from zero after the last slot, each configuration is the projection of
/// its successor onto the bounds of its slot.
pub fn backward_capacity_provisioning(problem: &SscoProblem) -> Result<Schedule> {
    if problem.dim != 1 {
        return Err(SocoError::InvalidArgument("backward capacity provisioning is uni-dimensional".into()));
    }
    let (m, beta) = (problem.bounds[0], problem.switching[0]);
    let mut lower = ValueRecursion::new(beta, m, Charge::Increase, 0.0);
    let mut upper = ValueRecursion::new(beta, m, Charge::Decrease, 0.0);
    let mut bounds = Vec::with_capacity(problem.horizon);
    for t in 1..=problem.horizon {
        lower.push(problem.slot_fn(t)?)?;
        upper.push(problem.slot_fn(t)?)?;
        let lo = lower.minimizers(t).0;
        let hi = upper.minimizers(t).1;
        bounds.push((lo.min(hi), hi.max(lo)));
    }
    let mut next = 0.0;
    let mut xs = vec![0.0; problem.horizon];
    for t in (0..problem.horizon).rev() {
        next = f64::clamp(next, bounds[t].0, bounds[t].1);
        xs[t] = next;
    }
    Ok(Schedule::from_scalars(&xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{evaluate_cost, EvalOptions};

    #[test]
    fn constant_interior_minimizer() {
        let p = SscoProblem::uni(4, 5.0, 1.0, |_, x| (x - 2.0).powi(2)).unwrap();
        let s = backward_capacity_provisioning(&p).unwrap();
        // Powering up once to x costs x + 4 (x - 2)^2, minimized at 15/8.
        for c in s.iter() {
            assert!((c[0] - 1.875).abs() < 1e-4, "{c:?}");
        }
    }

    #[test]
    fn zero_costs_stay_at_zero() {
        let p = SscoProblem::uni(3, 5.0, 1.0, |_, _| 0.0).unwrap();
        let s = backward_capacity_provisioning(&p).unwrap();
        assert!(s.iter().all(|c| c[0] == 0.0));
    }

    #[test]
    fn moving_target_near_grid_optimum() {
        let p = SscoProblem::uni(3, 5.0, 1.0, |t, x| (x - t as f64).powi(2)).unwrap();
        let s = backward_capacity_provisioning(&p).unwrap();
        let cost = evaluate_cost(&p, &s, &EvalOptions::default()).unwrap().total;
        // Oracle: exhaustive search on the 0.01 grid with a dynamic program.
        let n = 500;
        let xs: Vec<f64> = (0..=n).map(|i| i as f64 * 0.01).collect();
        let mut c: Vec<f64> = xs.iter().map(|x| *x + (x - 1.0).powi(2)).collect();
        for t in 2..=3 {
            c = xs
                .iter()
                .map(|x| {
                    let best = xs.iter().zip(&c).map(|(y, v)| v + (x - y).max(0.0)).fold(f64::INFINITY, f64::min);
                    best + (x - t as f64).powi(2)
                })
                .collect();
        }
        let oracle = c.into_iter().fold(f64::INFINITY, f64::min);
        assert!(cost <= oracle + 1e-6, "{cost} vs {oracle}");
        assert!(cost >= oracle - 1e-2);
    }
}
