use super::output::{sort_metrics, MetricsRow};
use crate::error::{Result, SocoError};
use crate::numerics::Tolerance;
use crate::offline::{
    backward_capacity_provisioning, brute_force_offline, fractional_offline, graph_search_1d, graph_search_md,
    static_optimum, GraphSearchOptions, OfflineSolution,
};
use crate::problem::{evaluate_cost, metrics, EvalOptions, Problem, ProblemInstance, Schedule};
use serde::{Deserialize, Serialize};

/// Offline solver selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "alg", rename_all = "snake_case")]
pub enum OfflineAlgorithm {
    Brute,
    Bcp,
    Graph1d,
    Graphmd,
    Approx { gamma: f64 },
    Static,
    Fractional,
}

impl OfflineAlgorithm {
    pub fn from_name(name: &str, gamma: Option<f64>) -> Result<Self> {
        Ok(match name {
            "brute" => OfflineAlgorithm::Brute,
            "bcp" => OfflineAlgorithm::Bcp,
            "graph1d" => OfflineAlgorithm::Graph1d,
            "graphmd" => OfflineAlgorithm::Graphmd,
            "approx" => OfflineAlgorithm::Approx {
                gamma: gamma.ok_or_else(|| SocoError::InvalidArgument("approx needs --gamma".into()))?,
            },
            "static" => OfflineAlgorithm::Static,
            "fractional" => OfflineAlgorithm::Fractional,
            other => return Err(SocoError::InvalidArgument(format!("unknown offline algorithm {other}"))),
        })
    }
}

fn tolerance() -> Tolerance {
    Tolerance::new(1e-6, false).expect("valid tolerance")
}

/// Runs an offline solver. The static solver returns a single-row schedule.
pub fn solve_offline(instance: &ProblemInstance, alg: OfflineAlgorithm) -> Result<OfflineSolution> {
    if alg == OfflineAlgorithm::Static {
        let (x, cost) = static_optimum(instance, instance.is_integral(), tolerance())?;
        return Ok(OfflineSolution { schedule: Schedule(vec![x]), cost });
    }
    let p = instance.to_ssco()?;
    let opts = GraphSearchOptions::default();
    match alg {
        OfflineAlgorithm::Brute => brute_force_offline(&p, &opts),
        OfflineAlgorithm::Bcp => {
            let schedule = backward_capacity_provisioning(&p)?;
            let cost = evaluate_cost(&p, &schedule, &EvalOptions::default())?.total;
            Ok(OfflineSolution { schedule, cost })
        }
        OfflineAlgorithm::Graph1d => graph_search_1d(&p, &opts),
        OfflineAlgorithm::Graphmd => graph_search_md(&p, &opts),
        OfflineAlgorithm::Approx { gamma } => graph_search_md(&p, &GraphSearchOptions::approximate(gamma)),
        OfflineAlgorithm::Fractional => fractional_offline(&p, &opts, tolerance()),
        OfflineAlgorithm::Static => unreachable!("handled above"),
    }
}

/// Dynamic offline optimum matching the instance's integrality.
pub fn dynamic_optimum(instance: &ProblemInstance) -> Result<OfflineSolution> {
    let alg = match (instance.is_integral(), instance.dim()) {
        (true, 1) => OfflineAlgorithm::Graph1d,
        (true, _) => OfflineAlgorithm::Graphmd,
        (false, _) => OfflineAlgorithm::Fractional,
    };
    solve_offline(instance, alg)
}

/// Metrics table of named schedules against the dynamic and static optima.
pub fn compare(instance: &ProblemInstance, schedules: &[(String, Schedule)]) -> Result<Vec<MetricsRow>> {
    let opt = dynamic_optimum(instance)?.cost;
    let fixed = solve_offline(instance, OfflineAlgorithm::Static)?.cost;
    let mut rows = schedules
        .iter()
        .map(|(name, s)| {
            if s.horizon() != instance.horizon() {
                return Err(SocoError::InvalidArgument(format!(
                    "schedule {name} has {} slots, instance has {}",
                    s.horizon(),
                    instance.horizon()
                )));
            }
            let cost = evaluate_cost(instance, s, &EvalOptions::default())?.total;
            Ok(MetricsRow { algorithm: name.clone(), cost, metrics: metrics(cost, opt, fixed)? })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_metrics(&mut rows);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::SscoProblem;

    fn instance() -> ProblemInstance {
        let loads = [1.0, 3.0, 0.0, 0.0, 4.0, 2.0];
        ProblemInstance::Ssco(SscoProblem::uni(6, 5.0, 2.0, move |t, x| (x - loads[t - 1]).powi(2) + x).unwrap().integral())
    }

    #[test]
    fn exact_solvers_agree() {
        let inst = instance();
        let brute = solve_offline(&inst, OfflineAlgorithm::Brute).unwrap().cost;
        for alg in [OfflineAlgorithm::Graph1d, OfflineAlgorithm::Graphmd] {
            assert!((solve_offline(&inst, alg).unwrap().cost - brute).abs() < 1e-9, "{alg:?}");
        }
        assert!(solve_offline(&inst, OfflineAlgorithm::Fractional).unwrap().cost <= brute + 1e-9);
    }

    #[test]
    fn static_schedule_has_one_row() {
        let s = solve_offline(&instance(), OfflineAlgorithm::Static).unwrap();
        assert_eq!(s.schedule.horizon(), 1);
    }

    #[test]
    fn optimum_has_unit_normalized_cost() {
        let inst = instance();
        let opt = dynamic_optimum(&inst).unwrap().schedule;
        let rows = compare(&inst, &[("opt".into(), opt)]).unwrap();
        assert!((rows[0].metrics.normalized_cost - 1.0).abs() < 1e-12);
        assert!(rows[0].metrics.sdr >= 1.0);
    }

    #[test]
    fn names() {
        assert!(OfflineAlgorithm::from_name("approx", None).is_err());
        assert_eq!(OfflineAlgorithm::from_name("approx", Some(1.5)).unwrap(), OfflineAlgorithm::Approx { gamma: 1.5 });
        assert!(OfflineAlgorithm::from_name("nope", None).is_err());
    }
}
