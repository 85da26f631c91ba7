use super::config::DataCenterModel;
use super::delay::{dynamic_delay, static_delay};
use crate::error::{Result, SocoError};
use crate::numerics::{minimize, ConvexProgram, Tolerance};
use crate::problem::FEASIBILITY_SLACK;
use serde::Serialize;

/// Hitting cost of one slot with its breakdown and the optimal assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotOutcome {
    pub cost: f64,
    pub energy: f64,
    pub revenue_loss: f64,
    /// `assignment[k][i]` jobs of load type `i` processed by server type `k`.
    pub assignment: Vec<Vec<f64>>,
}

impl SlotOutcome {
    fn infinite(assignment: Vec<Vec<f64>>) -> Self {
        SlotOutcome { cost: f64::INFINITY, energy: f64::INFINITY, revenue_loss: f64::INFINITY, assignment }
    }
}

struct Slot<'a> {
    model: &'a DataCenterModel,
    t: usize,
    x: &'a [f64],
    dynamic: bool,
    jobs: usize,
    /// Constant delay added for load type `i` on server type `k`.
    extra: Vec<Vec<f64>>,
    /// Processing time of load type `i` on server type `k`.
    eta: Vec<Vec<f64>>,
}

impl<'a> Slot<'a> {
    fn new(model: &'a DataCenterModel, t: usize, x: &'a [f64]) -> Self {
        let topo = model.topology();
        let jobs = model.job_types.len();
        let dynamic = model.dynamic_durations();
        let n = model.load_types();
        let mut extra = vec![vec![0.0; n]; model.dim()];
        let mut eta = vec![vec![0.0; n]; model.dim()];
        for (k, s) in model.server_types.iter().enumerate() {
            for lt in 0..n {
                let (source, i) = (lt / jobs, lt % jobs);
                let job = &model.job_types[i];
                let duration = job.processing_times.as_ref().map_or(0.0, |v| v[k]);
                eta[k][lt] = duration;
                extra[k][lt] = job.constant_delays.as_ref().map_or(0.0, |v| v[k])
                    + topo.network_delay[s.location][source]
                    + if dynamic { duration } else { 0.0 };
            }
        }
        Slot { model, t, x, dynamic, jobs, extra, eta }
    }

    fn allowed(&self, k: usize, lt: usize) -> bool {
        self.x[k] > 0.0 && !self.model.job_types[lt % self.jobs].prohibited.contains(&k)
    }

    /// Per-server capacity of type `k` for load type `lt`.
    fn capacity(&self, k: usize, lt: usize) -> f64 {
        let s = &self.model.server_types[k];
        if self.dynamic {
            let eta = self.eta[k][lt];
            if eta > 0.0 {
                s.max_utilization * self.model.slot_length_seconds / eta
            } else {
                f64::INFINITY
            }
        } else {
            s.max_utilization * s.max_jobs
        }
    }

    /// Energy and revenue loss of an assignment.
    fn evaluate(&self, assignment: &[Vec<f64>]) -> (f64, f64) {
        let model = self.model;
        let delta = model.slot_length_seconds;
        let mut consumption = vec![0.0; model.topology().locations];
        let mut revenue = 0.0;
        for (k, s) in model.server_types.iter().enumerate() {
            let loads = &assignment[k];
            let jobs: f64 = loads.iter().sum();
            let x = self.x[k];
            if x <= 0.0 {
                if jobs > 0.0 {
                    return (f64::INFINITY, f64::INFINITY);
                }
                continue;
            }
            let (utilization, delay) = if self.dynamic {
                let sub: f64 = loads.iter().zip(&self.eta[k]).map(|(l, e)| l * e).sum();
                (sub / x / delta, dynamic_delay(loads, &self.eta[k], x, delta))
            } else {
                (jobs / x / s.max_jobs, static_delay(s.service_rate, jobs / x))
            };
            if utilization > s.max_utilization * (1.0 + FEASIBILITY_SLACK) + FEASIBILITY_SLACK {
                return (f64::INFINITY, f64::INFINITY);
            }
            consumption[s.location] += x * s.energy.consumption(delta, utilization.min(s.max_utilization));
            for (lt, l) in loads.iter().enumerate() {
                let job = &model.job_types[lt % self.jobs];
                if *l <= 0.0 || job.revenue_slope == 0.0 {
                    continue;
                }
                let lateness = (delay + self.extra[k][lt] - job.min_delay).max(0.0);
                revenue += l * job.revenue_slope * lateness;
            }
        }
        let mut energy = 0.0;
        for (j, p) in consumption.iter().enumerate() {
            match model.pricing.energy_price(j, self.t, *p) {
                Ok(v) => energy += v,
                Err(_) => return (f64::INFINITY, f64::INFINITY),
            }
        }
        (energy, revenue)
    }
}

impl DataCenterModel {
    /// Hitting cost of configuration `x` under load profile `load` during slot `t`.
    ///
    /// The load split among server types is the solution of a convex program over the
    /// assigned fractions; the last allowed type of each load type takes the remainder.
    pub fn hitting_cost_at(&self, t: usize, x: &[f64], load: &[f64]) -> Result<SlotOutcome> {
        self.check_load(t, load)?;
        let d = self.dim();
        if x.len() != d {
            return Err(SocoError::InvalidArgument(format!("configuration has {} entries, expected {d}", x.len())));
        }
        for (k, (v, s)) in x.iter().zip(&self.server_types).enumerate() {
            let bound = s.count as f64;
            if !(*v >= -FEASIBILITY_SLACK) || *v > bound + FEASIBILITY_SLACK {
                return Err(SocoError::OutOfBounds { slot: t, dim: k, value: *v, bound });
            }
        }
        let slot = Slot::new(self, t, x);
        let n = load.len();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (lt, l) in load.iter().enumerate() {
            if *l <= 0.0 {
                continue;
            }
            let allowed: Vec<usize> = (0..d).filter(|k| slot.allowed(*k, lt)).collect();
            if allowed.is_empty() {
                return Err(SocoError::InfeasibleLoad {
                    slot: t,
                    reason: format!("load type {lt} has positive load but no active server may process it"),
                });
            }
            groups.push((lt, allowed));
        }
        let assign = |w: &[f64]| -> Vec<Vec<f64>> {
            let mut a = vec![vec![0.0; n]; d];
            let mut offset = 0;
            for (lt, allowed) in &groups {
                let free = allowed.len() - 1;
                let used: f64 = w[offset..offset + free].iter().sum();
                for (j, k) in allowed.iter().enumerate() {
                    let frac = if j < free { w[offset + j] } else { (1.0 - used).max(0.0) };
                    a[*k][*lt] = load[*lt] * frac;
                }
                offset += free;
            }
            a
        };
        let mut start = Vec::new();
        for (lt, allowed) in &groups {
            let caps: Vec<f64> = allowed.iter().map(|k| x[*k] * slot.capacity(*k, *lt)).collect();
            let finite = caps.iter().all(|c| c.is_finite());
            let total: f64 = if finite { caps.iter().sum() } else { allowed.len() as f64 };
            for (j, _) in allowed.iter().enumerate().take(allowed.len() - 1) {
                start.push(if finite { caps[j] / total } else { 1.0 / total });
            }
        }
        let outcome = |w: &[f64]| {
            let a = assign(w);
            let (energy, revenue_loss) = slot.evaluate(&a);
            SlotOutcome { cost: energy + revenue_loss, energy, revenue_loss, assignment: a }
        };
        if start.is_empty() {
            return Ok(outcome(&start));
        }
        let objective = |w: &[f64]| {
            let (energy, revenue) = slot.evaluate(&assign(w));
            energy + revenue
        };
        let mut program =
            ConvexProgram::new(objective, vec![0.0; start.len()], vec![1.0; start.len()]).with_start(start.clone());
        let mut offset = 0;
        for (_, allowed) in &groups {
            let (from, to) = (offset, offset + allowed.len() - 1);
            if to - from > 1 {
                program = program.with_constraint(move |w: &[f64]| w[from..to].iter().sum::<f64>() - 1.0);
            }
            offset = to;
        }
        match minimize(&program, Tolerance::new(1e-10, false)?) {
            Ok(m) if m.value.is_finite() => Ok(outcome(&m.point)),
            Ok(_) | Err(SocoError::Infeasible(_)) => Ok(SlotOutcome::infinite(assign(&start))),
            Err(e) => Err(e),
        }
    }
}
