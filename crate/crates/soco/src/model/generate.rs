use super::config::DataCenterModel;
use super::pricing::EnergyPricing;
use super::delay::{dynamic_delay, static_delay};
use crate::error::{Result, SocoError};
use crate::problem::{CostFn, HittingCostStore, LoadCost, ProblemInstance, SbloProblem, SloProblem, SscoProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Number of jobs of each load type arriving in one slot.
pub type LoadProfile = Vec<f64>;

/// Which problem class to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Ssco,
    Sblo,
    Slo,
}

/// Information revealed at slot `slot`: its load and sampled predictions of the following slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct OnlineInput {
    pub slot: usize,
    pub load: LoadProfile,
    /// `predictions[j][i]` are samples of the load of type `i` in slot `slot + 1 + j`.
    #[serde(default)]
    pub predictions: Vec<Vec<Vec<f64>>>,
}

/// Default number of combined profiles drawn from a sampled prediction.
pub const DEFAULT_PROFILE_SAMPLES: usize = 16;

/// Combines per-type prediction samples into `n` load profiles by drawing one sample of each
/// type per profile.
pub fn sample_profiles(prediction: &[Vec<f64>], n: usize, rng: &mut impl Rng) -> Result<Vec<LoadProfile>> {
    if prediction.iter().any(|s| s.is_empty()) {
        return Err(SocoError::InvalidArgument("every load type needs at least one predicted sample".into()));
    }
    if prediction.iter().all(|s| s.len() == 1) {
        return Ok(vec![prediction.iter().map(|s| s[0]).collect()]);
    }
    Ok((0..n.max(1)).map(|_| prediction.iter().map(|s| s[rng.gen_range(0..s.len())]).collect()).collect())
}

fn slot_cost(model: &DataCenterModel, t: usize, x: &[f64], load: &[f64]) -> f64 {
    match model.hitting_cost_at(t, x, load) {
        Ok(o) => o.cost,
        Err(e) => {
            log::debug!("slot {t}: {e}");
            f64::INFINITY
        }
    }
}

impl DataCenterModel {
    fn check_profiles(&self, loads: &[LoadProfile]) -> Result<()> {
        for (t, load) in loads.iter().enumerate() {
            self.check_load(t + 1, load)?;
            self.check_supply(t + 1)?;
        }
        Ok(())
    }

    fn require_simple(&self, what: &str) -> Result<f64> {
        if self.load_types() != 1 || self.topology().locations != 1 {
            return Err(SocoError::InvalidArgument(format!(
                "{what} instances need a single location, source and job type"
            )));
        }
        self.pricing
            .flat_price(1)
            .ok_or_else(|| SocoError::InvalidArgument(format!("{what} instances need flat energy pricing")))
    }

    pub fn generate_ssco(&self, loads: &[LoadProfile]) -> Result<SscoProblem> {
        self.validate()?;
        self.check_profiles(loads)?;
        let model = Arc::new(self.clone());
        let horizon = loads.len();
        let loads = Arc::new(loads.to_vec());
        let costs = HittingCostStore::certain(move |t, x| match loads.get(t.wrapping_sub(1)) {
            Some(load) => slot_cost(&model, t, x, load),
            None => f64::INFINITY,
        });
        SscoProblem::new(horizon, self.bounds(), self.switching_costs(), costs)
    }

    /// Per-server cost of type `k` at per-server load `u` for the single job type.
    fn per_server_cost(&self, k: usize, price: f64, u: f64) -> f64 {
        let s = &self.server_types[k];
        let job = &self.job_types[0];
        let delta = self.slot_length_seconds;
        let dynamic = self.dynamic_durations();
        let eta = job.processing_times.as_ref().map_or(0.0, |v| v[k]);
        let (utilization, delay) = if dynamic {
            (u * eta / delta, dynamic_delay(&[u], &[eta], 1.0, delta))
        } else {
            (u / s.max_jobs, static_delay(s.service_rate, u))
        };
        let energy = price * s.energy.consumption(delta, utilization.min(s.max_utilization));
        if u <= 0.0 || job.revenue_slope == 0.0 {
            return energy;
        }
        let extra = job.constant_delays.as_ref().map_or(0.0, |v| v[k])
            + self.topology().network_delay[0][0]
            + if dynamic { eta } else { 0.0 };
        energy + u * job.revenue_slope * (delay + extra - job.min_delay).max(0.0)
    }

    fn max_per_server_load(&self, k: usize) -> f64 {
        let s = &self.server_types[k];
        if self.job_types[0].prohibited.contains(&k) {
            return 0.0;
        }
        if self.dynamic_durations() {
            let eta = self.job_types[0].processing_times.as_ref().map_or(0.0, |v| v[k]);
            if eta > 0.0 {
                s.max_utilization * self.slot_length_seconds / eta
            } else {
                f64::INFINITY
            }
        } else {
            s.max_utilization * s.max_jobs
        }
    }

    /// Balanced-load instance; requires one location, source and job type with flat pricing.
    pub fn generate_sblo(&self, loads: &[LoadProfile]) -> Result<SbloProblem> {
        self.validate()?;
        self.require_simple("balanced-load")?;
        self.check_profiles(loads)?;
        let EnergyPricing::Flat { cost } = &self.pricing else { unreachable!("checked flat pricing") };
        let load_costs = (0..self.dim())
            .map(|k| {
                let model = Arc::new(self.clone());
                let max_load = self.max_per_server_load(k);
                if cost.is_constant() {
                    let price = cost.at(1);
                    LoadCost::stationary(move |u| model.per_server_cost(k, price, u), max_load)
                } else {
                    let cost = cost.clone();
                    LoadCost::new(move |t, u| model.per_server_cost(k, cost.at(t), u), max_load)
                }
            })
            .collect();
        let totals = loads.iter().map(|l| l.iter().sum()).collect();
        let mut p = SbloProblem::new(self.bounds(), self.switching_costs(), load_costs, totals)?;
        p.integral = true;
        Ok(p)
    }

    /// Load-optimization instance: active servers run at full utilization and the energy price
    /// is averaged over the horizon.
    pub fn generate_slo(&self, loads: &[LoadProfile]) -> Result<SloProblem> {
        self.validate()?;
        self.require_simple("load-optimization")?;
        self.check_profiles(loads)?;
        let EnergyPricing::Flat { cost } = &self.pricing else { unreachable!("checked flat pricing") };
        let price = cost.mean(loads.len().max(1));
        let costs = self
            .server_types
            .iter()
            .map(|s| price * s.energy.consumption(self.slot_length_seconds, 1.0))
            .collect();
        let totals = loads.iter().map(|l| l.iter().sum()).collect();
        SloProblem::new(self.bounds(), self.switching_costs(), costs, totals)
    }

    pub fn generate_instance(&self, kind: InstanceKind, loads: &[LoadProfile]) -> Result<ProblemInstance> {
        Ok(match kind {
            InstanceKind::Ssco => ProblemInstance::Ssco(self.generate_ssco(loads)?),
            InstanceKind::Sblo => ProblemInstance::Sblo(self.generate_sblo(loads)?),
            InstanceKind::Slo => ProblemInstance::Slo(self.generate_slo(loads)?),
        })
    }

    /// Empty instance of the given kind to be grown by [`DataCenterModel::update_instance`].
    pub fn empty_instance(&self, kind: InstanceKind) -> Result<ProblemInstance> {
        let mut p = self.generate_instance(kind, &[])?;
        if let ProblemInstance::Ssco(s) = &mut p {
            s.costs = HittingCostStore::new();
            s.horizon_known = false;
        }
        Ok(p)
    }

    /// Adds the slot `input.slot` and its predicted successors to an instance.
    ///
    /// Predicted slots of SSCO instances carry one cost sample per combined load profile;
    /// slots beyond the prediction window reuse the last prediction. Balanced-load and
    /// load-optimization instances store the mean predicted load.
    pub fn update_instance(&self, instance: &mut ProblemInstance, input: &OnlineInput, samples: usize, seed: u64) -> Result<()> {
        let tau = input.slot;
        if tau == 0 {
            return Err(SocoError::InvalidArgument("slots are numbered from 1".into()));
        }
        self.check_load(tau, &input.load)?;
        self.check_supply(tau)?;
        for (j, pred) in input.predictions.iter().enumerate() {
            if pred.len() != self.load_types() {
                return Err(SocoError::InfeasibleLoad { slot: tau + 1 + j, reason: "prediction has wrong number of load types".into() });
            }
        }
        let w = input.predictions.len();
        match instance {
            ProblemInstance::Ssco(p) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (tau as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let mut profiles = Vec::with_capacity(w);
                for (j, pred) in input.predictions.iter().enumerate() {
                    let drawn = sample_profiles(pred, samples, &mut rng)?;
                    for prof in &drawn {
                        self.check_load(tau + 1 + j, prof)?;
                    }
                    profiles.push(drawn);
                }
                let model = Arc::new(self.clone());
                let current = input.load.clone();
                let eval: CostFn = Arc::new(move |t, x| {
                    if t <= tau || profiles.is_empty() {
                        return vec![slot_cost(&model, t, x, &current)];
                    }
                    let j = (t - tau - 1).min(profiles.len() - 1);
                    profiles[j].iter().map(|load| slot_cost(&model, t, x, load)).collect()
                });
                p.costs.insert(tau, eval);
                p.horizon = tau + w;
                p.horizon_known = false;
            }
            ProblemInstance::Sblo(SbloProblem { loads, horizon, .. }) | ProblemInstance::Slo(SloProblem { loads, horizon, .. }) => {
                if loads.len() + 1 < tau {
                    return Err(SocoError::InvalidArgument(format!("slot {tau} skips earlier slots")));
                }
                loads.truncate(tau - 1);
                loads.push(input.load.iter().sum());
                for pred in &input.predictions {
                    loads.push(pred.iter().map(|s| s.iter().sum::<f64>() / s.len().max(1) as f64).sum());
                }
                *horizon = loads.len();
            }
            ProblemInstance::Sco(_) => {
                return Err(SocoError::InvalidArgument("data-center models do not generate SCO instances".into()))
            }
        }
        Ok(())
    }
}
