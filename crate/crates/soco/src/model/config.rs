use super::energy::EnergyConsumptionModel;
use super::pricing::EnergyPricing;
use crate::error::{Result, SocoError};
use serde::{Deserialize, Serialize};

pub const MODEL_VERSION: u32 = 1;

/// How the cost of toggling a server is specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SwitchingSpec {
    Direct {
        beta: f64,
    },
    /// Sum of toggling energy, migration, wear-and-tear and risk.
    Components {
        toggle_energy: f64,
        /// Migration delay in seconds, charged at peak power.
        migration_delay: f64,
        wear: f64,
        risk: f64,
        energy_price: f64,
    },
    /// Multiple of the energy cost of one idle slot.
    Normalized {
        slots: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerType {
    #[serde(default)]
    pub name: String,
    /// Number of servers available.
    pub count: u64,
    /// Maximum number of jobs per server and slot.
    pub max_jobs: f64,
    /// Maximum utilization in `(0, 1]`.
    #[serde(default = "one")]
    pub max_utilization: f64,
    pub energy: EnergyConsumptionModel,
    pub switching: SwitchingSpec,
    #[serde(default = "one")]
    pub service_rate: f64,
    /// Data center this type belongs to.
    #[serde(default)]
    pub location: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct JobType {
    #[serde(default)]
    pub name: String,
    /// Revenue lost per job and unit of delay beyond `min_delay`.
    #[serde(default)]
    pub revenue_slope: f64,
    /// Smallest delay that causes a revenue loss.
    #[serde(default)]
    pub min_delay: f64,
    /// Processing time per server type at full utilization, in seconds.
    #[serde(default)]
    pub processing_times: Option<Vec<f64>>,
    /// Constant delay per server type.
    #[serde(default)]
    pub constant_delays: Option<Vec<f64>>,
    /// Server types that must not process this job type.
    #[serde(default)]
    pub prohibited: Vec<usize>,
}

/// Geographically distributed data centers and job sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub locations: usize,
    pub sources: usize,
    /// `network_delay[location][source]`.
    pub network_delay: Vec<Vec<f64>>,
}

impl Default for Topology {
    fn default() -> Self {
        Topology { locations: 1, sources: 1, network_delay: vec![vec![0.0]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ModelFlags {
    /// Whether job durations determine utilization and delay; defaults to on when processing
    /// times differ between server types.
    #[serde(default)]
    pub dynamic_durations: Option<bool>,
}

/// A data center (or network of data centers) configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataCenterModel {
    pub version: u32,
    pub slot_length_seconds: f64,
    pub server_types: Vec<ServerType>,
    pub job_types: Vec<JobType>,
    pub pricing: EnergyPricing,
    #[serde(default)]
    pub topology: Option<Topology>,
    #[serde(default)]
    pub flags: ModelFlags,
}

fn invalid(msg: impl Into<String>) -> SocoError {
    SocoError::InvalidArgument(msg.into())
}

impl DataCenterModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let model: DataCenterModel =
            serde_json::from_str(text).map_err(|e| SocoError::ParseError { line: e.line(), message: e.to_string() })?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn topology(&self) -> Topology {
        self.topology.clone().unwrap_or_default()
    }

    /// Number of server types (dimensions).
    pub fn dim(&self) -> usize {
        self.server_types.len()
    }

    /// Number of load types, one per source and job type.
    pub fn load_types(&self) -> usize {
        self.topology().sources * self.job_types.len()
    }

    pub fn bounds(&self) -> Vec<f64> {
        self.server_types.iter().map(|s| s.count as f64).collect()
    }

    pub fn dynamic_durations(&self) -> bool {
        self.flags.dynamic_durations.unwrap_or_else(|| {
            self.job_types.iter().any(|j| match &j.processing_times {
                Some(eta) => eta.windows(2).any(|w| w[0] != w[1]),
                None => false,
            })
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != MODEL_VERSION {
            return Err(invalid(format!("unsupported model version {} (expected {MODEL_VERSION})", self.version)));
        }
        if !(self.slot_length_seconds > 0.0) {
            return Err(invalid("slot length must be positive"));
        }
        if self.server_types.is_empty() || self.job_types.is_empty() {
            return Err(invalid("a model needs at least one server type and one job type"));
        }
        let topo = self.topology();
        if topo.locations == 0
            || topo.sources == 0
            || topo.network_delay.len() != topo.locations
            || topo.network_delay.iter().any(|r| r.len() != topo.sources || r.iter().any(|v| !(*v >= 0.0)))
        {
            return Err(invalid("topology network delays must be a nonnegative locations x sources matrix"));
        }
        let d = self.dim();
        for (k, s) in self.server_types.iter().enumerate() {
            s.energy.validate()?;
            if s.count == 0 || !(s.max_jobs > 0.0) || !(s.max_utilization > 0.0 && s.max_utilization <= 1.0) {
                return Err(invalid(format!("server type {k} needs a positive count, job capacity and utilization in (0, 1]")));
            }
            if !(s.service_rate > 0.0) || s.location >= topo.locations {
                return Err(invalid(format!("server type {k} has an invalid service rate or location")));
            }
        }
        let dynamic = self.dynamic_durations();
        for (i, j) in self.job_types.iter().enumerate() {
            if !(j.revenue_slope >= 0.0) || !(j.min_delay >= 0.0) {
                return Err(invalid(format!("job type {i} needs nonnegative revenue slope and minimal delay")));
            }
            let sized = |v: &Option<Vec<f64>>| v.as_ref().map_or(true, |v| v.len() == d && v.iter().all(|x| *x >= 0.0));
            if !sized(&j.processing_times) || !sized(&j.constant_delays) || j.prohibited.iter().any(|k| *k >= d) {
                return Err(invalid(format!("job type {i} has per-server-type data of the wrong size")));
            }
            if dynamic {
                let eta = j.processing_times.as_ref().ok_or_else(|| invalid(format!("job type {i} lacks processing times")))?;
                if !eta.iter().enumerate().any(|(k, e)| *e <= self.slot_length_seconds && !j.prohibited.contains(&k)) {
                    return Err(invalid(format!("job type {i} fits into a slot on no server type")));
                }
            }
        }
        self.pricing.validate()?;
        for k in 0..d {
            if !(self.switching_cost(k) > 0.0) {
                return Err(invalid(format!("server type {k} has a nonpositive switching cost")));
            }
        }
        Ok(())
    }

    /// Mean flat energy price over `1..=horizon`, or the cheapest source for quota pricing.
    fn reference_price(&self) -> f64 {
        match &self.pricing {
            EnergyPricing::Flat { cost } => cost.mean(cost_len(cost)),
            EnergyPricing::Quotas { sources } => {
                sources.iter().map(|s| s.cost.mean(cost_len(&s.cost))).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Energy cost of one idle server of type `k` during one slot.
    pub fn idle_energy_cost(&self, k: usize) -> f64 {
        let s = &self.server_types[k];
        self.reference_price() * s.energy.consumption(self.slot_length_seconds, 0.0)
    }

    /// Switching cost of type `k`.
    pub fn switching_cost(&self, k: usize) -> f64 {
        let s = &self.server_types[k];
        match s.switching {
            SwitchingSpec::Direct { beta } => beta,
            SwitchingSpec::Components { toggle_energy, migration_delay, wear, risk, energy_price } => {
                energy_price * (toggle_energy + migration_delay * s.energy.power(1.0)) + wear + risk
            }
            SwitchingSpec::Normalized { slots } => slots * self.idle_energy_cost(k),
        }
    }

    pub fn switching_costs(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.switching_cost(k)).collect()
    }

    /// Switching cost divided by the idle energy cost of one slot.
    pub fn normalized_switching_cost(&self, k: usize) -> f64 {
        self.switching_cost(k) / self.idle_energy_cost(k)
    }

    /// Maximum total load the data center can process in one slot.
    pub fn max_load(&self) -> f64 {
        self.server_types.iter().map(|s| s.max_jobs * s.count as f64).sum()
    }

    /// Checks that a load profile is nonnegative and within the total capacity.
    pub fn check_load(&self, t: usize, load: &[f64]) -> Result<()> {
        if load.len() != self.load_types() {
            return Err(SocoError::InfeasibleLoad {
                slot: t,
                reason: format!("expected {} load types, got {}", self.load_types(), load.len()),
            });
        }
        if load.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
            return Err(SocoError::InfeasibleLoad { slot: t, reason: "loads must be finite and nonnegative".into() });
        }
        let total: f64 = load.iter().sum();
        if total > self.max_load() {
            return Err(SocoError::InfeasibleLoad {
                slot: t,
                reason: format!("total load {total} exceeds capacity {}", self.max_load()),
            });
        }
        Ok(())
    }

    /// Checks that every location's peak consumption can be supplied during slot `t`.
    pub fn check_supply(&self, t: usize) -> Result<()> {
        for j in 0..self.topology().locations {
            let demand: f64 = self
                .server_types
                .iter()
                .filter(|s| s.location == j)
                .map(|s| s.count as f64 * s.energy.consumption(self.slot_length_seconds, s.max_utilization))
                .sum();
            let supply = self.pricing.supply(j, t);
            if demand > supply {
                return Err(SocoError::InsufficientSupply { demand, supply });
            }
        }
        Ok(())
    }
}

fn cost_len(s: &super::pricing::Series) -> usize {
    match s {
        super::pricing::Series::Constant(_) => 1,
        super::pricing::Series::PerSlot(v) => v.len().max(1),
    }
}
