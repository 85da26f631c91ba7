//! Parameter sets of the two case-study models.

use super::config::{DataCenterModel, JobType, ModelFlags, ServerType, SwitchingSpec, MODEL_VERSION};
use super::energy::EnergyConsumptionModel;
use super::pricing::{EnergyPricing, Series};

const HOUR: f64 = 3600.0;

fn homogeneous(servers: u64, price: f64, energy: EnergyConsumptionModel) -> DataCenterModel {
    let eta = HOUR / 2.0;
    DataCenterModel {
        version: MODEL_VERSION,
        slot_length_seconds: HOUR,
        server_types: vec![ServerType {
            name: "server".into(),
            count: servers,
            max_jobs: HOUR / eta,
            max_utilization: 1.0,
            energy,
            switching: SwitchingSpec::Normalized { slots: 4.0 },
            service_rate: 1.0,
            location: 0,
        }],
        job_types: vec![JobType {
            name: "job".into(),
            revenue_slope: 0.1,
            min_delay: 2.5 * eta,
            processing_times: Some(vec![eta]),
            ..JobType::default()
        }],
        pricing: EnergyPricing::Flat { cost: Series::Constant(price) },
        topology: None,
        flags: ModelFlags { dynamic_durations: Some(true) },
    }
}

/// Unit energy price and constant unit power: idle servers cost as much as busy ones.
pub fn fixed_energy(servers: u64) -> DataCenterModel {
    homogeneous(servers, 1.0, EnergyConsumptionModel::Linear { idle: 1.0, peak: 1.0 })
}

/// Industrial energy price with 1 kW peak and 500 W idle power.
pub fn linear_energy(servers: u64) -> DataCenterModel {
    homogeneous(servers, 0.0677, EnergyConsumptionModel::Linear { idle: 0.5, peak: 1.0 })
}

/// Two server classes without revenue loss, for load-optimization instances.
///
/// The second class draws less power at full load but more when idle, so it is cheaper
/// to operate and more expensive to toggle.
pub fn two_server_classes(small: u64, large: u64) -> DataCenterModel {
    let mut model = linear_energy(small);
    let class = |name: &str, count, idle, peak| ServerType {
        name: name.into(),
        count,
        max_jobs: 1.0,
        max_utilization: 1.0,
        energy: EnergyConsumptionModel::Linear { idle, peak },
        switching: SwitchingSpec::Normalized { slots: 4.0 },
        service_rate: 1.0,
        location: 0,
    };
    model.server_types = vec![class("small", small, 0.5, 1.0), class("large", large, 0.65, 0.9)];
    model.job_types = vec![JobType { name: "job".into(), ..JobType::default() }];
    model.flags = ModelFlags { dynamic_durations: Some(false) };
    model
}
