//! Data-center cost models that generate problem instances from load profiles.

mod config;
mod delay;
mod energy;
mod generate;
mod hitting;
mod pricing;

pub use config::{DataCenterModel, JobType, ModelFlags, ServerType, SwitchingSpec, Topology, MODEL_VERSION};
pub use delay::{dynamic_delay, static_delay};
pub use energy::EnergyConsumptionModel;
pub use generate::{sample_profiles, InstanceKind, LoadProfile, OnlineInput, DEFAULT_PROFILE_SAMPLES};
pub use hitting::SlotOutcome;
pub use pricing::{EnergyPricing, EnergySource, Series};
pub mod presets;
