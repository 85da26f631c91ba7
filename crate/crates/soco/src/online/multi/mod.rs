mod descent;
mod lazy;
mod predictive;

pub use descent::{
    box_minimum, d_obd_step, gradient, obd_meta, ogd_step, p_obd_step, Balance, DistanceGenerating, Obd, ObdOptions, Ogd,
};
pub use lazy::{build_lanes, validate_server_types, BudgetMode, LaneState, LazyBudgetSblo, LazyBudgetSbloRefined, LazyBudgetSlo};
pub use predictive::{Afhc, Rhc};
