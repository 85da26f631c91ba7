//! Uni-dimensional online algorithms.

mod lcp;
mod memoryless;
mod probabilistic;
mod rbg;
mod relaxation;

pub use lcp::{int_lcp_step, lcp_step, IntLcp, Lcp, LcpMemory};
pub use memoryless::{memoryless_step, Memoryless};
pub use probabilistic::{probabilistic_step, ProbDistribution, Probabilistic, INITIAL_SPREAD};
pub use rbg::{RandomlyBiasedGreedy, RbgState};
pub use relaxation::{relaxed_cost, round_step, FractionalKind, RandomizedRelaxation, RoundingState};
