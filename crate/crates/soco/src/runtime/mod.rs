//! Trace ingestion, streaming sessions, the TCP server and artifact writers.

pub mod output;
pub mod server;
mod session;
mod solve;
mod stats;
mod trace;

pub use solve::{compare, dynamic_optimum, solve_offline, OfflineAlgorithm};
pub use session::{trace_inputs, CostSoFar, PredictionNoise, StepOutcome, StreamSession};
pub use stats::{synthetic_diurnal, trace_stats, TraceStats};
pub use trace::{ingest_trace, parse_trace, write_trace, Trace};
