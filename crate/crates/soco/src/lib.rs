//! Smoothed online convex optimization with switching costs.
//!
//! The crate bundles problem models and cost evaluation, offline optimal and
//! approximate solvers, uni- and multi-dimensional online algorithms, a
//! data-center cost model that turns load traces into problem instances, and
//! a small streaming runtime.

pub mod error;
pub mod model;
pub mod numerics;
pub mod offline;
pub mod online;
pub mod problem;
pub mod runtime;

pub use error::{Result, SocoError};
