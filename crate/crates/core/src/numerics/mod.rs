//! Shared numerical services: quadrature, determinants, stable sinh ratios
//! and tail-bound bookkeeping.

pub mod chamber;
pub mod exec;
pub mod linalg;
pub mod partitions;
pub mod quadrature;
pub mod series;

pub use chamber::{chamber_integrate, cube_integrate, factorial};
pub use exec::Execution;
pub use linalg::{det_lu, det_with_bound, log_abs_det, pfaffian};
pub use quadrature::QuadratureRule;
pub use series::{sinh_ratio, TailBounded};
