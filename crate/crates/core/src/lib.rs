//! Exact computation of monotone and classical single Hurwitz numbers.

pub mod closed_forms;
pub mod error;
pub mod numerics;
pub mod joincut;
pub mod oracle;
pub mod pipeline;
pub mod qseries;

pub use error::{HurwitzError, Result};
pub use numerics::{Partition, Rat};
