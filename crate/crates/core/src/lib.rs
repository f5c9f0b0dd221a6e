//! Recurrence and multicorrelation tools for sequences rounded from Hardy field functions.

pub mod error;
pub mod germ;
pub mod builtins;
pub mod correlate;
pub mod descriptor;
pub mod intersective;
pub mod patterns;
pub mod runner;
pub mod systems;
pub mod uniformity;

pub use error::{Error, Result};
