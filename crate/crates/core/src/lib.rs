//! Combinatorial-topology tools for Arrow's theorem on restricted domains.

pub mod classes;
pub mod decisive;
mod error;
pub mod format;
pub mod nerve;
pub mod preferences;
pub mod search;
pub mod seed;
pub mod swf;

pub use error::{Error, Result};
