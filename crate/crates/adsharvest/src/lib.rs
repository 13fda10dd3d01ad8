//! Parameter sweeps, pinned oracle values and release gates built on
//! [`adsharvest_core`].

pub mod check;
pub mod config;
mod error;
pub mod pins;
pub mod sweep;

pub use error::{Error, Result};

/// Pins file shipped with the crate.
pub const DEFAULT_PINS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/pins/oracle.txt");
