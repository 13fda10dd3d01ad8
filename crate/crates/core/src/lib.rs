//! Second-order state of two Unruh-DeWitt detectors coupled to a conformally
//! coupled massless scalar in global AdS4.
//!
//! Everything here is `no_std` with `alloc`. Lengths and times are measured in
//! units of a reference switching width; detector A always sits at the centre
//! of global coordinates.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod adsmodes;
pub mod elements;
pub mod oracle;
pub mod quantify;
pub mod specfun;
pub mod switching;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use adsmodes::{AdsGeometry, BoundaryCondition, CommutatorEvent, ModeIndex, Motion};
pub use elements::{ElementSet, Scenario, ScenarioKind, Truncation, TruncationReport};
pub use quantify::TwoDetectorState;
pub use switching::{DetectorConfig, TildeFrame};
