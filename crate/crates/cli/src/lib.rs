//! Command-line layer for `gbsp-core`: image decoding, label-map and mask
//! files, overlays, presets, run reports and the scaling benchmark.

pub mod bench;
pub mod cli;
pub mod error;
pub mod formats;
pub mod imageio;
pub mod overlay;
pub mod preset;
pub mod report;

pub use error::{CliError, Result};
