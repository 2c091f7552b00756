//! Experiment runner for the `beamsim-core` models: TOML configs in, CSV
//! tables out.
//!
//! Every experiment is deterministic for a fixed config. Sweeps run on the
//! rayon pool, but results are always assembled in axis order, so thread
//! count never changes the output bytes.

pub mod config;
pub mod csv;
pub mod error;
pub mod experiments;
pub mod output;
pub mod parallel;

pub use crate::config::{load_config, parse_config, Experiment, Params};
pub use crate::csv::{compare, CsvResult};
pub use crate::error::{AppError, AppResult};
pub use crate::experiments::run;
