//! Command line, file formats and parallel drivers for `resonance-core`.
//!
//! - [`config`]: the TOML run configuration and its key overrides.
//! - [`artifact`]: hashed JSON envelopes, CSV with `#` headers, atomic writes.
//! - [`formats`]: resonator set and zero cache files.
//! - [`suite`]: the `verify` checks.
//! - [`run`]: the `build`, `verify`, `hunt` and `sample` commands.

pub mod artifact;
pub mod config;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod run;
pub mod suite;

pub use error::{CliError, Result};
pub use resonance_core as core;
