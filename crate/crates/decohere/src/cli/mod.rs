//! Configuration ingestion, scenario execution and deterministic CSV
//! emission for the `decohere` binary.
//!
//! Scenarios are described by a flat `key = value` text file (see
//! [`config`] for the key table); trailing `key=value` command-line
//! arguments override file entries. All runners return the full CSV
//! payload as a string so identical configurations produce byte-identical
//! output regardless of where it is written.

pub mod config;
mod csv;
mod run;

pub use config::{ConfigError, PacketSpec, ScenarioConfig, TauScale};
pub use csv::format_float;
pub use run::{run_evolve, run_figure1, run_sweep, run_validate, RunError, ValidationReport};
