//! Command-line front end for `harmonic-koebe`: map-spec parsing,
//! coefficient and value dumps, verification suites, collision search,
//! bound reports and grid rendering.

pub mod cli;
pub mod commands;
pub mod error;
pub mod render;
pub mod spec;

pub use commands::{Format, Output, Suite};
pub use error::{exit, CliError, Result};
pub use spec::{parse_map_spec, MapSpec, Spec};
