//! Command-line front end for the coverage planner: configuration, trajectory
//! files, SVG rendering and the subcommand drivers.

pub mod config;
pub mod error;
pub mod render;
pub mod run;
pub mod trajfile;

pub use config::{FileConfig, MapSource, Overrides, RunConfig};
pub use error::{CliError, Result};
pub use trajfile::TrajectoryFile;
