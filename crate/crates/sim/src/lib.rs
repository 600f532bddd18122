//! Configuration loading, orchestration and output emission for the `sim`
//! command-line tool.

pub mod config;
pub mod error;
pub mod model;
pub mod orchestrator;
pub mod output;

pub use config::{load_config, parse_config, SystemConfig};
pub use error::SimError;
pub use orchestrator::{run_subcommand, RunInfo, Task};
