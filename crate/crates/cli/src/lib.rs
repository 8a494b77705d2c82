//! Configuration, stage orchestration and exit codes behind the
//! `polyfrolov` binary.

pub mod config;
pub mod error;
pub mod log;
pub mod pipeline;

pub use config::{Overrides, PipelineConfig};
pub use error::{exit, CliError, StageExt, EXIT_CODE_HELP};
pub use log::Logger;
pub use pipeline::{policy_text, precision_policy, run_pipeline, PipelineOutput, PipelineReport};
