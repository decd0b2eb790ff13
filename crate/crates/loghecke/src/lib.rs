//! Instance files, reports and command dispatch for the `loghecke` CLI.

pub mod commands;
pub mod instance;
pub mod report;

pub use commands::{run_batch, run_file, run_instance, Command, RunOptions};
pub use instance::{InstanceError, InstanceFile, Q};
pub use report::{BatchReport, Report, Status};
