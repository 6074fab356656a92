//! Standard-library companion to `classprod-core`: file ingest, the scenario
//! catalog and runner, report serialization, a group cache, and the CLI.

pub mod cache;
pub mod cli;
pub mod error;
pub mod handle;
pub mod ingest;
pub mod report;
pub mod scenario;

pub use error::AppError;
