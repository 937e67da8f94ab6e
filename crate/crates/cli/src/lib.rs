//! Library side of the `exactsum` command: data generation, value files,
//! the timing harness and the method comparison report.

pub mod app;
pub mod bench;
pub mod compare;
pub mod error;
pub mod generator;
pub mod io;

pub use error::CliError;
pub use generator::{generate, GeneratorSpec, Mcg};
