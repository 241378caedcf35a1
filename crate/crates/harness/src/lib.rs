//! Node generators, the numerical experiments and file formats behind the
//! `ratiep` command line tool.

pub mod complex_text;
pub mod error;
pub mod experiment;
pub mod files;
pub mod generators;
pub mod output;

pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, ExperimentId, ExperimentSpec, Outcome, ResultRow, Strategy};
