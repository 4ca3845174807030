//! Problem files in, JSON reports and SVG figures out.

pub mod pipeline;
pub mod problem;
pub mod report;
pub mod svg;

use thiserror::Error;

pub use pipeline::{run_pipeline, Mode, RunConfig};
pub use problem::{parse_problem, parse_problem_str, ProblemSpec};
pub use report::{Report, Verdict};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const REFUSED: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("problem file syntax error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid problem: {field}: {message}")]
    Validation { field: String, message: String },
    #[error("refused at {stage}: hypothesis \"{hypothesis}\" violated: {message}")]
    Refusal { stage: String, hypothesis: String, message: String },
    #[error("internal inconsistency at {stage}: {message}")]
    Internal { stage: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal { .. } => exit::INTERNAL,
            _ => exit::REFUSED,
        }
    }
}
