//! Command-line front end for `quatsurf`.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 regularity
//! violation, 3 a probe verdict of `Violates`.

pub mod commands;
pub mod config;
pub mod output;
pub mod project;

use thiserror::Error;

use quatsurf::error::{GeomError, RegularityNode};

pub use commands::{run, Cli, Command, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("regularity violated at {} node(s); first at {:?}", .0.len(), .0.first())]
    Regularity(Vec<RegularityNode>),

    #[error("pole collision: {0}")]
    PoleCollision(project::PoleCollision),

    #[error("geometry error: {0}")]
    Geometry(GeomError),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::RegularityViolation { nodes } => CliError::Regularity(nodes),
            other => CliError::Geometry(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Regularity(_) => 2,
            _ => 1,
        }
    }
}

pub const EXIT_VIOLATES: i32 = 3;
