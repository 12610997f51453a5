use thiserror::Error;

use crate::analysis::SearchError;
use crate::determinize::DeterminizeError;
use crate::harness::HarnessError;
use crate::machines::{MachineError, ParseError};
use crate::reduction::ReductionError;
use crate::semantics::ConfigError;
use crate::words::WordError;

/// Any error the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Determinize(#[from] DeterminizeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

impl Error {
    /// Whether the error is a resource budget running out rather than bad
    /// input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Search(_) | Error::Determinize(_))
    }
}
