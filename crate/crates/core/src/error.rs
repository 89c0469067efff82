use thiserror::Error;

use crate::game::{GameKind, Violation};
use crate::lp::LpStatus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("constraint `{constraint}` has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        constraint: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("LP is not optimal (status: {0:?})")]
    NotOptimal(LpStatus),
    #[error("{what} count {actual} exceeds cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("edge lower bounds admit no feasible matching")]
    LowerBoundsInfeasible,
    #[error("operation `{operation}` does not apply to {kind:?} games")]
    WrongKind {
        operation: &'static str,
        kind: GameKind,
    },
    #[error("dual solution is not optimal for the instance's dual LP")]
    NotOptimalDual,
    #[error("imputation is not in the core")]
    NotInCore,
    #[error("solution is not a vertex of the feasible region")]
    NotVertex,
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal check failed: {0}")]
    CheckFailed(String),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
