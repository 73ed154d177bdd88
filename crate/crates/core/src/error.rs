use std::fmt;

use thiserror::Error;

use crate::ast::Var;

/// A parse failure with a 1-based position in the input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl SourceError {
    pub fn new(message: impl Into<String>, line: usize, column: usize) -> Self {
        SourceError { message: message.into(), line, column }
    }
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for SourceError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] SourceError),

    #[error("valuation is not compatible: free variable(s) {} have no value", join_vars(.missing))]
    Incompatible { missing: Vec<Var> },

    #[error("register `{0}` was read before it was assigned")]
    UndefinedRegister(Var),

    #[error("binder variable `{0}` occurs more than once; alpha-rename the expression first")]
    NotAlphaRenamed(Var),

    #[error("variable `{0}` is not free in the expression")]
    NotFree(Var),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

fn join_vars(vars: &[Var]) -> String {
    vars.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
