use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    EmptyEdgeList,
    DuplicateEdge(String),
    DuplicateRule(String),
    MissingRule(String),
    UnknownEdge(String),
    MalformedExponent,
    ExpectedArrow,
    UnexpectedToken,
    UnexpectedChar(char),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => write!(f, "expected `edges:` header"),
            Self::EmptyEdgeList => write!(f, "empty edge list"),
            Self::DuplicateEdge(n) => write!(f, "duplicate edge declaration `{n}`"),
            Self::DuplicateRule(n) => write!(f, "edge `{n}` has more than one rule"),
            Self::MissingRule(n) => write!(f, "no rule given for edge `{n}`"),
            Self::UnknownEdge(n) => write!(f, "unknown edge symbol `{n}`"),
            Self::MalformedExponent => write!(f, "malformed exponent (only ^-1 is allowed)"),
            Self::ExpectedArrow => write!(f, "expected `->`"),
            Self::UnexpectedToken => write!(f, "unexpected token"),
            Self::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("not a pre-solenoid: {0}")]
    NotPreSolenoid(String),
    #[error("no admissible power found up to {0}")]
    NormalizationCapExceeded(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
