use std::fmt;

use thiserror::Error;

/// One problem found while validating an arena or a DFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Where the problem is, e.g. `vertex v3` or `edge #2 (v0 -> v1)`.
    pub location: String,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NoVertices,
    NoOutgoingEdge,
    NegativeWeight(i64),
    DuplicateId,
    DuplicateEdge,
    DanglingEdge,
    EmptyColor,
    EpsilonAccepted,
    TransitionTableNotTotal,
    UnknownColor(String),
    UnknownState,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::NoVertices => f.write_str("no vertices"),
            ViolationKind::NoOutgoingEdge => f.write_str("no outgoing edge"),
            ViolationKind::NegativeWeight(w) => write!(f, "negative weight {w}"),
            ViolationKind::DuplicateId => f.write_str("duplicate id"),
            ViolationKind::DuplicateEdge => f.write_str("duplicate edge"),
            ViolationKind::DanglingEdge => f.write_str("dangling edge"),
            ViolationKind::EmptyColor => f.write_str("empty color"),
            ViolationKind::EpsilonAccepted => f.write_str("epsilon accepted"),
            ViolationKind::TransitionTableNotTotal => f.write_str("transition table not total"),
            ViolationKind::UnknownColor(c) => write!(f, "unknown color {c}"),
            ViolationKind::UnknownState => f.write_str("unknown state"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.kind)
    }
}

/// Result of validating an arena or DFA. Violations are data, not errors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, location: impl Into<String>, kind: ViolationKind) {
        self.violations.push(Violation {
            location: location.into(),
            kind,
        });
    }

    pub fn has(&self, pred: impl Fn(&ViolationKind) -> bool) -> bool {
        self.violations.iter().any(|v| pred(&v.kind))
    }

    pub fn into_result(self) -> Result<(), Error> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(ValidationReport),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown color {color:?} at position {position}")]
    UnknownColor { position: usize, color: String },

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("not a path: no edge from {from} to {to} at step {position}")]
    NotAPath {
        position: usize,
        from: String,
        to: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("malformed lasso: {0}")]
    MalformedLasso(String),

    #[error("values may exceed the 64-bit range: (|V|*|Q| + 1) * W does not fit")]
    ValueRangeOverflow,

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error signals a solver bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInvariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
