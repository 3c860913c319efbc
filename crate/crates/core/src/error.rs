use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unknown group: {0}")]
    UnknownGroup(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("too large: {what} ({size} exceeds limit {limit})")]
    TooLarge {
        what: String,
        size: usize,
        limit: usize,
    },
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("central character mismatch: {0}")]
    CentralCharacterMismatch(String),
    #[error("family is not in the monocentre: {0}")]
    FamilyNotInMonocentre(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAGroup(_) => "NotAGroup",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotASubgroup(_) => "NotASubgroup",
            Error::InvalidTriple(_) => "InvalidTriple",
            Error::TooLarge { .. } => "TooLarge",
            Error::Inconsistent => "Inconsistent",
            Error::CentralCharacterMismatch(_) => "CentralCharacterMismatch",
            Error::FamilyNotInMonocentre(_) => "FamilyNotInMonocentre",
            Error::Precondition(_) => "Precondition",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::Parse(_) => "Parse",
        }
    }

    pub(crate) fn too_large(what: impl Into<String>, size: usize, limit: usize) -> Self {
        Error::TooLarge {
            what: what.into(),
            size,
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
