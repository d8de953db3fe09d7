use thiserror::Error;

use crate::audit::AuditReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("logic must declare at least one world")]
    NoWorlds,
    #[error("logic declares {0} worlds; at most {max} are supported", max = crate::kernel::MAX_WORLDS)]
    TooManyWorlds(usize),
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown sentence `{0}`")]
    UnknownSentence(String),
    #[error("sentence index {0} is out of range")]
    SentenceOutOfRange(usize),
    #[error("world index {0} is out of range")]
    WorldOutOfRange(usize),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("relation has {found} worlds but the logic has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("relation for {context} is not total: {left} and {right} are unrelated")]
    NotTotal {
        context: String,
        left: String,
        right: String,
    },
    #[error("assignment does not cover the class of base {0}")]
    MissingClass(String),
    #[error(
        "relation is not min-expressible for K = {k}: min over Mod({gamma}) is not expressible"
    )]
    MinExpressibility { k: String, gamma: String },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("table operator has no entry for K = {k}, Γ = {gamma} and no default")]
    IncompleteTable { k: String, gamma: String },
    #[error("table operator has conflicting entries for K = {k}, Γ = {gamma}")]
    ConflictingEntries { k: String, gamma: String },
    #[error("invalid critical-loop data: {0}")]
    InvalidLoop(String),
    #[error("operator violates the postulates; representability is undefined")]
    PostulateFailure(Box<AuditReport>),
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
