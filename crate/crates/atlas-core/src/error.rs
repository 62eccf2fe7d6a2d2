use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can surface.
///
/// Each variant maps to exactly one stable `E_*` code (see [`Error::code`]);
/// the CLI prints that code so scripts can match on it without parsing
/// messages.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed document (JSON syntax, missing fields, bad values).
    #[error("parse error: {0}")]
    Parse(String),

    /// Two axioms in one system share a key.
    #[error("duplicate axiom key '{key}' in system '{system}'")]
    DuplicateKey { system: String, key: String },

    /// An axiom system definition contains no axioms.
    #[error("axiom system '{0}' has no axioms")]
    EmptySystem(String),

    /// A registry already contains a system with this id.
    #[error("axiom system '{0}' is already registered")]
    DuplicateSystem(String),

    /// The same system id appears twice in a composition.
    #[error("system '{0}' appears more than once in the composition")]
    DuplicatePart(String),

    /// compose() was called with no systems.
    #[error("cannot compose an empty list of systems")]
    EmptyComposition,

    /// A theorem id already exists in the corpus.
    #[error("theorem id '{0}' already exists in the corpus")]
    DuplicateId(String),

    /// Vector length does not match the system dimension.
    #[error("vector has {actual} entries but system '{system}' has dimension {expected}")]
    DimensionMismatch {
        system: String,
        expected: usize,
        actual: usize,
    },

    /// A referenced system id is not in the registry.
    #[error("unknown axiom system '{0}'")]
    UnknownSystem(String),

    /// A vector entry lies outside the permitted range.
    #[error("vector entry at index {index} is {value}, {reason}")]
    OutOfRangeWeight {
        index: usize,
        value: f64,
        reason: &'static str,
    },

    /// A record failed a structural invariant (empty id, empty name, ...).
    #[error("invalid record: {0}")]
    InvalidRecord(String),

    /// concat_vectors() inputs do not match the composite's parts.
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),

    /// Two vectors from different systems were compared.
    #[error("cannot compare vectors from systems '{left}' and '{right}'")]
    SystemMismatch { left: String, right: String },

    /// Cosine similarity is undefined for a vector with empty support.
    #[error("zero vector: cosine is undefined for theorem/vector '{0}' with empty axiom support")]
    ZeroVector(String),

    /// An operation over one system received theorems from several.
    #[error("mixed systems: expected all theorems on '{expected}', found '{found}'")]
    MixedSystems { expected: String, found: String },

    /// A slice-based operation received no theorems.
    #[error("empty theorem slice")]
    EmptySlice,

    /// Clustering or outlier scoring received fewer items than required.
    #[error("too few items: {0}")]
    TooFewItems(String),

    /// Support algebra received an empty theorem list.
    #[error("empty theorem list")]
    EmptyList,

    /// No corpus theorems exist on the requested system.
    #[error("no corpus theorems on system '{0}'")]
    NoCorpusForSystem(String),

    /// The assistant was given an empty statement.
    #[error("statement is empty")]
    EmptyStatement,

    /// The remote backend could not be reached or refused the request.
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),

    /// The backend reply stayed malformed after one repair attempt.
    #[error("malformed backend reply: {0}")]
    MalformedBackendReply(String),

    /// The backend named a system that is not registered.
    #[error("backend reply names unknown system '{0}'")]
    UnknownSystemInReply(String),

    /// Theorem id not present in the corpus.
    #[error("unknown theorem '{0}'")]
    UnknownTheorem(String),
}

impl Error {
    /// Stable machine-greppable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "E_PARSE",
            Error::DuplicateKey { .. } => "E_DUPLICATE_KEY",
            Error::EmptySystem(_) => "E_EMPTY_SYSTEM",
            Error::DuplicateSystem(_) => "E_DUPLICATE_SYSTEM",
            Error::DuplicatePart(_) => "E_DUPLICATE_PART",
            Error::EmptyComposition => "E_EMPTY_COMPOSITION",
            Error::DuplicateId(_) => "E_DUPLICATE_ID",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::UnknownSystem(_) => "E_UNKNOWN_SYSTEM",
            Error::OutOfRangeWeight { .. } => "E_OUT_OF_RANGE_WEIGHT",
            Error::InvalidRecord(_) => "E_INVALID_RECORD",
            Error::CompositionMismatch(_) => "E_COMPOSITION_MISMATCH",
            Error::SystemMismatch { .. } => "E_SYSTEM_MISMATCH",
            Error::ZeroVector(_) => "E_ZERO_VECTOR",
            Error::MixedSystems { .. } => "E_MIXED_SYSTEMS",
            Error::EmptySlice => "E_EMPTY_SLICE",
            Error::TooFewItems(_) => "E_TOO_FEW_ITEMS",
            Error::EmptyList => "E_EMPTY_LIST",
            Error::NoCorpusForSystem(_) => "E_NO_CORPUS_FOR_SYSTEM",
            Error::EmptyStatement => "E_EMPTY_STATEMENT",
            Error::BackendUnavailable(_) => "E_BACKEND_UNAVAILABLE",
            Error::MalformedBackendReply(_) => "E_MALFORMED_BACKEND_REPLY",
            Error::UnknownSystemInReply(_) => "E_UNKNOWN_SYSTEM_IN_REPLY",
            Error::UnknownTheorem(_) => "E_UNKNOWN_THEOREM",
        }
    }
}
