use thiserror::Error;

/// Every failure the analyses can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no essential symbols remain after trimming")]
    EmptyAfterTrim,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}` in allowed relation")]
    UnknownSymbolInRelation(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` has no label")]
    MissingLabel(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("empty word")]
    EmptyWord,
    #[error("result would contain {count} items, above the size cap {cap}")]
    SizeGuard { count: u128, cap: usize },
    #[error("words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("words have different label words")]
    LabelMismatch,
    #[error("word is not a word of the domain shift: {0}")]
    NotAWord(String),
    #[error("fiber is empty")]
    EmptyFiber,
    #[error("word of length {0} is too short (need at least 3)")]
    TooShort(usize),
    #[error("periodic fiber graph is empty: the periodic point is not in the image")]
    EmptyGraph,
    #[error("analysis period {required} exceeds the cap {cap}")]
    PhaseCap { required: usize, cap: usize },
    #[error("periodic preimage is never marked by its class (internal invariant violated)")]
    MarkedNever,
    #[error("not a periodic preimage of the analysed point: {0}")]
    NotAPreimage(String),
    #[error("invalid bridge: {0}")]
    InvalidBridge(String),
    #[error("row `{row}` sums to {sum}, not 1")]
    NotStochastic { row: String, sum: f64 },
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("transition matrix has no unique stationary vector on its support")]
    NoStationary,
    #[error("class {class} has no marked symbols at residue {residue}")]
    EmptyMarkedAlphabet { class: usize, residue: usize },
    #[error("matrix is not primitive on its support")]
    NotPrimitive,
    #[error("power iteration did not converge (residual {residual:e} after {iterations} iterations)")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("target rate {target} outside the attainable span [{lo}, {hi}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },
    #[error("class index {0} out of range")]
    NoSuchClass(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
