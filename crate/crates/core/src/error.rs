use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("truncated basis needs n_fock >= 2, got {0}")]
    BasisTooSmall(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("eigenvalue iteration did not converge within {iterations} sweeps (level {level})")]
    NoConvergence { level: usize, iterations: usize },

    #[error("truncation cap n_fock = {n_fock} reached; last residual {residual:e}")]
    TruncationCap { n_fock: usize, residual: f64 },

    #[error("{name} = {value}: {source}")]
    AtGridPoint {
        name: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("monotone gap over [{lo}, {hi}]: no interior minimum is bracketed")]
    MonotoneGap { lo: f64, hi: f64 },

    #[error("eigensystems use different truncations ({0} vs {1})")]
    TruncationMismatch(usize, usize),

    #[error("only {available} converged levels, {requested} requested")]
    InsufficientLevels { requested: usize, available: usize },

    #[error("no certified scale separation (ratio {ratio:e} < {required:e})")]
    NoScaleSeparation { ratio: f64, required: f64 },

    #[error("no partition available")]
    PartitionNotFound,

    #[error("g = 0 is excluded as a partition-search point")]
    ZeroCoupling,

    #[error("label count {labels} does not match group count {groups}")]
    LabelMismatch { labels: usize, groups: usize },

    #[error("symmetry labels must be distinct")]
    DuplicateLabels,

    #[error("eigensystem parameters match neither side of the partition")]
    ParamsMismatch,

    #[error("invalid level pair: m = {m} must be >= n = {n}")]
    PairOrder { m: usize, n: usize },

    #[error("epsilon/omega = {0} is not the resonance n = {1}")]
    NotResonant(f64, usize),

    #[error("found {found} positive roots, expected {expected}")]
    RootCount { expected: usize, found: usize },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(self, name: &'static str, value: f64) -> Error {
        Error::AtGridPoint {
            name,
            value,
            source: Box::new(self),
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::TruncationCap { .. }
            | Error::MonotoneGap { .. }
            | Error::RootCount { .. }
            | Error::InsufficientLevels { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
