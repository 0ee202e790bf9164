use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}`")]
    UnknownVariable { name: String },

    #[error("invalid variable list: {0}")]
    InvalidVariables(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("empty or zero generator list")]
    EmptyIdeal,

    #[error("quotient algebra is infinite dimensional")]
    InfiniteQuotient,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no separating linear combination found after {attempts} attempts")]
    DegenerateCombination { attempts: usize },

    #[error("ill-conditioned system: worst residual {worst_residual:e}")]
    IllConditioned { worst_residual: f64 },

    #[error("local quotient undecided up to truncation degree {degree_cap}")]
    Undecided { degree_cap: u32 },

    #[error("origin is a smooth point of the hypersurface")]
    SmoothPoint,

    #[error("polynomial does not vanish at the origin")]
    NotOnHypersurface,

    #[error("cycles live on different stratification posets")]
    PosetMismatch,

    #[error("invalid stratification poset: {0}")]
    InvalidPoset(String),

    #[error("poset contains a cycle through `{0}`")]
    PosetCycle(String),

    #[error("missing Euler obstruction value Eu[{row}]({column})")]
    MissingEuler { row: String, column: String },

    #[error("stratum `{0}` is in the support but has no Morse data")]
    MissingMorseData(String),

    #[error("family is not stabilized over the last {window} samples")]
    NotStabilized { window: usize, tail: Vec<String> },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("degenerate Morse critical point (smallest |eigenvalue| {smallest:e})")]
    DegenerateMorse { smallest: f64 },

    #[error("fiber is not smooth at a critical point")]
    NonSmoothFiber,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable code used in reports and by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown-variable",
            Error::InvalidVariables(_) => "invalid-variables",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::CapExceeded(_) => "cap-exceeded",
            Error::EmptyIdeal => "empty-ideal",
            Error::InfiniteQuotient => "infinite-quotient",
            Error::Unsupported(_) => "unsupported",
            Error::DegenerateCombination { .. } => "degenerate-combination",
            Error::IllConditioned { .. } => "ill-conditioned",
            Error::Undecided { .. } => "undecided",
            Error::SmoothPoint => "smooth-point",
            Error::NotOnHypersurface => "not-on-hypersurface",
            Error::PosetMismatch => "poset-mismatch",
            Error::InvalidPoset(_) => "invalid-poset",
            Error::PosetCycle(_) => "poset-cycle",
            Error::MissingEuler { .. } => "missing-eu",
            Error::MissingMorseData(_) => "missing-morse-data",
            Error::NotStabilized { .. } => "not-stabilized",
            Error::InvalidFamily(_) => "invalid-family",
            Error::DegenerateMorse { .. } => "degenerate-morse",
            Error::NonSmoothFiber => "non-smooth-fiber",
            Error::InvalidConfig(_) => "invalid-config",
        }
    }
}
