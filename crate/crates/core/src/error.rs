use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cos(pi*theta) vanishes at theta = {0}: hbar and z are undefined")]
    Pole(String),

    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("parse error at byte {position}: expected one of [{}], found {found}", expected.join(", "))]
    Parse {
        position: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("rule {0} is not compatible with the word order")]
    IncompatibleRule(String),

    #[error("rewriting exceeded the step cap of {0}")]
    StepCapExceeded(usize),

    #[error("ambiguity {overlap} does not resolve: difference {difference}")]
    NotConfluent { overlap: String, difference: String },

    #[error("parameters are outside the torus regime: {0}")]
    InadmissibleParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate least-squares fit: {0}")]
    DegenerateFit(String),

    #[error("matrix is not positive definite (minimum eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("spectral bound violated at phase {phase}: min eigenvalue {min_eig} < bound {bound}")]
    SpectralViolation { phase: f64, min_eig: f64, bound: f64 },

    #[error("index box has {count} elements, more than N^2 = {limit}")]
    BoxTooLarge { count: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
