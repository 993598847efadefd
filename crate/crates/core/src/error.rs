use thiserror::Error;

/// Errors raised anywhere in the coding lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree distribution is empty")]
    EmptyDistribution,

    #[error("degree {0} is not allowed here")]
    InvalidDegree(u32),

    #[error("coefficient {coefficient} for degree {degree} is not a fraction in [0, 1]")]
    InvalidCoefficient { degree: u32, coefficient: f64 },

    #[error("coefficients sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("expected a {expected} distribution, got {found}")]
    WrongPerspective {
        expected: &'static str,
        found: &'static str,
    },

    #[error("rate {0} outside (0, 1)")]
    InvalidRate(f64),

    #[error("fraction {0} outside (0, 1)")]
    InvalidFraction(f64),

    #[error("cannot parse polynomial term `{0}`")]
    PolynomialSyntax(String),

    #[error("ensemble is inconsistent: {0}")]
    InconsistentEnsemble(String),

    #[error("unsatisfiable degree demands: {0}")]
    Unsatisfiable(String),

    #[error("construction failed after {attempts} attempts (seed trail {seeds:?}): {reason}")]
    ConstructionFailed {
        attempts: usize,
        seeds: Vec<u64>,
        reason: String,
    },

    #[error("parity-check matrix has no encodable layout: {0}")]
    NotEncodable(String),

    #[error("malformed alist at line {line}: {reason}")]
    Alist { line: usize, reason: String },

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("noise variance must be positive, got {0}")]
    InvalidNoiseVariance(f64),

    #[error("invalid snr value {0}")]
    InvalidSnr(f64),

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("concatenation factor must be at least 1")]
    InvalidConcatenation,

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("target {target} not bracketed by curve range [{min}, {max}]")]
    NotBracketed { target: f64, min: f64, max: f64 },

    #[error("no feasible concatenation up to L = {l_max}: alpha_s - beta_p = {deficit_db:?} dB")]
    Infeasible { l_max: u32, deficit_db: Option<f64> },

    #[error("invalid frame layout: {0}")]
    InvalidLayout(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
