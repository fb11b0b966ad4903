use thiserror::Error;

/// Errors produced by the equilibrium engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NonPositivePsi: elasticity of intertemporal substitution must be > 0 (psi = {psi})")]
    NonPositivePsi { psi: f64 },

    #[error("NegativeGamma: risk aversion must be >= 0 (gamma = {gamma})")]
    NegativeGamma { gamma: f64 },

    #[error("NegativeSigma: growth volatility must be >= 0 (sigma = {sigma})")]
    NegativeSigma { sigma: f64 },

    #[error("NonFinite: parameter `{field}` is not finite ({value})")]
    NonFinite { field: &'static str, value: f64 },

    #[error("NoEquilibrium: existence margin A = {a_factor} >= 0, the price-dividend series diverges")]
    NoEquilibrium { a_factor: f64 },

    #[error("UnitPsi: psi = {psi} is within the unit-EIS threshold, the SDF exponent theta is undefined")]
    UnitPsi { psi: f64 },

    #[error("NonPositiveDividend: dividend must be > 0 (q = {q})")]
    NonPositiveDividend { q: f64 },

    #[error("NonPositiveInput: `{field}` must be > 0 ({value})")]
    NonPositiveInput { field: &'static str, value: f64 },

    #[error("ZeroDraws: at least one draw is required")]
    ZeroDraws,

    #[error("NegativeVariance: variance must be >= 0 (var = {var})")]
    NegativeVariance { var: f64 },

    #[error("StepTooLarge: gamma - h = {lower} < 0")]
    StepTooLarge { lower: f64 },

    #[error("NonPositiveStep: finite-difference step must be > 0 (h = {h})")]
    NonPositiveStep { h: f64 },

    #[error("PathTooShort: need at least 2 returns, got {len}")]
    PathTooShort { len: usize },

    #[error("EmptyGrid: {0}")]
    EmptyGrid(String),

    #[error("InvalidRange: {0}")]
    InvalidRange(String),

    #[error("IoFailure: {0}")]
    IoFailure(String),
}

impl Error {
    /// Stable variant name, used in CLI diagnostics and manifests.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositivePsi { .. } => "NonPositivePsi",
            Error::NegativeGamma { .. } => "NegativeGamma",
            Error::NegativeSigma { .. } => "NegativeSigma",
            Error::NonFinite { .. } => "NonFinite",
            Error::NoEquilibrium { .. } => "NoEquilibrium",
            Error::UnitPsi { .. } => "UnitPsi",
            Error::NonPositiveDividend { .. } => "NonPositiveDividend",
            Error::NonPositiveInput { .. } => "NonPositiveInput",
            Error::ZeroDraws => "ZeroDraws",
            Error::NegativeVariance { .. } => "NegativeVariance",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NonPositiveStep { .. } => "NonPositiveStep",
            Error::PathTooShort { .. } => "PathTooShort",
            Error::EmptyGrid(_) => "EmptyGrid",
            Error::InvalidRange(_) => "InvalidRange",
            Error::IoFailure(_) => "IoFailure",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
