use thiserror::Error;

/// Errors across the whole library. `name()` gives the stable short
/// identifier used by the CLI when reporting physics-domain failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("eigendecomposition ill-conditioned (estimate {estimate:.3e} exceeds cap {cap:.3e})")]
    DefectiveMatrix { estimate: f64, cap: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("resolvent solve singular or inaccurate at omega = {omega}")]
    SingularResolvent { omega: f64 },

    #[error("kernel is not one-dimensional ({multiplicity} near-zero eigenvalues)")]
    DegenerateKernel { multiplicity: usize },

    #[error("fluctuation vector overlaps the stationary mode (projection {projection:.3e})")]
    ZeroModeContamination { projection: f64 },

    #[error("closed-form and null-space steady states disagree (max componentwise diff {diff:.3e})")]
    SteadyStateMismatch { diff: f64 },

    #[error("unphysical initial state: {reason}")]
    UnphysicalInitialState { reason: String },

    #[error("stationary intensity vanishes (Omega = 0); correlation undefined")]
    ZeroIntensity,

    #[error("mean quadrature vanishes at phi = {phi}; AIC normalization undefined")]
    VanishingMeanQuadrature { phi: f64 },

    #[error("ground-state Lande factor must be nonzero")]
    ZeroLande,

    #[error("invalid initial populations: {reason}")]
    InvalidPopulations { reason: String },

    #[error("division by zero in {context}")]
    DivisionByZero { context: &'static str },

    #[error("unknown preset '{name}'; available: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },

    #[error("linear algebra backend failure: {0}")]
    Backend(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::DefectiveMatrix { .. } => "DefectiveMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SingularResolvent { .. } => "SingularResolvent",
            Error::DegenerateKernel { .. } => "DegenerateKernel",
            Error::ZeroModeContamination { .. } => "ZeroModeContamination",
            Error::SteadyStateMismatch { .. } => "SteadyStateMismatch",
            Error::UnphysicalInitialState { .. } => "UnphysicalInitialState",
            Error::ZeroIntensity => "ZeroIntensity",
            Error::VanishingMeanQuadrature { .. } => "VanishingMeanQuadrature",
            Error::ZeroLande => "ZeroLande",
            Error::InvalidPopulations { .. } => "InvalidPopulations",
            Error::DivisionByZero { .. } => "DivisionByZero",
            Error::UnknownPreset { .. } => "UnknownPreset",
            Error::InvalidParams { .. } => "InvalidParams",
            Error::Backend(_) => "Backend",
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
