use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SanError {
    /// Two points that must be distinct coincide (zero-length path leg).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A scenario or path parameter violates a modelling assumption.
    #[error("configuration error: {0}")]
    Config(String),

    /// A spatial frequency falls outside (-1/2, 1/2].
    #[error("spatial frequency {0} outside (-1/2, 1/2]")]
    SpatialFrequencyRange(f64),

    /// The SAN key pushes an arcsin argument outside [-1, 1].
    #[error("key too large: fake path {path} has sin(aod) = {sine}")]
    KeyTooLarge { path: usize, sine: f64 },

    /// A derivative through arcsin is evaluated at |sin| = 1.
    #[error("derivative singularity at fake path {0} (|sin aod| = 1)")]
    DerivativeSingularity(usize),

    /// A key is required by the requested observation mode.
    #[error("mode {0} requires a SAN key")]
    MissingKey(&'static str),

    /// Minimal separation needs at least two coordinates.
    #[error("minimal separation undefined for {0} coordinate(s)")]
    UndefinedSeparation(usize),

    /// Resolvability threshold 1/floor(..) has a zero denominator.
    #[error("resolvability threshold undefined for {axis} with {count} elements")]
    ThresholdUndefined { axis: &'static str, count: usize },

    /// Noise calibration against a signal with zero energy.
    #[error("cannot calibrate noise: signal energy is zero")]
    ZeroSignalEnergy,

    /// LPL with a zero legitimate RMSE.
    #[error("location privacy leakage undefined for rmse_bob = {0}")]
    UndefinedLpl(f64),

    /// A parameter vector whose length does not match the signal model.
    #[error("parameter vector has length {got}, expected {expected}")]
    ParameterLength { got: usize, expected: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Reading or writing experiment files.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SanError {
    fn from(e: std::io::Error) -> Self {
        SanError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SanError>;
