use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("field evaluated at a puncture (r = {radius:e} from {center})")]
    Puncture { center: String, radius: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("sampler of kind `{0}` does not support energy-density queries")]
    UnsupportedDensity(&'static str),

    #[error("integration blew up at r = {radius:e} ({reason})")]
    Blowup { radius: f64, reason: String },

    #[error("tolerance not met: {what} = {value:e} > {tolerance:e}")]
    ToleranceNotMet {
        what: String,
        value: f64,
        tolerance: f64,
    },

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("divergent improper integral: {0}")]
    Divergence(String),

    #[error("degree undefined: Higgs field vanishes on the sphere (min |Φ| = {min_norm:e})")]
    UndefinedDegree { min_norm: f64 },

    #[error("degree resolution error: rounding residual {residual:e} exceeds 0.1")]
    Resolution { residual: f64 },

    #[error("sequence too short: {0}")]
    SequenceTooShort(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
