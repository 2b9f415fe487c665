use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid is {rows}x{cols}, expected {expected}x{expected}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("state is antisymmetric under exchange and vanishes when symmetrized")]
    Antisymmetric,

    #[error("relative truncation S = {half_width} is not converged: {reason}")]
    TruncationNotConverged { half_width: usize, reason: String },

    #[error("phase-shift fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("interaction has not decayed on the fit window (|W| = {0:e})")]
    PotentialNotDecayed(f64),

    #[error("spectral bracket violated at t = {time}: norm drifted by {drift:e}")]
    SpectralBracket { time: f64, drift: f64 },

    #[error("dense oracle supports at most {max} sites per axis, got {n_sites}")]
    OracleTooLarge { n_sites: usize, max: usize },

    #[error("sampling interval {dt} is too coarse (need <= {max})")]
    CoarseSampling { dt: f64, max: f64 },

    #[error("particles coincide at t = {time} (separation {separation})")]
    Coincidence { time: f64, separation: f64 },

    #[error("semiclassical integration failed at t = {0}: non-finite state")]
    StepFailure(f64),

    #[error("force vanishes; no Bloch oscillation")]
    ZeroForce,

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
