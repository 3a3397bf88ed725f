use thiserror::Error;

use crate::simulate::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("matrix is singular (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },

    #[error("QR iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid permutation of {len} segments")]
    InvalidPermutation { len: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("subsystem {subsystem} has no unique equilibrium (pivot magnitude {pivot:e})")]
    NoUniqueEquilibrium { subsystem: usize, pivot: f64 },

    #[error("average system is not Hurwitz (spectral abscissa {abscissa})")]
    UnstableAverage { abscissa: f64 },

    #[error("one-period map is not a contraction (spectral radius {spectral_radius})")]
    NoAttractingCycle { spectral_radius: f64 },

    #[error("I - M is singular, cycle is degenerate (pivot magnitude {pivot:e})")]
    DegenerateCycle { pivot: f64 },

    #[error("state norm {norm:e} exceeded the divergence guard at t = {time}")]
    Diverged {
        time: f64,
        norm: f64,
        trajectory: Box<Trajectory>,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    /// Numerical failures, as opposed to bad input or a detected instability.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::NoConvergence { .. }
                | Error::NoUniqueEquilibrium { .. }
                | Error::DegenerateCycle { .. }
        )
    }

    /// Errors that report an unstable configuration.
    pub fn is_instability(&self) -> bool {
        matches!(
            self,
            Error::UnstableAverage { .. }
                | Error::NoAttractingCycle { .. }
                | Error::Diverged { .. }
        )
    }
}
