//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the physics and quantum-state routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was not a finite number.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An argument was finite but outside the mathematical domain of the
    /// operation (negative distance, non-positive energy, probability
    /// outside [0,1], malformed grid, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A density matrix failed its structural invariants (Hermiticity,
    /// unit trace, positive semidefiniteness).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A conditional state was requested on a measurement branch whose
    /// probability is numerically zero; the conditional state is undefined.
    #[error("zero-probability measurement branch: axis {axis}, outcome {outcome}")]
    ZeroProbabilityBranch { axis: &'static str, outcome: u8 },

    /// An internal consistency check failed by more than rounding can
    /// explain (imaginary residue on a real quantity, probability excursion
    /// outside [0,1] beyond clamping tolerance).
    #[error("inconsistent state: {0}")]
    InconsistentState(String),

    /// Bipartite amplitudes do not satisfy |a_surv|^2 + |a_trans|^2 = 1.
    #[error("invalid amplitudes: |a_surv|^2 + |a_trans|^2 = {norm}, expected 1")]
    InvalidAmplitudes { norm: f64 },

    /// A numerical routine could not reach its accuracy target.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// An experiment preset name was not recognised.
    #[error("unknown preset {name:?}; available presets: {available}")]
    UnknownPreset { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;
