//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by state algebra, teleportation, protocol simulation, and
/// rate analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QkdError {
    /// Dimension mismatch or an unsupported dimension.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// Argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A state violating one of its invariants (normalization, Hermiticity,
    /// positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// Measurement branch of (numerically) zero probability; the conditional
    /// state is undefined.
    #[error("zero-probability measurement branch")]
    ZeroProbability,
    /// Observed statistics incompatible with the chosen purification model.
    #[error("infeasible statistics: {0}")]
    Infeasible(String),
    /// Invalid protocol, attack, or sweep configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, QkdError>;
