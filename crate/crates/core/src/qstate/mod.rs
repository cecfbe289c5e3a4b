//! Finite-dimensional quantum state algebra and information measures.
//!
//! States live on Hilbert spaces of dimension 2, 4, 8, or 16 (one or two
//! qubits, optionally joined with a four-dimensional eavesdropper register)
//! and are stored densely. Every value is immutable after construction and
//! validated against its invariants: unit norm for [`StateVector`], unit
//! trace and Hermiticity for [`DensityOperator`], normalization for the
//! probability types.
//!
//! All entropies are in bits (logarithms base 2) and `0 log 0 = 0` is an
//! explicit branch rather than a limit evaluation.

mod basis;
mod eig;
mod info;
mod state;

pub use basis::{make_basis, BasisKind, OrthonormalBasis};
pub use eig::{eig_hermitian, eig_hermitian_full};
pub use info::{
    binary_entropy, conditional_entropy, holevo, mutual_information, shannon_entropy,
    von_neumann_entropy, ConditionalEnsemble, JointDistribution, ProbabilityDistribution,
};
pub use state::{
    partial_trace, project, project_pure, projection_prob, reduced_density, ComplexScalar,
    DensityOperator, Projection, PureProjection, StateVector,
};

/// Tolerance on normalization, trace, Hermiticity, and orthonormality checks.
pub const STATE_TOL: f64 = 1e-9;

/// Eigenvalues in `[-EIG_CLAMP_TOL, 0)` are rounding noise and are clamped to
/// zero before entropy evaluation; anything below is an invalid state.
pub const EIG_CLAMP_TOL: f64 = 1e-9;

/// Slack accepted beyond closed-interval bounds on domain checks.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Probability below which a measurement branch is flagged as empty and its
/// conditional state left undefined.
pub const ZERO_PROB_TOL: f64 = 1e-12;
