//! Workbench for teleportation-based quantum key distribution.
//!
//! The crate is organized in four layers:
//!
//! * [`qstate`]: dense state vectors and density operators on small Hilbert
//!   spaces (dimension 2 to 16) together with the classical and quantum
//!   information measures (Shannon/von Neumann entropies, mutual information,
//!   Holevo quantity) used everywhere else.
//! * [`teleport`]: the probabilistic teleportation protocol over partially
//!   entangled channels in closed form, plus a brute-force three-qubit circuit
//!   oracle that independently verifies every closed form.
//! * [`simproto`]: seeded Monte Carlo execution of the BB84 and GR10
//!   (original and modified) protocols as Alice/Bob/Eve state machines, with
//!   sifting, disclosure, and error estimation.
//! * [`keyrate`]: asymptotic secret-key fractions under collective attacks,
//!   with closed-form rates for four purification models, a purification-built
//!   numeric cross-check, and security-threshold searches.
//!
//! All computations are deterministic: simulations derive one independent
//! random stream per round from `(seed, round index)`, so serial and parallel
//! executions produce bit-identical transcripts.

pub mod error;
pub mod fmt;
pub mod keyrate;
pub mod qstate;
pub mod simproto;
pub mod teleport;

pub use error::{QkdError, Result};
