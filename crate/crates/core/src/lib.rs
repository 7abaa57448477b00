//! Finite-dimensional quantum measurement toolkit.
//!
//! The crate covers three layers:
//!
//! * [`measurement`]: generalized measurements `{M_m}` with `Σ M_m†M_m = I`,
//!   projective measurements, POVMs, Born-rule probabilities, post-measurement
//!   states and seeded outcome sampling.
//! * [`reversible`]: unitaries read as single-outcome measurements, unitaries
//!   assembled from mutually orthogonal operator families with unimodular
//!   phases, and `e^{iA}` built from the spectral projectors of `A`.
//! * [`mirror`]: unitaries that commute with a projector set and therefore
//!   leave its outcome statistics unchanged, the two-qubit Bell comparison and
//!   the compute/uncompute protocol whose only POVM element is the identity.
//!
//! All numeric checks share one tolerance policy, see [`within`].

pub mod error;
pub mod gates;
pub mod linalg;
pub mod measurement;
pub mod mirror;
pub mod random;
pub mod reversible;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};

/// Default absolute tolerance for every validator.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one eigenspace.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Outcomes with probability at or below this floor have no post-measurement state.
pub const P_FLOOR: f64 = 1e-12;

/// Uniform acceptance test: `residual ≤ tol · max(1, scale)`.
///
/// `scale` is the Frobenius norm of the reference quantity the residual was
/// measured against.
pub fn within(residual: f64, scale: f64, tol: f64) -> bool {
    residual <= tol * scale.max(1.0)
}
