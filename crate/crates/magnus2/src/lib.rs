//! Closed-form numerics for real 2×2 matrices: operator norms and signed
//! co-norms, principal/chiral disks and conformal ranges, branch-free matrix
//! logarithms, time-ordered exponentials of rotating-frame measures, Magnus
//! series term extraction with convergence-radius estimation, the Hilbert-space
//! growth bound `H(p)`, and the normal-form / Magnus-exponent geometry of
//! `GL₂⁺(ℝ)`.
//!
//! Everything operates on plain `f64` values; all public functions are pure
//! and safe for concurrent use.

pub mod acceptance;
pub mod developments;
pub mod geometry;
pub mod growth;
pub mod kernels;
pub mod mat2;
pub mod matlog;
pub mod measures;
pub mod series;
pub mod shells;

pub use mat2::{CMat2, Mat2};
pub use shells::Disk;

/// Domain-precondition violation shared by the geometric and quadrature
/// operations (bad parameter range, disk through the origin, and so on).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("out of domain: {0}")]
pub struct DomainError(pub String);

impl DomainError {
    pub fn new(msg: impl Into<String>) -> Self {
        DomainError(msg.into())
    }
}
