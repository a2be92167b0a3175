//! Dense matrix types and the two kernels the sampler needs: Hermitian
//! eigendecomposition and QR.
//!
//! Everything is generic over [`Scalar`], which covers `f32`, `f64` and their
//! complex counterparts. The accuracy contracts (1e-12 relative residuals)
//! are stated for double precision.

mod eigen;
mod matrix;
mod qr;
mod scalar;

pub use eigen::{hermitian_eigensystem, hermitian_eigenvalues, hermitian_eigenvalues_jacobi, Eigensystem};
pub use matrix::{HermitianMatrix, Matrix};
pub use qr::{qr_decompose, QrDecomposition};
pub use scalar::{Field, RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}
