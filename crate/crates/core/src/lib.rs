//! Random density matrices under the Hilbert-Schmidt measure, Monte Carlo
//! estimation of positive-partial-transpose (PPT) probabilities, and exact
//! matching of estimates to rationals with small-prime denominators.
//!
//! The linear algebra is generic over [`numerics::Scalar`]; the aliases below
//! name the double-precision instantiations used by the estimator.

pub mod catalog;
pub mod conjecture;
pub mod density;
pub mod estimator;
pub mod numerics;
pub mod ppt;
pub mod randmat;
pub mod tolerance;

pub use num_complex::Complex64;

pub use density::{BipartiteShape, DensityMatrix, DensitySampler};
pub use numerics::{Field, HermitianMatrix, Matrix, Scalar};
pub use randmat::RngStream;
pub use tolerance::Tolerances;

pub type RealMatrix = numerics::Matrix<f64>;
pub type ComplexMatrix = numerics::Matrix<Complex64>;
pub type RealHermitian = numerics::HermitianMatrix<f64>;
pub type ComplexHermitian = numerics::HermitianMatrix<Complex64>;
pub type RealDensity = density::DensityMatrix<f64>;
pub type ComplexDensity = density::DensityMatrix<Complex64>;
/// Exact rational used for conjectured probabilities.
pub type Rational = num_rational::Ratio<i64>;

/// Version string embedded in every report and checkpoint.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
