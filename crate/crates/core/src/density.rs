//! Rank-k random density matrices under the Hilbert-Schmidt measure.
//!
//! A `k × w` Ginibre matrix `G` with `w = k + 2(N−k)` (complex) or
//! `w = k + 1 + 2(N−k)` (real) gives a Wishart matrix `G·G†` whose normalized
//! spectrum has the Hilbert-Schmidt law restricted to rank-k states. The
//! spectrum is padded with `N−k` zeros and rotated by an independent Haar
//! unitary (orthogonal in the real case).

use std::fmt;

use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::{hermitian_eigenvalues, Field, HermitianMatrix, Matrix, NumericsError, RealScalar, Scalar};
use crate::randmat::{haar_unitary, sample_ginibre, GaussianScalar, RandmatError, RngStream};
use crate::tolerance::Tolerances;

/// Largest total dimension the dense kernels are meant for.
pub const MAX_TOTAL_DIM: usize = 64;

const MAX_RESAMPLES: u64 = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("{0} consecutive rank-deficient Wishart draws")]
    TooManyResamples(u64),
    #[error(transparent)]
    Random(#[from] RandmatError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Subsystem dimensions `m × n`, target rank and number field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteShape {
    m: usize,
    n: usize,
    rank: usize,
    field: Field,
}

impl BipartiteShape {
    pub fn new(m: usize, n: usize, rank: usize, field: Field) -> Result<Self, DensityError> {
        if m == 0 || n == 0 {
            return Err(DensityError::InvalidShape(format!("subsystem dimensions must be positive, got {m}x{n}")));
        }
        let total = m.checked_mul(n).filter(|&t| t <= MAX_TOTAL_DIM).ok_or_else(|| {
            DensityError::InvalidShape(format!("total dimension {m}x{n} exceeds {MAX_TOTAL_DIM}"))
        })?;
        if rank == 0 || rank > total {
            return Err(DensityError::InvalidShape(format!("rank {rank} outside 1..={total}")));
        }
        Ok(BipartiteShape { m, n, rank, field })
    }

    /// Full-rank shape.
    pub fn full_rank(m: usize, n: usize, field: Field) -> Result<Self, DensityError> {
        Self::new(m, n, m * n, field)
    }

    pub fn with_rank(self, rank: usize) -> Result<Self, DensityError> {
        Self::new(self.m, self.n, rank, self.field)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total dimension `N = m·n`.
    #[inline]
    pub fn total(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.total()
    }

    /// Column count of the Ginibre factor.
    pub fn ginibre_cols(&self) -> usize {
        let deficit = 2 * (self.total() - self.rank);
        match self.field {
            Field::Complex => self.rank + deficit,
            Field::Real => self.rank + 1 + deficit,
        }
    }
}

impl fmt::Display for BipartiteShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} rank {} {}", self.m, self.n, self.rank, self.field)
    }
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    m: usize,
    n: usize,
    #[serde(rename = "N")]
    total: usize,
    rank: usize,
    field: Field,
}

impl Serialize for BipartiteShape {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ShapeRepr {
            m: self.m,
            n: self.n,
            total: self.total(),
            rank: self.rank,
            field: self.field,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BipartiteShape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = ShapeRepr::deserialize(deserializer)?;
        let shape = BipartiteShape::new(r.m, r.n, r.rank, r.field).map_err(serde::de::Error::custom)?;
        if shape.total() != r.total {
            return Err(serde::de::Error::custom(format!("N = {} but m·n = {}", r.total, shape.total())));
        }
        Ok(shape)
    }
}

/// Unit-trace positive semidefinite Hermitian matrix on a bipartite space.
///
/// Carries its ascending spectrum, which the sampler knows for free and which
/// [`DensityMatrix::new`] computes once.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T: Scalar> {
    shape: BipartiteShape,
    matrix: HermitianMatrix<T>,
    spectrum: Vec<T::Real>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates `matrix` as a state of the given shape: unit trace to 1e-12,
    /// no eigenvalue below `-psd` and exactly `shape.rank()` above `+psd`.
    pub fn new(shape: BipartiteShape, matrix: HermitianMatrix<T>, tol: &Tolerances) -> Result<Self, DensityError> {
        if shape.field() != T::FIELD {
            return Err(DensityError::InvalidState(format!(
                "{} shape for a {} matrix",
                shape.field(),
                T::FIELD
            )));
        }
        if matrix.dim() != shape.total() {
            return Err(DensityError::InvalidState(format!(
                "matrix dimension {} does not match N = {}",
                matrix.dim(),
                shape.total()
            )));
        }
        let spectrum = hermitian_eigenvalues(&matrix)?;
        let state = DensityMatrix { shape, matrix, spectrum };
        let report = state.invariants(tol.psd);
        if report.trace_error > 1e-12 {
            return Err(DensityError::InvalidState(format!("trace differs from 1 by {:e}", report.trace_error)));
        }
        if report.min_eigenvalue < -tol.psd {
            return Err(DensityError::InvalidState(format!("negative eigenvalue {:e}", report.min_eigenvalue)));
        }
        if report.numerical_rank != shape.rank() {
            return Err(DensityError::InvalidState(format!(
                "numerical rank {} but nominal rank {}",
                report.numerical_rank,
                shape.rank()
            )));
        }
        Ok(state)
    }

    pub fn shape(&self) -> &BipartiteShape {
        &self.shape
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    /// Ascending eigenvalues (length `N`).
    pub fn spectrum(&self) -> &[T::Real] {
        &self.spectrum
    }

    pub fn nominal_rank(&self) -> usize {
        self.shape.rank()
    }

    pub fn trace(&self) -> T::Real {
        self.matrix.trace()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> T::Real {
        self.matrix.as_matrix().as_slice().iter().map(|x| x.abs_sqr()).sum()
    }

    /// `det ρ` as the product of the stored spectrum.
    pub fn determinant(&self) -> T::Real {
        self.spectrum.iter().fold(T::Real::one(), |acc, &x| acc * x)
    }

    /// Recomputes the spectrum of the stored matrix and checks the state
    /// invariants against it.
    pub fn invariants(&self, psd_tol: f64) -> InvariantReport {
        let evals = hermitian_eigenvalues(&self.matrix).unwrap_or_else(|_| vec![T::Real::nan(); self.shape.total()]);
        let to_f64 = |x: T::Real| x.to_f64().unwrap_or(f64::NAN);
        let trace_error = (to_f64(self.trace()) - 1.0).abs();
        let min_eigenvalue = evals.first().copied().map(to_f64).unwrap_or(f64::NAN);
        let numerical_rank = evals.iter().filter(|&&x| to_f64(x) > psd_tol).count();
        let spectrum_deviation = evals
            .iter()
            .zip(&self.spectrum)
            .map(|(&a, &b)| (to_f64(a) - to_f64(b)).abs())
            .fold(0.0, f64::max);
        InvariantReport {
            trace_error,
            min_eigenvalue,
            numerical_rank,
            spectrum_deviation,
        }
    }
}

/// Observed state invariants, see [`DensityMatrix::invariants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    pub numerical_rank: usize,
    /// Largest gap between the recomputed and the carried spectrum.
    pub spectrum_deviation: f64,
}

impl InvariantReport {
    pub fn holds(&self, rank: usize, psd_tol: f64) -> bool {
        self.trace_error <= 1e-12 && self.min_eigenvalue >= -psd_tol && self.numerical_rank == rank
    }
}

/// Draws Hilbert-Schmidt states of one shape, counting rank-deficient redraws.
#[derive(Debug, Clone)]
pub struct DensitySampler {
    shape: BipartiteShape,
    tol: Tolerances,
    resamples: u64,
}

impl DensitySampler {
    pub fn new(shape: BipartiteShape, tol: Tolerances) -> Self {
        DensitySampler { shape, tol, resamples: 0 }
    }

    pub fn shape(&self) -> &BipartiteShape {
        &self.shape
    }

    /// Rank-deficient Wishart draws discarded so far.
    pub fn resamples(&self) -> u64 {
        self.resamples
    }

    fn check_field<T: Scalar>(&self) -> Result<(), DensityError> {
        if self.shape.field() != T::FIELD {
            return Err(DensityError::InvalidShape(format!(
                "{} shape sampled with {} scalars",
                self.shape.field(),
                T::FIELD
            )));
        }
        Ok(())
    }

    /// Ginibre → normalized Wishart → spectrum → zero padding → Haar rotation.
    pub fn sample<T: GaussianScalar>(&mut self, s: &mut RngStream) -> Result<DensityMatrix<T>, DensityError> {
        self.check_field::<T>()?;
        let k = self.shape.rank();
        let dim = self.shape.total();
        let width = self.shape.ginibre_cols();
        let rankdef = T::Real::lit(self.tol.rankdef);

        let mut attempts = 0;
        let evals = loop {
            let g = sample_ginibre::<T>(k, width, s)?;
            let mut w = g.gram();
            let tr = w.trace();
            w.scale(T::Real::one() / tr);
            let evals = hermitian_eigenvalues(&w)?;
            if evals[0] >= rankdef * evals[k - 1] {
                break evals;
            }
            self.resamples += 1;
            attempts += 1;
            if attempts >= MAX_RESAMPLES {
                return Err(DensityError::TooManyResamples(attempts));
            }
        };

        let u = haar_unitary::<T>(dim, s)?;
        // The k nonzero eigenvalues occupy the leading block, so only the
        // first k columns of U contribute.
        let mut rho = Matrix::<T>::zeros(dim, dim);
        for a in 0..dim {
            for b in a..dim {
                let mut acc = T::zero();
                for (i, &lambda) in evals.iter().enumerate() {
                    acc += (u[(a, i)] * u[(b, i)].conj()).scale(lambda);
                }
                rho[(a, b)] = acc;
                rho[(b, a)] = acc.conj();
            }
            rho[(a, a)] = T::from_real(rho[(a, a)].re());
        }

        let mut spectrum = vec![T::Real::zero(); dim - k];
        spectrum.extend_from_slice(&evals);
        spectrum.sort_by(|x, y| x.partial_cmp(y).expect("finite spectrum"));
        Ok(DensityMatrix {
            shape: self.shape,
            matrix: HermitianMatrix::from_exact(rho),
            spectrum,
        })
    }

    /// Full-rank states as `G·G†/tr(G·G†)` with no diagonalize-and-rotate
    /// step. Serves as an independent reference for [`DensitySampler::sample`].
    pub fn sample_direct_fullrank<T: GaussianScalar>(
        &mut self,
        s: &mut RngStream,
    ) -> Result<DensityMatrix<T>, DensityError> {
        self.check_field::<T>()?;
        if !self.shape.is_full_rank() {
            return Err(DensityError::InvalidShape(format!(
                "direct sampler needs k = N, got {}",
                self.shape
            )));
        }
        let dim = self.shape.total();
        let width = self.shape.ginibre_cols();
        let rankdef = T::Real::lit(self.tol.rankdef);
        for _ in 0..MAX_RESAMPLES {
            let g = sample_ginibre::<T>(dim, width, s)?;
            let mut w = g.gram();
            let tr = w.trace();
            w.scale(T::Real::one() / tr);
            let spectrum = hermitian_eigenvalues(&w)?;
            if spectrum[0] < rankdef * spectrum[dim - 1] {
                self.resamples += 1;
                continue;
            }
            return Ok(DensityMatrix {
                shape: self.shape,
                matrix: w,
                spectrum,
            });
        }
        Err(DensityError::TooManyResamples(MAX_RESAMPLES))
    }
}

/// One Hilbert-Schmidt state with default tolerances.
pub fn sample_density<T: GaussianScalar>(shape: BipartiteShape, s: &mut RngStream) -> Result<DensityMatrix<T>, DensityError> {
    DensitySampler::new(shape, Tolerances::DEFAULT).sample(s)
}

/// One full-rank state by direct normalization, default tolerances.
pub fn sample_density_direct_fullrank<T: GaussianScalar>(
    shape: BipartiteShape,
    s: &mut RngStream,
) -> Result<DensityMatrix<T>, DensityError> {
    DensitySampler::new(shape, Tolerances::DEFAULT).sample_direct_fullrank(s)
}
