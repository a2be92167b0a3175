//! Reproducible random streams, Ginibre matrices and Haar-random unitaries.

use num_complex::Complex;
use num_traits::Float;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{qr_decompose, Matrix, NumericsError, Scalar};

/// Counter-based random stream addressed by `(seed, stream_id, position)`.
///
/// The seed selects the cipher key and the stream id selects an independent
/// keystream under that key. `position` counts 32-bit words consumed, so a
/// stream rebuilt with [`RngStream::at_position`] continues the identical
/// sequence.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    pub fn at_position(seed: u64, stream_id: u64, position: u128) -> Self {
        let mut s = Self::new(seed, stream_id);
        s.rng.set_word_pos(position);
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// A sibling stream under the same seed.
    pub fn substream(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Scalars that can be drawn from the standard (real or complex) normal law.
///
/// Complex draws have independent N(0,1) real and imaginary parts.
pub trait GaussianScalar: Scalar {
    fn standard_normal(s: &mut RngStream) -> Self;
}

impl GaussianScalar for f64 {
    #[inline]
    fn standard_normal(s: &mut RngStream) -> Self {
        s.sample(StandardNormal)
    }
}

impl GaussianScalar for f32 {
    #[inline]
    fn standard_normal(s: &mut RngStream) -> Self {
        s.sample(StandardNormal)
    }
}

impl GaussianScalar for Complex<f64> {
    #[inline]
    fn standard_normal(s: &mut RngStream) -> Self {
        let re = s.sample(StandardNormal);
        Complex::new(re, s.sample(StandardNormal))
    }
}

impl GaussianScalar for Complex<f32> {
    #[inline]
    fn standard_normal(s: &mut RngStream) -> Self {
        let re = s.sample(StandardNormal);
        Complex::new(re, s.sample(StandardNormal))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RandmatError {
    #[error("invalid dimensions {rows}x{cols}")]
    InvalidDimensions { rows: usize, cols: usize },
    #[error("qr kept failing after {0} redraws")]
    Exhausted(usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Matrix of i.i.d. standard normal entries.
pub fn sample_ginibre<T: GaussianScalar>(
    rows: usize,
    cols: usize,
    s: &mut RngStream,
) -> Result<Matrix<T>, RandmatError> {
    if rows == 0 || cols == 0 {
        return Err(RandmatError::InvalidDimensions { rows, cols });
    }
    Ok(Matrix::from_fn(rows, cols, |_, _| T::standard_normal(s)))
}

const HAAR_MAX_REDRAWS: usize = 16;

/// Haar-distributed unitary (orthogonal for real scalars) of size `dim`.
///
/// QR of a square Ginibre matrix, then column `j` of `Q` is multiplied by the
/// phase of `r_jj` so that `R` has a positive diagonal. Without the phase fix
/// the distribution of `Q` depends on the QR convention and is not Haar.
pub fn haar_unitary<T: GaussianScalar>(dim: usize, s: &mut RngStream) -> Result<Matrix<T>, RandmatError> {
    if dim == 0 {
        return Err(RandmatError::InvalidDimensions { rows: 0, cols: 0 });
    }
    for _ in 0..HAAR_MAX_REDRAWS {
        let g = sample_ginibre::<T>(dim, dim, s)?;
        let qr = match qr_decompose(&g) {
            Ok(qr) => qr,
            Err(NumericsError::Degenerate(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let mut q = qr.q;
        for j in 0..dim {
            let rjj = qr.r[(j, j)];
            let phase = rjj.scale(rjj.modulus().recip());
            q.scale_column(j, phase);
        }
        return Ok(q);
    }
    Err(RandmatError::Exhausted(HAAR_MAX_REDRAWS))
}
