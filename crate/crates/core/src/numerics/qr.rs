use num_traits::{Float, One, Zero};

use super::matrix::Matrix;
use super::scalar::{RealScalar, Scalar};
use super::NumericsError;

/// `M = Q·R` with `Q` unitary and `R` upper triangular.
#[derive(Debug, Clone)]
pub struct QrDecomposition<T> {
    pub q: Matrix<T>,
    pub r: Matrix<T>,
}

/// Householder QR of a square matrix.
///
/// Columns whose sub-diagonal part is already zero are left untouched, so an
/// upper-triangular input comes back with `Q = I`. The diagonal of `R` carries
/// an arbitrary phase; callers needing a canonical factorization fix it up.
pub fn qr_decompose<T: Scalar>(m: &Matrix<T>) -> Result<QrDecomposition<T>, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::InvalidInput(format!(
            "qr_decompose expects a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(NumericsError::InvalidInput("non-finite matrix entry".into()));
    }
    let n = m.rows();
    let mut r = m.clone();
    let mut q = Matrix::<T>::identity(n);
    let mut v = vec![T::zero(); n];
    let scale = m.max_abs();
    let rank_tol = T::Real::epsilon() * T::Real::lit(n as f64) * scale;

    for j in 0..n {
        let head = r[(j, j)];
        let tail_sqr: T::Real = ((j + 1)..n).map(|i| r[(i, j)].abs_sqr()).sum();
        if tail_sqr > T::Real::zero() {
            let norm = (head.abs_sqr() + tail_sqr).sqrt();
            let head_mod = head.modulus();
            let phase = if head_mod > T::Real::zero() {
                head.scale(T::Real::one() / head_mod)
            } else {
                T::one()
            };
            // alpha = -phase·‖x‖ keeps v's leading entry away from cancellation.
            let alpha = -phase.scale(norm);
            v[j] = head - alpha;
            for i in (j + 1)..n {
                v[i] = r[(i, j)];
            }
            let v_norm_sqr: T::Real = v[j..].iter().map(|x| x.abs_sqr()).sum();
            let tau = T::Real::lit(2.0) / v_norm_sqr;

            // R ← H·R on the trailing block.
            for c in j..n {
                let dot: T = (j..n).map(|i| v[i].conj() * r[(i, c)]).sum();
                let f = dot.scale(tau);
                for i in j..n {
                    r[(i, c)] -= v[i] * f;
                }
            }
            r[(j, j)] = alpha;
            for i in (j + 1)..n {
                r[(i, j)] = T::zero();
            }
            // Q ← Q·H.
            for row in 0..n {
                let dot: T = (j..n).map(|i| q[(row, i)] * v[i]).sum();
                let f = dot.scale(tau);
                for i in j..n {
                    q[(row, i)] -= f * v[i].conj();
                }
            }
        }
        if r[(j, j)].modulus() <= rank_tol {
            return Err(NumericsError::Degenerate(format!(
                "column {j} is linearly dependent to working precision"
            )));
        }
    }
    Ok(QrDecomposition { q, r })
}
