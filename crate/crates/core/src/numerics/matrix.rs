use std::ops::{Index, IndexMut};

use num_traits::{Float, Zero};

use super::scalar::{RealScalar, Scalar};
use super::NumericsError;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Self, NumericsError> {
        if self.cols != rhs.rows {
            return Err(NumericsError::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · self†`, symmetrized so the result is exactly Hermitian.
    pub fn gram(&self) -> HermitianMatrix<T> {
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            let ri = self.row(i);
            for j in i..n {
                let rj = self.row(j);
                let s: T = ri.iter().zip(rj).map(|(&a, &b)| a * b.conj()).sum();
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
            out[(i, i)] = T::from_real(out[(i, i)].re());
        }
        HermitianMatrix { inner: out }
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Result<Self, NumericsError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(NumericsError::InvalidInput("shape mismatch in subtraction".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn scale(&mut self, factor: T::Real) {
        for x in &mut self.data {
            *x = x.scale(factor);
        }
    }

    pub fn scale_column(&mut self, j: usize, factor: T) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] *= factor;
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T::Real {
        self.data
            .iter()
            .map(|x| x.modulus())
            .fold(T::Real::zero(), |a, b| a.max(b))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `‖M·M† − I‖_max`; zero for an exactly unitary matrix.
    pub fn unitarity_defect(&self) -> T::Real {
        let prod = self
            .matmul(&self.adjoint())
            .expect("square product always conforms");
        prod.sub(&Matrix::identity(self.rows))
            .expect("identity has matching shape")
            .max_abs()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix equal to its own conjugate transpose.
///
/// Construction symmetrizes the input, so conjugate symmetry holds exactly and
/// diagonal entries are real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> HermitianMatrix<T> {
    /// Symmetrizes `m` as `(m + m†)/2`.
    pub fn from_matrix(m: Matrix<T>) -> Result<Self, NumericsError> {
        if !m.is_square() {
            return Err(NumericsError::InvalidInput(format!(
                "hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let half = T::Real::lit(0.5);
        let mut out = m;
        for i in 0..n {
            let d = out[(i, i)].re();
            out[(i, i)] = T::from_real(d);
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()).scale(half);
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Ok(HermitianMatrix { inner: out })
    }

    /// Builds from the upper triangle (including the diagonal) only.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = T::from_real(f(i, i).re());
            for j in (i + 1)..dim {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        HermitianMatrix { inner: m }
    }

    /// Wraps a matrix the caller guarantees to be exactly Hermitian.
    pub(crate) fn from_exact(m: Matrix<T>) -> Self {
        debug_assert!(m.is_square());
        HermitianMatrix { inner: m }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn trace(&self) -> T::Real {
        (0..self.dim()).map(|i| self.inner[(i, i)].re()).sum()
    }

    pub fn scale(&mut self, factor: T::Real) {
        self.inner.scale(factor);
    }

    /// True when every entry equals the conjugate of its mirror exactly.
    pub fn is_exactly_hermitian(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            self.inner[(i, i)].im() == T::Real::zero()
                && ((i + 1)..n).all(|j| self.inner[(i, j)] == self.inner[(j, i)].conj())
        })
    }
}

impl<T> Index<(usize, usize)> for HermitianMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.inner[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn matmul_matches_hand_product() {
        let a = Matrix::from_row_major(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let b = Matrix::from_row_major(3, 1, vec![1.0, 0.0, -1.0]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.as_slice(), &[-2.0, -2.0]);
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn gram_is_exactly_hermitian() {
        let a = Matrix::from_fn(3, 5, |i, j| Complex64::new(i as f64 - 0.3 * j as f64, 0.7 * (i * j) as f64 - 1.0));
        let g = a.gram();
        assert!(g.is_exactly_hermitian());
        let direct = a.matmul(&a.adjoint()).unwrap();
        assert!(direct.sub(g.as_matrix()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn symmetrization_zeroes_diagonal_imaginary_parts() {
        let m = Matrix::from_row_major(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.5),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -3.0),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let h = HermitianMatrix::from_matrix(m).unwrap();
        assert!(h.is_exactly_hermitian());
        assert_eq!(h[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(h[(0, 1)], Complex64::new(0.0, 2.0));
        assert!(HermitianMatrix::from_matrix(Matrix::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn wrong_entry_count_is_rejected() {
        assert!(Matrix::from_row_major(2, 2, vec![1.0f64; 3]).is_err());
    }
}
