//! Cyclic Jacobi diagonalization of small Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal pair. For a complex pivot
//! `a_pq = |a_pq|·e` the rotation is `[[c, s·e], [−s·ē, c]]`, which reduces to
//! the classic real symmetric rotation when `e = ±1`.

use num_traits::{Float, One, Zero};

use super::matrix::{HermitianMatrix, Matrix};
use super::scalar::{RealScalar, Scalar};
use super::NumericsError;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem<T: Scalar> {
    pub values: Vec<T::Real>,
    pub vectors: Matrix<T>,
}

impl<T: Scalar> Eigensystem<T> {
    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| (v[(i, k)] * v[(j, k)].conj()).scale(self.values[k]))
                .sum()
        })
    }
}

/// Full eigendecomposition `H = V·Λ·V†` with ascending `Λ`.
pub fn hermitian_eigensystem<T: Scalar>(
    h: &HermitianMatrix<T>,
) -> Result<Eigensystem<T>, NumericsError> {
    let mut a = h.as_matrix().clone();
    let mut v = Matrix::identity(h.dim());
    jacobi(&mut a, Some(&mut v))?;

    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re().partial_cmp(&a[(j, j)].re()).expect("finite"));
    let values = order.iter().map(|&i| a[(i, i)].re()).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigensystem { values, vectors })
}

/// Eigenvalues only, ascending.
///
/// Householder reduction to Hermitian tridiagonal form followed by implicit
/// QL with Wilkinson shifts. A complex tridiagonal matrix is unitarily similar
/// to the real one with the moduli of its off-diagonal, so the QL stage is
/// always real.
pub fn hermitian_eigenvalues<T: Scalar>(h: &HermitianMatrix<T>) -> Result<Vec<T::Real>, NumericsError> {
    let mut a = h.as_matrix().clone();
    if !a.is_finite() {
        return Err(NumericsError::InvalidInput("non-finite matrix entry".into()));
    }
    let (mut diag, mut off) = tridiagonalize(&mut a);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    Ok(diag)
}

/// Reduces `a` in place; returns the real diagonal and the moduli of the
/// sub-diagonal (`off[i]` couples `i` and `i+1`, last entry zero).
fn tridiagonalize<T: Scalar>(a: &mut Matrix<T>) -> (Vec<T::Real>, Vec<T::Real>) {
    let n = a.rows();
    let mut off = vec![T::Real::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let head = a[(k + 1, k)];
        let tail_sqr: T::Real = ((k + 2)..n).map(|i| a[(i, k)].abs_sqr()).sum();
        if tail_sqr == T::Real::zero() {
            off[k] = head.modulus();
            continue;
        }
        let norm = (head.abs_sqr() + tail_sqr).sqrt();
        let head_mod = head.modulus();
        let phase = if head_mod > T::Real::zero() {
            head.scale(head_mod.recip())
        } else {
            T::one()
        };
        let alpha = -phase.scale(norm);
        v[k + 1] = head - alpha;
        for i in (k + 2)..n {
            v[i] = a[(i, k)];
        }
        let v_norm_sqr: T::Real = v[k + 1..].iter().map(|x| x.abs_sqr()).sum();
        let tau = T::Real::lit(2.0) / v_norm_sqr;

        // p = τ·A·v on the trailing block, then w = p − (τ·v†p/2)·v.
        #[allow(clippy::needless_range_loop)]
        for i in (k + 1)..n {
            let row = &a.row(i)[k + 1..];
            let dot: T = row.iter().zip(&v[k + 1..]).map(|(&x, &y)| x * y).sum();
            p[i] = dot.scale(tau);
        }
        let vp: T::Real = ((k + 1)..n).map(|i| (v[i].conj() * p[i]).re()).sum();
        let half_k = tau * vp * T::Real::lit(0.5);
        for i in (k + 1)..n {
            p[i] -= v[i].scale(half_k);
        }
        // A ← A − v·w† − w·v†
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[(i, j)] -= v[i] * p[j].conj() + p[i] * v[j].conj();
            }
        }
        off[k] = norm;
        for i in (k + 2)..n {
            a[(i, k)] = T::zero();
            a[(k, i)] = T::zero();
        }
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1, n - 2)].modulus();
    }
    let diag = (0..n).map(|i| a[(i, i)].re()).collect();
    (diag, off)
}

const MAX_QL_ITERATIONS: usize = 64;

/// Implicit QL on a real symmetric tridiagonal matrix; eigenvalues land in `d`.
fn tridiagonal_ql<R: RealScalar>(d: &mut [R], e: &mut [R]) -> Result<(), NumericsError> {
    let n = d.len();
    let eps = R::epsilon();
    let two = R::lit(2.0);
    for l in 0..n {
        let mut iterations = 0;
        'deflate: loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(NumericsError::NoConvergence { sweeps: MAX_QL_ITERATIONS });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = (g * g + R::one()).sqrt();
            g = d[m] - d[l] + e[l] / (g + if g >= R::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (R::one(), R::one(), R::zero());
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == R::zero() {
                    d[i + 1] -= p;
                    e[m] = R::zero();
                    continue 'deflate;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = R::zero();
        }
    }
    Ok(())
}

/// Eigenvalues only via Jacobi rotations; slower than the QL path but an
/// independent route to the same spectrum.
pub fn hermitian_eigenvalues_jacobi<T: Scalar>(h: &HermitianMatrix<T>) -> Result<Vec<T::Real>, NumericsError> {
    let mut a = h.as_matrix().clone();
    jacobi(&mut a, None)?;
    let mut values: Vec<T::Real> = (0..h.dim()).map(|i| a[(i, i)].re()).collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    Ok(values)
}

fn off_diagonal_sqr<T: Scalar>(a: &Matrix<T>) -> T::Real {
    let n = a.rows();
    let mut s = T::Real::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[(p, q)].abs_sqr();
        }
    }
    s
}

fn jacobi<T: Scalar>(a: &mut Matrix<T>, mut vectors: Option<&mut Matrix<T>>) -> Result<(), NumericsError> {
    if !a.is_finite() {
        return Err(NumericsError::InvalidInput("non-finite matrix entry".into()));
    }
    let n = a.rows();
    let frob_sqr: T::Real = a.as_slice().iter().map(|x| x.abs_sqr()).sum();
    if frob_sqr == T::Real::zero() {
        return Ok(());
    }
    let eps = T::Real::epsilon();
    let stop = eps * eps * frob_sqr;
    let hundred = T::Real::lit(100.0);
    let two = T::Real::lit(2.0);

    for sweep in 0..MAX_SWEEPS {
        if off_diagonal_sqr(a) <= stop {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.modulus();
                if mag == T::Real::zero() {
                    continue;
                }
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                // Past the first sweeps, drop pivots below the diagonal's resolution.
                if sweep > 3 && app.abs() + hundred * mag == app.abs() && aqq.abs() + hundred * mag == aqq.abs() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let theta = (aqq - app) / (two * mag);
                let t = if theta.abs() > T::Real::lit(1e150) {
                    T::Real::one() / (two * theta)
                } else {
                    let t = T::Real::one() / (theta.abs() + (theta * theta + T::Real::one()).sqrt());
                    if theta < T::Real::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::Real::one() / (t * t + T::Real::one()).sqrt();
                let s = t * c;
                let phase = apq.scale(T::Real::one() / mag);
                let phase_c = phase.conj();

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) - (akq * phase_c).scale(s);
                    a[(k, q)] = (akp * phase).scale(s) + akq.scale(c);
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) - (aqk * phase).scale(s);
                    a[(q, k)] = (apk * phase_c).scale(s) + aqk.scale(c);
                }
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                a[(p, p)] = T::from_real(app - t * mag);
                a[(q, q)] = T::from_real(aqq + t * mag);

                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp.scale(c) - (vkq * phase_c).scale(s);
                        v[(k, q)] = (vkp * phase).scale(s) + vkq.scale(c);
                    }
                }
            }
        }
    }
    if off_diagonal_sqr(a) <= stop {
        Ok(())
    } else {
        Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS })
    }
}
