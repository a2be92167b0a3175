//! Partial transposition and the positive-partial-transpose test.

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::numerics::{hermitian_eigenvalues, HermitianMatrix, Matrix, NumericsError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Transposes one tensor factor of an `(m·n)`-dimensional operator.
///
/// Basis index `(i, a)` maps to row `i·n + a` with `i < m`, `a < n`.
/// Transposing `B` sends entry `((i,a),(j,b))` to `((i,b),(j,a))`; transposing
/// `A` sends it to `((j,a),(i,b))`. Both are pure permutations of entries, so
/// Hermiticity and trace are preserved exactly.
pub fn partial_transpose_matrix<T: Scalar>(
    rho: &HermitianMatrix<T>,
    m: usize,
    n: usize,
    subsystem: Subsystem,
) -> Result<HermitianMatrix<T>, NumericsError> {
    if rho.dim() != m * n {
        return Err(NumericsError::InvalidInput(format!(
            "{}-dimensional operator is not {m}x{n} bipartite",
            rho.dim()
        )));
    }
    let src = rho.as_matrix();
    let mut out = Matrix::<T>::zeros(m * n, m * n);
    for i in 0..m {
        for a in 0..n {
            for j in 0..m {
                for b in 0..n {
                    let v = src[(i * n + a, j * n + b)];
                    match subsystem {
                        Subsystem::B => out[(i * n + b, j * n + a)] = v,
                        Subsystem::A => out[(j * n + a, i * n + b)] = v,
                    }
                }
            }
        }
    }
    Ok(HermitianMatrix::from_exact(out))
}

/// Partial transpose of a state over the chosen subsystem.
pub fn partial_transpose<T: Scalar>(rho: &DensityMatrix<T>, subsystem: Subsystem) -> HermitianMatrix<T> {
    let shape = rho.shape();
    partial_transpose_matrix(rho.matrix(), shape.m(), shape.n(), subsystem)
        .expect("density matrix dimension matches its shape")
}

/// Outcome of the PPT test on one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptVerdict {
    pub is_ppt: bool,
    pub min_pt_eigenvalue: f64,
    /// `|ρ|`, product of the spectrum of ρ.
    pub det_rho: f64,
    /// `|ρ^PT|`, product of the spectrum of the partial transpose.
    pub det_pt: f64,
}

impl PptVerdict {
    /// `|ρ^PT| > |ρ|`.
    pub fn pt_determinant_greater(&self) -> bool {
        self.det_pt > self.det_rho
    }
}

/// PPT verdict with transposition over `B`: PPT iff the smallest eigenvalue of
/// `ρ^{T_B}` is at least `-ppt_tol`.
pub fn ppt_verdict<T: Scalar>(rho: &DensityMatrix<T>, ppt_tol: f64) -> Result<PptVerdict, NumericsError> {
    let pt = partial_transpose(rho, Subsystem::B);
    let evals = hermitian_eigenvalues(&pt)?;
    let to_f64 = |x: T::Real| x.to_f64().unwrap_or(f64::NAN);
    let min_pt_eigenvalue = to_f64(evals[0]);
    let det_pt = to_f64(evals.iter().fold(T::Real::one(), |acc, &x| acc * x));
    Ok(PptVerdict {
        is_ppt: min_pt_eigenvalue >= -ppt_tol,
        min_pt_eigenvalue,
        det_rho: to_f64(rho.determinant()),
        det_pt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::BipartiteShape;
    use crate::numerics::Field;
    use crate::tolerance::Tolerances;
    use num_complex::Complex64;

    fn state<T: Scalar>(m: usize, n: usize, rank: usize, field: Field, mat: Matrix<T>) -> DensityMatrix<T> {
        let shape = BipartiteShape::new(m, n, rank, field).unwrap();
        DensityMatrix::new(shape, HermitianMatrix::from_matrix(mat).unwrap(), &Tolerances::DEFAULT).unwrap()
    }

    fn bell() -> DensityMatrix<Complex64> {
        let psi = [1.0, 0.0, 0.0, 1.0].map(|x: f64| Complex64::new(x / 2f64.sqrt(), 0.0));
        state(2, 2, 1, Field::Complex, Matrix::from_fn(4, 4, |i, j| psi[i] * psi[j].conj()))
    }

    #[test]
    fn maximally_mixed_is_fixed() {
        let mut id = Matrix::<f64>::identity(6);
        id.scale(1.0 / 6.0);
        let rho = state(2, 3, 6, Field::Real, id.clone());
        assert_eq!(partial_transpose(&rho, Subsystem::B).as_matrix(), &id);
        assert_eq!(partial_transpose(&rho, Subsystem::A).as_matrix(), &id);
    }

    #[test]
    fn transposition_is_an_involution() {
        let rho = bell();
        for sys in [Subsystem::A, Subsystem::B] {
            let once = partial_transpose(&rho, sys);
            let twice = partial_transpose_matrix(&once, 2, 2, sys).unwrap();
            assert_eq!(&twice, rho.matrix());
        }
    }

    #[test]
    fn bell_state_partial_transpose_spectrum() {
        // ρ^{T_B} of the Bell projector is (1/2)·SWAP: eigenvalues ±1/2.
        let pt = partial_transpose(&bell(), Subsystem::B);
        let evals = hermitian_eigenvalues(&pt).unwrap();
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (g, w) in evals.iter().zip(want) {
            assert!((g - w).abs() < 1e-15, "{evals:?}");
        }
        let v = ppt_verdict(&bell(), 1e-10).unwrap();
        assert!(!v.is_ppt);
        assert!((v.min_pt_eigenvalue + 0.5).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_two_qubits_is_ppt() {
        let mut id = Matrix::<Complex64>::identity(4);
        id.scale(0.25);
        let v = ppt_verdict(&state(2, 2, 4, Field::Complex, id), 1e-10).unwrap();
        assert!(v.is_ppt);
        assert!((v.min_pt_eigenvalue - 0.25).abs() < 1e-15);
        assert!((v.det_rho - 0.25f64.powi(4)).abs() < 1e-16);
    }

    #[test]
    fn product_state_is_ppt() {
        // (I/2) ⊗ diag(1, 0, 0)
        let diag = [0.5, 0.0, 0.0, 0.5, 0.0, 0.0];
        let v = ppt_verdict(&state(2, 3, 2, Field::Real, Matrix::diagonal(&diag)), 1e-10).unwrap();
        assert!(v.is_ppt);
        assert_eq!(v.det_rho, 0.0);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let h = HermitianMatrix::from_matrix(Matrix::<f64>::identity(5)).unwrap();
        assert!(partial_transpose_matrix(&h, 2, 3, Subsystem::B).is_err());
    }
}
