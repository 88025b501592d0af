use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::traits::ComplexField;
use faer::{Mat, Par};
use num_complex::Complex64;

use super::{ComplexMatrix, Tolerances};
use crate::{Error, Result};

/// Spectral decomposition `A = V Λ V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V Λ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.eigenvalues
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, &lam)| {
                    acc + v[(i, k)] * lam * v[(j, k)].conj()
                })
        })
    }
}

fn check_hermitian(a: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if !a.is_square() {
        return Err(Error::contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let residual = a.hermiticity_residual();
    if residual > tol.herm {
        return Err(Error::contract(format!(
            "matrix is not hermitian (residual {residual:e})"
        )));
    }
    Ok(())
}

/// Runs faer's self-adjoint solver sequentially. Returns ascending
/// eigenvalues and, when requested, the eigenvector matrix.
fn faer_evd<T: ComplexField>(a: &Mat<T>, vectors: bool) -> Result<(Diag<T>, Option<Mat<T>>)> {
    let n = a.nrows();
    let par = Par::Seq;
    let compute = if vectors {
        ComputeEigenvectors::Yes
    } else {
        ComputeEigenvectors::No
    };
    let mut s = Diag::<T>::zeros(n);
    let mut u = vectors.then(|| Mat::<T>::zeros(n, n));
    let mut buf = MemBuffer::new(evd::self_adjoint_evd_scratch::<T>(
        n,
        compute,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(
        a.as_ref(),
        s.as_mut(),
        u.as_mut().map(|u| u.as_mut()),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|_| Error::NoConvergence)?;
    Ok((s, u))
}

/// Ascending eigenvalues (and vectors) of `a`, using the real solver when
/// every entry is real.
fn solve(a: &ComplexMatrix, vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = a.rows();
    if a.is_real() {
        let m = Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)].re);
        let (s, u) = faer_evd(&m, vectors)?;
        let values = (0..n).map(|i| s.column_vector()[i]).collect();
        let vecs = u.map(|u| ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(u[(i, j)], 0.0)));
        Ok((values, vecs))
    } else {
        let m = Mat::<faer::c64>::from_fn(n, n, |i, j| a[(i, j)]);
        let (s, u) = faer_evd(&m, vectors)?;
        let values = (0..n).map(|i| s.column_vector()[i].re).collect();
        let vecs = u.map(|u| ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)]));
        Ok((values, vecs))
    }
}

/// Descending order, ties keeping the solver's order.
fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).rev().collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    order
}

/// Full spectral decomposition of a Hermitian matrix, eigenvalues sorted
/// descending.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(a, &Tolerances::DEFAULT)?;
    let (values, vectors) = solve(a, true)?;
    let vectors = vectors.expect("eigenvectors requested");
    let order = descending_order(&values);
    let n = a.rows();
    Ok(EigenDecomposition {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        eigenvectors: ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]),
    })
}

/// Eigenvalues only, sorted descending. Much cheaper than
/// [`hermitian_eig`] for large matrices.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a, &Tolerances::DEFAULT)?;
    let (values, _) = solve(a, false)?;
    Ok(descending_order(&values)
        .into_iter()
        .map(|k| values[k])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::ComplexVector;

    #[test]
    fn diagonal_input() {
        let a = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        let e = hermitian_eig(&a).unwrap();
        assert_eq!(e.eigenvalues.len(), 2);
        for lam in e.eigenvalues {
            assert!((lam - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_one_projector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = ComplexVector::from_real(&[h, h]).projector();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(e.eigenvalues[1].abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let i = Complex64::new(0.0, 1.0);
        let a = ComplexMatrix::new(
            2,
            2,
            vec![Complex64::new(2.0, 0.0), i, -i, Complex64::new(2.0, 0.0)],
        )
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-13);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-13);
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::Contract(_))));
        assert!(matches!(hermitian_eigenvalues(&a), Err(Error::Contract(_))));
    }

    #[test]
    fn values_only_matches_full() {
        let a = ComplexMatrix::from_real_diag(&[0.1, 0.7, 0.2]);
        let full = hermitian_eig(&a).unwrap().eigenvalues;
        let only = hermitian_eigenvalues(&a).unwrap();
        assert_eq!(full, only);
        assert!((only[0] - 0.7).abs() < 1e-15);
    }
}
