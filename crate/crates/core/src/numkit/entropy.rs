use super::{hermitian_eigenvalues, ComplexMatrix, Tolerances};
use crate::{Error, Result};

/// Checks that `rho` is a density operator and returns its spectrum
/// (descending).
pub fn density_spectrum(rho: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
        return Err(Error::contract(format!("density operator has trace {tr}")));
    }
    let spectrum = hermitian_eigenvalues(rho)?;
    if let Some(&min) = spectrum.last() {
        if min < -tol.psd {
            return Err(Error::contract(format!(
                "density operator is not positive semidefinite (eigenvalue {min:e})"
            )));
        }
    }
    Ok(spectrum)
}

/// `−Σ λ log₂ λ` over a density spectrum; eigenvalues below `tol.zero`
/// count as zero and the result is clamped to be nonnegative.
pub fn entropy_of_spectrum(spectrum: &[f64], tol: &Tolerances) -> f64 {
    let s = spectrum
        .iter()
        .filter(|&&x| x >= tol.zero)
        .fold(0.0, |acc, &x| acc - x * x.log2());
    s.max(0.0)
}

/// Von Neumann entropy `S(ρ) = −tr ρ log₂ ρ`, in qubits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    von_neumann_entropy_with(rho, &Tolerances::DEFAULT)
}

pub fn von_neumann_entropy_with(rho: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    let spectrum = density_spectrum(rho, tol)?;
    Ok(entropy_of_spectrum(&spectrum, tol))
}

pub(crate) fn check_pmf(p: &[f64], tol: &Tolerances) -> Result<()> {
    if p.is_empty() {
        return Err(Error::contract("empty probability vector"));
    }
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::contract(format!("invalid probability {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.trace {
        return Err(Error::contract(format!("probabilities sum to {total}")));
    }
    Ok(())
}

/// Shannon entropy `H(p) = −Σ p log₂ p`, in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    shannon_entropy_with(p, &Tolerances::DEFAULT)
}

pub fn shannon_entropy_with(p: &[f64], tol: &Tolerances) -> Result<f64> {
    check_pmf(p, tol)?;
    Ok(p.iter()
        .filter(|&&x| x > 0.0)
        .fold(0.0, |acc, &x| acc - x * x.log2())
        .max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::ComplexVector;

    #[test]
    fn pure_state_has_zero_entropy() {
        let s = ComplexVector::from_real(&[0.6, 0.8]).projector();
        assert!(von_neumann_entropy(&s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_qubit() {
        let rho = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_density() {
        let bad_trace = ComplexMatrix::from_real_diag(&[0.5, 0.6]);
        assert!(von_neumann_entropy(&bad_trace).is_err());
        let negative = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
        assert!(von_neumann_entropy(&negative).is_err());
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.25, 0.25]).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn shannon_rejects_invalid_pmf() {
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
        assert!(shannon_entropy(&[]).is_err());
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let tol = Tolerances::DEFAULT;
        assert_eq!(entropy_of_spectrum(&[1.0, -1e-13], &tol), 0.0);
    }
}
