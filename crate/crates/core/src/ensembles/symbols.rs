use num_complex::Complex64;

use crate::numkit::{hermitian_eigenvalues, ComplexMatrix, ComplexVector, Tolerances};
use crate::{Error, Result};

/// The pure symbol states `|s_n⟩ ∈ C^d` of an ensemble, together with the
/// orthonormal reference basis `{|e_i⟩}` used by codes and partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSet {
    states: Vec<ComplexVector>,
    /// Basis vectors as columns.
    basis: ComplexMatrix,
}

impl SymbolSet {
    /// Symbol states with the standard basis of `C^d`.
    pub fn new(states: Vec<ComplexVector>) -> Result<Self> {
        let d = states
            .first()
            .map(ComplexVector::dim)
            .ok_or_else(|| Error::contract("a symbol set needs at least one state"))?;
        Self::with_basis(states, ComplexMatrix::identity(d.max(1)))
    }

    pub fn with_basis(states: Vec<ComplexVector>, basis: ComplexMatrix) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::contract("a symbol set needs at least one state"));
        };
        let d = first.dim();
        if d == 0 {
            return Err(Error::contract(
                "symbol states must have positive dimension",
            ));
        }
        if let Some(bad) = states.iter().position(|s| s.dim() != d) {
            return Err(Error::dims(format!(
                "symbol {bad} has dimension {}, expected {d}",
                states[bad].dim()
            )));
        }
        if basis.rows() != d || basis.cols() != d {
            return Err(Error::dims(format!(
                "basis is {}x{}, expected {d}x{d}",
                basis.rows(),
                basis.cols()
            )));
        }
        Ok(Self { states, basis })
    }

    /// Number of symbols `N`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Dimension `d` of the symbol Hilbert space.
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn states(&self) -> &[ComplexVector] {
        &self.states
    }

    pub fn state(&self, n: usize) -> &ComplexVector {
        &self.states[n]
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> ComplexVector {
        self.basis.column(i)
    }

    /// `⟨e_i|s_n⟩`.
    pub fn coefficient(&self, i: usize, n: usize) -> Complex64 {
        let s = &self.states[n];
        (0..self.dim()).fold(Complex64::new(0.0, 0.0), |acc, r| {
            acc + self.basis[(r, i)].conj() * s[r]
        })
    }

    /// `|s_n⟩⟨s_n|`.
    pub fn projector(&self, n: usize) -> ComplexMatrix {
        self.states[n].projector()
    }

    /// Largest `| ‖s_n‖² − 1 |`.
    pub fn normalization_residual(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `‖B*B − I‖_max` for the basis matrix `B`.
    pub fn basis_residual(&self) -> f64 {
        self.basis
            .adjoint()
            .matmul(&self.basis)
            .map(|g| g.max_abs_diff(&ComplexMatrix::identity(self.dim())))
            .unwrap_or(f64::INFINITY)
    }

    /// Dimension of `span{|s_n⟩}`, from the spectrum of the frame operator
    /// `Σ |s_n⟩⟨s_n|`.
    pub fn span_rank(&self, tol: &Tolerances) -> Result<usize> {
        let d = self.dim();
        let mut frame = ComplexMatrix::zeros(d, d);
        for s in &self.states {
            frame.add_scaled(Complex64::new(1.0, 0.0), &s.projector())?;
        }
        let spectrum = hermitian_eigenvalues(&frame)?;
        let top = spectrum.first().copied().unwrap_or(0.0);
        let threshold = (tol.eig * top).max(tol.zero);
        Ok(spectrum.iter().filter(|&&x| x > threshold).count())
    }
}
