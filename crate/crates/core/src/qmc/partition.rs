use num_complex::Complex64;

use crate::ensembles::SymbolSet;
use crate::numkit::ComplexMatrix;
use crate::{Error, Result};

/// Operators `γ_1 … γ_d` on a carrier space with `Σ γ_i* γ_i = I`.
///
/// Block operators on `C^d ⊗ H` are laid out with the `C^d` index outermost:
/// block `(i, j)` occupies rows `i·N..(i+1)·N` and columns `j·N..(j+1)·N`.
#[derive(Debug, Clone)]
pub struct OperationalPartition {
    elements: Vec<ComplexMatrix>,
}

impl OperationalPartition {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::contract("a partition needs at least one element"))?;
        let n = first.rows();
        if elements.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::dims("partition elements must be square of one size"));
        }
        Ok(Self { elements })
    }

    /// `γ_i = Σ_n ⟨e_i|s_n⟩ |n⟩⟨n|` on `C^N`.
    pub fn from_symbols(symbols: &SymbolSet) -> Self {
        let n = symbols.len();
        let elements = (0..symbols.dim())
            .map(|i| {
                ComplexMatrix::from_fn(n, n, |r, c| {
                    if r == c {
                        symbols.coefficient(i, r)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self { elements }
    }

    /// Number of elements `d`.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn carrier_dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `‖Σ γ_i* γ_i − I‖_max`.
    pub fn unity_residual(&self) -> f64 {
        let n = self.carrier_dim();
        let mut sum = ComplexMatrix::zeros(n, n);
        for g in &self.elements {
            let term = g.adjoint().matmul(g).expect("square elements");
            sum.add_scaled(Complex64::new(1.0, 0.0), &term)
                .expect("square elements");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(n))
    }

    /// Transition expectation `E_γ([a_ij]) = Σ_ij γ_i* a_ij γ_j`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d, n) = (self.size(), self.carrier_dim());
        if a.rows() != d * n || a.cols() != d * n {
            return Err(Error::dims(format!(
                "transition expectation takes a {0}x{0} block operator, got {1}x{2}",
                d * n,
                a.rows(),
                a.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, gi) in self.elements.iter().enumerate() {
            let gi_adj = gi.adjoint();
            for (j, gj) in self.elements.iter().enumerate() {
                let block = ComplexMatrix::from_fn(n, n, |r, c| a[(i * n + r, j * n + c)]);
                let term = gi_adj.matmul(&block)?.matmul(gj)?;
                out.add_scaled(Complex64::new(1.0, 0.0), &term)?;
            }
        }
        Ok(out)
    }

    /// Lifting `E_γ†(σ) = Σ_ij |e_i⟩⟨e_j| ⊗ γ_i σ γ_j*`.
    pub fn lifting(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d, n) = (self.size(), self.carrier_dim());
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::dims(format!(
                "lifting takes a {n}x{n} operator, got {}x{}",
                sigma.rows(),
                sigma.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(d * n, d * n);
        for (i, gi) in self.elements.iter().enumerate() {
            let left = gi.matmul(sigma)?;
            for (j, gj) in self.elements.iter().enumerate() {
                let block = left.matmul(&gj.adjoint())?;
                for r in 0..n {
                    for c in 0..n {
                        out[(i * n + r, j * n + c)] = block[(r, c)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// The symbol factor `B` with `E_γ†(|m⟩⟨m|) = B ⊗ |m⟩⟨m|`, read off the
    /// lifting. Fails if the lifting leaves the carrier diagonal.
    pub(crate) fn symbol_block(&self, m: usize) -> Result<ComplexMatrix> {
        let (d, n) = (self.size(), self.carrier_dim());
        let mut sigma = ComplexMatrix::zeros(n, n);
        sigma[(m, m)] = Complex64::new(1.0, 0.0);
        let lifted = self.lifting(&sigma)?;
        let block = ComplexMatrix::from_fn(d, d, |i, j| lifted[(i * n + m, j * n + m)]);
        let mut rest = lifted;
        for i in 0..d {
            for j in 0..d {
                rest[(i * n + m, j * n + m)] = Complex64::new(0.0, 0.0);
            }
        }
        if rest.max_abs() > 0.0 {
            return Err(Error::contract(
                "partition does not keep carrier basis states diagonal",
            ));
        }
        Ok(block)
    }
}
