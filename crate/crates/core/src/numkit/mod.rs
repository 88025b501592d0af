//! Dense complex linear algebra and the entropy kernel.
//!
//! Everything above this module (ensemble states, codes, joint
//! correlations) is expressed in terms of [`ComplexMatrix`] and
//! [`ComplexVector`]. Storage is dense and row-major; every reduction runs in
//! a fixed order so results are bit-stable run to run.

mod eig;
mod entropy;
mod matrix;

pub use eig::{hermitian_eig, hermitian_eigenvalues, EigenDecomposition};
pub(crate) use entropy::check_pmf;
pub use entropy::{
    density_spectrum, entropy_of_spectrum, shannon_entropy, shannon_entropy_with,
    von_neumann_entropy, von_neumann_entropy_with,
};
pub use matrix::{tensor, tensor_capped, ComplexMatrix, ComplexVector};

pub use num_complex::Complex64;

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Vector normalization.
    pub norm: f64,
    /// `‖A − A*‖_max` for hermiticity.
    pub herm: f64,
    /// Trace and pmf-sum deviation from 1.
    pub trace: f64,
    /// Most negative eigenvalue still accepted as positive semidefinite.
    pub psd: f64,
    /// Eigendecomposition reconstruction and orthonormality.
    pub eig: f64,
    /// Eigenvalues below this are treated as exactly zero inside entropies
    /// and excluded from code construction.
    pub zero: f64,
    /// Entropy identities.
    pub ent: f64,
    /// Stationarity residual `‖Pp − p‖_∞`.
    pub stat: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-9,
        herm: 1e-9,
        trace: 1e-9,
        psd: 1e-8,
        eig: 1e-8,
        zero: 1e-12,
        ent: 1e-7,
        stat: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Hard size limits. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest admissible matrix dimension (rows or columns).
    pub max_dim: usize,
    /// Largest number of symbol strings enumerated explicitly.
    pub max_enum: usize,
}

impl Caps {
    pub const DEFAULT: Caps = Caps {
        max_dim: 1 << 13,
        max_enum: 2_000_000,
    };

    /// Fails with a resource error when `base^exp` exceeds `cap`.
    pub(crate) fn check_pow(
        what: &'static str,
        base: usize,
        exp: usize,
        cap: usize,
    ) -> crate::Result<usize> {
        let needed = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
        if needed > cap as u128 {
            return Err(crate::Error::ResourceCap {
                what,
                needed,
                cap: cap as u128,
            });
        }
        Ok(needed as usize)
    }
}

impl Default for Caps {
    fn default() -> Self {
        Self::DEFAULT
    }
}
