use num_complex::Complex64;

use super::OperationalPartition;
use crate::ensembles::EnsembleModel;
use crate::numkit::{check_pmf, Caps, ComplexMatrix, Tolerances};
use crate::{Error, Result};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The commutative dynamical system of a stationary Markov source on
/// `C^N`: `Θ(|k⟩⟨l|) = δ_{kl} Σ_i p_{k,i} |i⟩⟨i|` and `ρ = Σ p_n |n⟩⟨n|`.
#[derive(Debug, Clone)]
pub struct MarkovDynSystem {
    transition: Vec<Vec<f64>>,
    rho: Vec<f64>,
}

impl MarkovDynSystem {
    /// `transition[i][j] = p_{i,j}`, columns summing to one.
    pub fn new(transition: Vec<Vec<f64>>, rho: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let n = rho.len();
        if transition.len() != n || transition.iter().any(|row| row.len() != n) {
            return Err(Error::dims(format!("transition matrix must be {n}x{n}")));
        }
        check_pmf(&rho, tol)?;
        for j in 0..n {
            let column: Vec<f64> = transition.iter().map(|row| row[j]).collect();
            check_pmf(&column, tol).map_err(|e| {
                Error::contract(format!("column {j} of the transition matrix: {e}"))
            })?;
        }
        Ok(Self { transition, rho })
    }

    /// System of an i.i.d. or Markov model.
    pub fn from_model(model: &EnsembleModel, tol: &Tolerances) -> Result<Self> {
        let transition = model
            .law()
            .transition_matrix()
            .ok_or_else(|| Error::contract("general laws need the Fock-space system"))?;
        Self::new(transition, model.law().initial(), tol)
    }

    pub fn num_states(&self) -> usize {
        self.rho.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn rho_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&self.rho)
    }

    /// `‖Pρ − ρ‖_∞`; the joint correlations are only those of the source
    /// when this vanishes.
    pub fn stationarity_residual(&self) -> f64 {
        self.theta_dagger_diag(&self.rho)
            .iter()
            .zip(&self.rho)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `Θ(a)`; only the diagonal of `a` contributes.
    pub fn theta(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.num_states();
        if a.rows() != n || a.cols() != n {
            return Err(Error::dims(format!("Θ acts on {n}x{n} matrices")));
        }
        let diag: Vec<Complex64> = (0..n)
            .map(|i| (0..n).map(|k| a[(k, k)] * self.transition[k][i]).sum())
            .collect();
        Ok(ComplexMatrix::from_fn(n, n, |r, c| {
            if r == c {
                diag[r]
            } else {
                real(0.0)
            }
        }))
    }

    fn theta_dagger_diag(&self, sigma: &[f64]) -> Vec<f64> {
        let n = self.num_states();
        (0..n)
            .map(|i| (0..n).map(|j| self.transition[i][j] * sigma[j]).sum())
            .collect()
    }

    /// `Θ†(|n⟩⟨n|) = Σ_i p_{i,n} |i⟩⟨i|`, for diagonal `sigma`.
    pub fn theta_dagger(&self, sigma: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
        let n = self.num_states();
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::dims(format!("Θ† acts on {n}x{n} matrices")));
        }
        if sigma.off_diagonal_residual() > tol.herm {
            return Err(Error::contract("Θ† is only defined on diagonal states"));
        }
        let diag: Vec<f64> = sigma.diagonal().iter().map(|z| z.re).collect();
        Ok(ComplexMatrix::from_real_diag(
            &self.theta_dagger_diag(&diag),
        ))
    }

    /// `E†_{γ,Θ}(σ) = E_γ†(Θ†(σ))`.
    pub fn lifting_full(
        &self,
        gamma: &OperationalPartition,
        sigma: &ComplexMatrix,
        tol: &Tolerances,
    ) -> Result<ComplexMatrix> {
        gamma.lifting(&self.theta_dagger(sigma, tol)?)
    }

    /// Joint correlations `ρ_1, ρ_2, …, ρ_kmax`, produced one at a time.
    ///
    /// The state after `j` liftings is `Σ_n X_n ⊗ |n⟩⟨n|` with `X_n` on
    /// `(C^d)^{⊗j}`; each step applies `Θ†` to the carrier labels and then
    /// `E_γ†`, which appends the symbol factor read off the partition.
    pub fn joint_correlations(
        &self,
        gamma: &OperationalPartition,
        kmax: usize,
        caps: &Caps,
    ) -> Result<MarkovCorrelations<'_>> {
        let n = self.num_states();
        if gamma.carrier_dim() != n {
            return Err(Error::dims(format!(
                "partition acts on C^{} but the system on C^{n}",
                gamma.carrier_dim()
            )));
        }
        Caps::check_pow(
            "joint correlation dimension",
            gamma.size(),
            kmax,
            caps.max_dim,
        )?;
        let symbol_blocks = (0..n)
            .map(|m| gamma.symbol_block(m))
            .collect::<Result<_>>()?;
        let blocks = self
            .rho
            .iter()
            .map(|&p| ComplexMatrix::from_real_diag(&[p]))
            .collect();
        Ok(MarkovCorrelations {
            system: self,
            symbol_blocks,
            blocks,
            k: 0,
            kmax,
        })
    }
}

/// Iterator over `ρ_k` for a [`MarkovDynSystem`].
pub struct MarkovCorrelations<'a> {
    system: &'a MarkovDynSystem,
    symbol_blocks: Vec<ComplexMatrix>,
    blocks: Vec<ComplexMatrix>,
    k: usize,
    kmax: usize,
}

impl MarkovCorrelations<'_> {
    fn mixed(&self, m: usize) -> Result<ComplexMatrix> {
        let mut y = ComplexMatrix::zeros(self.blocks[0].rows(), self.blocks[0].cols());
        for (x, &p) in self.blocks.iter().zip(&self.system.transition[m]) {
            if p != 0.0 {
                y.add_scaled(real(p), x)?;
            }
        }
        Ok(y)
    }

    fn step(&mut self) -> Result<ComplexMatrix> {
        let n = self.system.num_states();
        let dim = self.blocks[0].rows() * self.symbol_blocks[0].rows();
        let mut rho = ComplexMatrix::zeros(dim, dim);
        if self.k + 1 == self.kmax {
            // last step: sum straight into ρ_k instead of keeping blocks
            for m in 0..n {
                rho.add_scaled_tensor(real(1.0), &self.mixed(m)?, &self.symbol_blocks[m])?;
            }
            self.blocks.clear();
        } else {
            let next = (0..n)
                .map(|m| {
                    let mut x = ComplexMatrix::zeros(dim, dim);
                    x.add_scaled_tensor(real(1.0), &self.mixed(m)?, &self.symbol_blocks[m])?;
                    Ok(x)
                })
                .collect::<Result<Vec<_>>>()?;
            for x in &next {
                rho.add_scaled(real(1.0), x)?;
            }
            self.blocks = next;
        }
        self.k += 1;
        Ok(rho)
    }
}

impl Iterator for MarkovCorrelations<'_> {
    type Item = Result<ComplexMatrix>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.k >= self.kmax {
            return None;
        }
        let out = self.step();
        if out.is_err() {
            self.k = self.kmax;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::builtin;

    fn trine_system() -> MarkovDynSystem {
        MarkovDynSystem::from_model(&builtin::trine(), &Tolerances::DEFAULT).unwrap()
    }

    #[test]
    fn theta_dagger_reads_columns() {
        let sys = trine_system();
        let tol = Tolerances::DEFAULT;
        let out = sys
            .theta_dagger(&ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0]), &tol)
            .unwrap();
        assert_eq!(out, ComplexMatrix::from_real_diag(&[0.0, 0.5, 0.5]));
        let uniform = sys.rho_matrix();
        assert!(
            sys.theta_dagger(&uniform, &tol)
                .unwrap()
                .max_abs_diff(&uniform)
                < 1e-15
        );
        assert!(sys.stationarity_residual() < 1e-15);
    }

    #[test]
    fn theta_dagger_rejects_coherences() {
        let sys = trine_system();
        let mut sigma = sys.rho_matrix();
        sigma[(0, 1)] = real(0.1);
        sigma[(1, 0)] = real(0.1);
        assert!(sys.theta_dagger(&sigma, &Tolerances::DEFAULT).is_err());
    }

    #[test]
    fn theta_is_unital() {
        let sys = trine_system();
        let id = ComplexMatrix::identity(3);
        assert!(sys.theta(&id).unwrap().max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn lifting_of_stationary_state() {
        let trine = builtin::trine();
        let sys = trine_system();
        let gamma = OperationalPartition::from_symbols(trine.symbols());
        let lifted = sys
            .lifting_full(&gamma, &sys.rho_matrix(), &Tolerances::DEFAULT)
            .unwrap();
        let mut expected = ComplexMatrix::zeros(6, 6);
        for n in 0..3 {
            let mut basis = ComplexMatrix::zeros(3, 3);
            basis[(n, n)] = real(1.0);
            expected
                .add_scaled_tensor(real(1.0 / 3.0), &trine.symbols().projector(n), &basis)
                .unwrap();
        }
        assert!(lifted.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn trine_correlations_start_maximally_mixed() {
        let trine = builtin::trine();
        let sys = trine_system();
        let gamma = OperationalPartition::from_symbols(trine.symbols());
        let rho: Vec<_> = sys
            .joint_correlations(&gamma, 2, &Caps::DEFAULT)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(rho.len(), 2);
        assert!(rho[0].max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5])) < 1e-15);
        assert!(rho[1].partial_trace_last(2).unwrap().max_abs_diff(&rho[0]) < 1e-15);
    }

    #[test]
    fn correlation_cap() {
        let sys = trine_system();
        let gamma = OperationalPartition::from_symbols(builtin::trine().symbols());
        let caps = Caps {
            max_dim: 16,
            max_enum: 10,
        };
        assert!(matches!(
            sys.joint_correlations(&gamma, 5, &caps),
            Err(Error::ResourceCap { .. })
        ));
    }
}
