use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::ensembles::{EnsembleModel, StochasticLaw, SymbolSet};
use crate::numkit::{Caps, ComplexMatrix, Tolerances};
use crate::{Error, Result};

/// Diagonal state or observable on the free Fock space over `C^N`:
/// weights attached to symbol strings, the empty string being `|∅⟩`.
pub type WeightedStrings = BTreeMap<Vec<usize>, f64>;

/// Last symbol of a string; the empty string counts as symbol 0.
pub fn final_symbol(string: &[usize]) -> usize {
    string.last().copied().unwrap_or(0)
}

/// The string without its last symbol.
pub fn pruned(string: &[usize]) -> &[usize] {
    &string[..string.len().saturating_sub(1)]
}

/// The dynamical system of a general stochastic source on the free Fock
/// space, truncated to strings of length at most `depth_cap`:
/// `Θ(|n̄⟩⟨n̄|) = p(final(n̄) | pruned(n̄)) |pruned(n̄)⟩⟨pruned(n̄)|`,
/// `ρ = |∅⟩⟨∅|`, and `γ_i |n̄⟩ = ⟨e_i|s_{final(n̄)}⟩ |n̄⟩`.
#[derive(Debug, Clone)]
pub struct FockDynSystem {
    law: StochasticLaw,
    depth_cap: usize,
}

/// One term `w |s'_{n̄}⟩⟨s'_{n̄}|` of a lifted Fock state, with the symbol
/// factor `|s_{final(n̄)}⟩⟨s_{final(n̄)}|` written out.
#[derive(Debug, Clone)]
pub struct LiftedTerm {
    pub string: Vec<usize>,
    pub weight: f64,
    pub block: ComplexMatrix,
}

impl FockDynSystem {
    pub fn new(law: StochasticLaw, depth_cap: usize) -> Self {
        Self { law, depth_cap }
    }

    pub fn from_model(model: &EnsembleModel, depth_cap: usize) -> Self {
        Self::new(model.law().clone(), depth_cap)
    }

    pub fn num_symbols(&self) -> usize {
        self.law.num_symbols()
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    /// `ρ = |∅⟩⟨∅|`.
    pub fn rho(&self) -> WeightedStrings {
        WeightedStrings::from([(vec![], 1.0)])
    }

    /// `Θ` on a diagonal observable; `|∅⟩⟨∅|` has no preimage and drops out.
    pub fn theta(&self, a: &WeightedStrings) -> WeightedStrings {
        let mut out = WeightedStrings::new();
        for (string, &w) in a {
            if string.is_empty() {
                continue;
            }
            let p = self.law.conditional(pruned(string))[final_symbol(string)];
            *out.entry(pruned(string).to_vec()).or_insert(0.0) += p * w;
        }
        out
    }

    /// `Θ†(|n̄⟩⟨n̄|) = Σ_k p(k|n̄) |n̄∘k⟩⟨n̄∘k|`. Zero-probability children are
    /// omitted.
    pub fn theta_dagger(&self, sigma: &WeightedStrings) -> Result<WeightedStrings> {
        let mut out = WeightedStrings::new();
        for (string, &w) in sigma {
            if string.len() >= self.depth_cap {
                return Err(Error::ResourceCap {
                    what: "Fock string length",
                    needed: string.len() as u128 + 1,
                    cap: self.depth_cap as u128,
                });
            }
            for (k, &p) in self.law.conditional(string).iter().enumerate() {
                if p > 0.0 {
                    let mut child = string.clone();
                    child.push(k);
                    *out.entry(child).or_insert(0.0) += w * p;
                }
            }
        }
        Ok(out)
    }

    /// `E†_{γ,Θ}` on a diagonal state: `Θ†` followed by the partition
    /// lifting, which attaches `|s_{final}⟩⟨s_{final}|` to every string.
    pub fn lifting_full(
        &self,
        symbols: &SymbolSet,
        sigma: &WeightedStrings,
    ) -> Result<Vec<LiftedTerm>> {
        if symbols.len() != self.num_symbols() {
            return Err(Error::dims(format!(
                "{} symbol states for a law over {} symbols",
                symbols.len(),
                self.num_symbols()
            )));
        }
        let blocks = gamma_blocks(symbols);
        Ok(self
            .theta_dagger(sigma)?
            .into_iter()
            .map(|(string, weight)| {
                let block = blocks[final_symbol(&string)].clone();
                LiftedTerm {
                    string,
                    weight,
                    block,
                }
            })
            .collect())
    }

    /// Joint correlations `ρ_1 … ρ_kmax`, by expanding the lifting string by
    /// string and accumulating `w(n̄) · B_{n_1} ⊗ ⋯ ⊗ B_{n_k}`.
    pub fn joint_correlations(
        &self,
        symbols: &SymbolSet,
        kmax: usize,
        caps: &Caps,
    ) -> Result<Vec<ComplexMatrix>> {
        if kmax > self.depth_cap {
            return Err(Error::ResourceCap {
                what: "Fock string length",
                needed: kmax as u128,
                cap: self.depth_cap as u128,
            });
        }
        Caps::check_pow(
            "Fock string enumeration",
            self.num_symbols(),
            kmax,
            caps.max_enum,
        )?;
        Caps::check_pow(
            "joint correlation dimension",
            symbols.dim(),
            kmax,
            caps.max_dim,
        )?;
        let d = symbols.dim();
        let mut out: Vec<ComplexMatrix> = (1..=kmax)
            .map(|k| {
                let dim = d.pow(k as u32);
                ComplexMatrix::zeros(dim, dim)
            })
            .collect();
        let root = ComplexMatrix::from_real_diag(&[1.0]);
        let mut stack: Vec<(Vec<usize>, f64, ComplexMatrix)> = vec![(vec![], 1.0, root)];
        while let Some((string, weight, acc)) = stack.pop() {
            if string.len() == kmax {
                continue;
            }
            let state = WeightedStrings::from([(string, weight)]);
            for term in self.lifting_full(symbols, &state)?.into_iter().rev() {
                let mut next = ComplexMatrix::zeros(acc.rows() * d, acc.cols() * d);
                next.add_scaled_tensor(Complex64::new(1.0, 0.0), &acc, &term.block)?;
                out[term.string.len() - 1].add_scaled(Complex64::new(term.weight, 0.0), &next)?;
                stack.push((term.string, term.weight, next));
            }
        }
        Ok(out)
    }
}

/// `γ_i γ_j*` restricted to a string ending in `m` is the scalar
/// `⟨e_i|s_m⟩⟨s_m|e_j⟩`; collected over `i, j` it is `|s_m⟩⟨s_m|` in the
/// `e` basis.
fn gamma_blocks(symbols: &SymbolSet) -> Vec<ComplexMatrix> {
    let d = symbols.dim();
    (0..symbols.len())
        .map(|m| {
            ComplexMatrix::from_fn(d, d, |i, j| {
                symbols.coefficient(i, m) * symbols.coefficient(j, m).conj()
            })
        })
        .collect()
}

/// Total weight of a diagonal state.
pub fn total_weight(sigma: &WeightedStrings) -> f64 {
    sigma.values().sum()
}

/// Checks that all weights are nonnegative and sum to one.
pub fn check_weights(sigma: &WeightedStrings, tol: &Tolerances) -> Result<()> {
    if let Some((s, w)) = sigma.iter().find(|(_, &w)| w < 0.0) {
        return Err(Error::contract(format!(
            "string {s:?} has negative weight {w}"
        )));
    }
    let total = total_weight(sigma);
    if (total - 1.0).abs() > tol.trace {
        return Err(Error::contract(format!("weights sum to {total}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{builtin, FnLaw};

    #[test]
    fn final_and_pruned() {
        assert_eq!(final_symbol(&[]), 0);
        assert_eq!(final_symbol(&[2, 1]), 1);
        assert_eq!(pruned(&[2, 1]), &[2]);
        assert_eq!(pruned(&[]), &[] as &[usize]);
    }

    #[test]
    fn vacuum_lifts_to_first_symbol_ensemble() {
        let trine = builtin::trine();
        let sys = FockDynSystem::from_model(&trine, 4);
        let terms = sys.lifting_full(trine.symbols(), &sys.rho()).unwrap();
        assert_eq!(terms.len(), 3);
        for (m, term) in terms.iter().enumerate() {
            assert_eq!(term.string, vec![m]);
            assert!((term.weight - 1.0 / 3.0).abs() < 1e-15);
            assert!(term.block.max_abs_diff(&trine.symbols().projector(m)) < 1e-15);
        }
    }

    #[test]
    fn deterministic_law_gives_one_chain() {
        let law = StochasticLaw::general(FnLaw::new(2, |_: &[usize]| vec![1.0, 0.0]));
        let sys = FockDynSystem::new(law, 5);
        let mut state = sys.rho();
        for k in 1..=5 {
            state = sys.theta_dagger(&state).unwrap();
            assert_eq!(state, WeightedStrings::from([(vec![0; k], 1.0)]));
        }
        assert!(matches!(
            sys.theta_dagger(&state),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn theta_dagger_preserves_weight() {
        let sys = FockDynSystem::from_model(&builtin::trine(), 6);
        let mut state = sys.rho();
        for _ in 0..4 {
            state = sys.theta_dagger(&state).unwrap();
            check_weights(&state, &Tolerances::DEFAULT).unwrap();
        }
        assert_eq!(state.len(), 3 * 2 * 2 * 2);
    }

    #[test]
    fn duality_on_strings() {
        let sys = FockDynSystem::from_model(&builtin::trine(), 6);
        let sigma = WeightedStrings::from([(vec![], 0.5), (vec![1], 0.25), (vec![1, 2], 0.25)]);
        let a: WeightedStrings = [vec![0], vec![1], vec![1, 0], vec![1, 2, 0], vec![2]]
            .into_iter()
            .zip([0.3, -1.0, 2.0, 0.7, 1.5])
            .collect();
        let pair = |x: &WeightedStrings, y: &WeightedStrings| -> f64 {
            x.iter()
                .map(|(s, w)| w * y.get(s).copied().unwrap_or(0.0))
                .sum()
        };
        let lhs = pair(&sys.theta_dagger(&sigma).unwrap(), &a);
        let rhs = pair(&sigma, &sys.theta(&a));
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn bell_fock_correlations_are_maximally_mixed() {
        let bell = builtin::bell();
        let sys = FockDynSystem::from_model(&bell, 8);
        let rho = sys
            .joint_correlations(bell.symbols(), 3, &Caps::DEFAULT)
            .unwrap();
        let expected = ComplexMatrix::from_real_diag(&[0.125; 8]);
        assert!(rho[2].max_abs_diff(&expected) < 1e-14);
    }
}
