use num_complex::Complex64;

use super::{StochasticLaw, SymbolSet};
use crate::numkit::{Caps, ComplexMatrix, ComplexVector, Tolerances};
use crate::{Error, Result};

/// Symbol states plus the stochastic law that strings them together. Its
/// `k`-th ensemble is `{p(n_1…n_k), |s_{n_1}⋯s_{n_k}⟩}`.
#[derive(Debug, Clone)]
pub struct EnsembleModel {
    symbols: SymbolSet,
    law: StochasticLaw,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl EnsembleModel {
    pub fn new(symbols: SymbolSet, law: StochasticLaw) -> Result<Self> {
        if symbols.len() != law.num_symbols() {
            return Err(Error::dims(format!(
                "{} symbol states but the law ranges over {} symbols",
                symbols.len(),
                law.num_symbols()
            )));
        }
        if let StochasticLaw::Markov { transition, .. } = &law {
            let n = symbols.len();
            if transition.len() != n || transition.iter().any(|row| row.len() != n) {
                return Err(Error::dims(format!("transition matrix must be {n}x{n}")));
            }
        }
        Ok(Self { symbols, law })
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn law(&self) -> &StochasticLaw {
        &self.law
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn dim(&self) -> usize {
        self.symbols.dim()
    }

    /// Probability of the symbol string (0-based indices).
    pub fn joint_pmf(&self, string: &[usize]) -> Result<f64> {
        if string.is_empty() {
            return Err(Error::contract("joint pmf needs a nonempty string"));
        }
        let n = self.num_symbols();
        if let Some(&bad) = string.iter().find(|&&s| s >= n) {
            return Err(Error::contract(format!(
                "symbol index {bad} out of range for {n} symbols"
            )));
        }
        Ok(match &self.law {
            StochasticLaw::Iid { p } => string.iter().map(|&s| p[s]).product(),
            StochasticLaw::Markov {
                transition,
                initial,
            } => string
                .windows(2)
                .fold(initial[string[0]], |acc, w| acc * transition[w[1]][w[0]]),
            StochasticLaw::General(law) => {
                let mut prob = 1.0;
                for (pos, &s) in string.iter().enumerate() {
                    prob *= law.conditional(&string[..pos])[s];
                    if prob == 0.0 {
                        break;
                    }
                }
                prob
            }
        })
    }

    /// `ρ_{S^k}` by summing the weighted projectors of all `N^k` strings.
    pub fn ensemble_state_bruteforce(&self, k: usize, caps: &Caps) -> Result<ComplexMatrix> {
        if k == 0 {
            return Err(Error::contract("string length must be at least 1"));
        }
        let n = self.num_symbols();
        Caps::check_pow("string enumeration", n, k, caps.max_enum)?;
        let dim = Caps::check_pow("ensemble state dimension", self.dim(), k, caps.max_dim)?;
        let mut rho = ComplexMatrix::zeros(dim, dim);
        let mut string = vec![0usize; k];
        loop {
            let w = self.joint_pmf(&string)?;
            if w > 0.0 {
                let v = product_state(&self.symbols, &string);
                rho.add_scaled(real(w), &v.projector())?;
            }
            // odometer, last position fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(rho);
                }
                pos -= 1;
                string[pos] += 1;
                if string[pos] < n {
                    break;
                }
                string[pos] = 0;
            }
        }
    }

    /// End-symbol-conditioned blocks `σ_m^{(k)}`: the part of `ρ_{S^k}`
    /// carried by strings ending in `m`.
    fn markov_blocks(&self, transition: &[Vec<f64>], k: usize) -> Result<Vec<ComplexMatrix>> {
        let n = self.num_symbols();
        let projectors: Vec<ComplexMatrix> = (0..n).map(|m| self.symbols.projector(m)).collect();
        let initial = self.law.initial();
        let mut blocks: Vec<ComplexMatrix> = projectors
            .iter()
            .zip(&initial)
            .map(|(proj, &p)| proj.scaled(real(p)))
            .collect();
        for _ in 1..k {
            blocks = (0..n)
                .map(|m| {
                    let mixed = mix_blocks(&blocks, &transition[m])?;
                    crate::numkit::tensor_capped(&mixed, &projectors[m], usize::MAX)
                })
                .collect::<Result<_>>()?;
        }
        Ok(blocks)
    }

    /// `ρ_{S^k}` for i.i.d. and Markov laws through the forward recursion
    /// `σ_m^{(j+1)} = (Σ_i p_{m,i} σ_i^{(j)}) ⊗ |s_m⟩⟨s_m|`, at a cost of
    /// `N² d^{2k}` per step instead of `N^k` string enumeration.
    pub fn ensemble_state_markov(&self, k: usize, caps: &Caps) -> Result<ComplexMatrix> {
        if k == 0 {
            return Err(Error::contract("string length must be at least 1"));
        }
        let transition = self
            .law
            .transition_matrix()
            .ok_or_else(|| Error::contract("the Markov recursion needs an i.i.d. or Markov law"))?;
        let dim = Caps::check_pow("ensemble state dimension", self.dim(), k, caps.max_dim)?;
        if k == 1 {
            let blocks = self.markov_blocks(&transition, 1)?;
            return sum_blocks(&blocks);
        }
        // Only the level-(k-1) blocks are stored; level k is summed directly.
        let blocks = self.markov_blocks(&transition, k - 1)?;
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for (m, row) in transition.iter().enumerate() {
            let mixed = mix_blocks(&blocks, row)?;
            rho.add_scaled_tensor(real(1.0), &mixed, &self.symbols.projector(m))?;
        }
        Ok(rho)
    }

    /// `ρ_{S^k}` by the cheapest exact route for the law.
    pub fn ensemble_state(&self, k: usize, caps: &Caps) -> Result<ComplexMatrix> {
        if self.law.is_markov() {
            self.ensemble_state_markov(k, caps)
        } else {
            self.ensemble_state_bruteforce(k, caps)
        }
    }

    /// Checks every model invariant and reports each with its residual.
    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let mut report = ValidationReport::default();
        let symbols = &self.symbols;
        report.push(
            "symbol normalization",
            symbols.normalization_residual(),
            tol.norm,
        );
        report.push("basis orthonormality", symbols.basis_residual(), tol.norm);
        match symbols.span_rank(tol) {
            Ok(rank) => report.push_flag(
                "symbols span H_S",
                rank == symbols.dim(),
                (symbols.dim() - rank) as f64,
                format!("rank {rank} of dimension {}", symbols.dim()),
            ),
            Err(e) => report.push_flag("symbols span H_S", false, f64::NAN, e.to_string()),
        }
        match &self.law {
            StochasticLaw::Iid { p } => report.push("pmf", pmf_residual(p), tol.trace),
            StochasticLaw::Markov {
                transition,
                initial,
            } => {
                report.push("initial pmf", pmf_residual(initial), tol.trace);
                let n = initial.len();
                let stochastic = (0..n)
                    .map(|j| {
                        let column: Vec<f64> = transition.iter().map(|row| row[j]).collect();
                        pmf_residual(&column)
                    })
                    .fold(0.0, f64::max);
                report.push("column stochasticity", stochastic, tol.trace);
                let stationarity = (0..n)
                    .map(|i| {
                        let pi: f64 = (0..n).map(|j| transition[i][j] * initial[j]).sum();
                        (pi - initial[i]).abs()
                    })
                    .fold(0.0, f64::max);
                report.push("stationarity Pp = p", stationarity, tol.stat);
            }
            StochasticLaw::General(_) => {
                let (conditional, compatibility) = self.sampled_compatibility(4);
                report.push("conditional pmfs (depth 4)", conditional, tol.trace);
                report.push(
                    "joint pmf compatibility (depth 4)",
                    compatibility,
                    tol.trace,
                );
            }
        }
        if !matches!(self.law, StochasticLaw::General(_)) {
            let (_, compatibility) = self.sampled_compatibility(3);
            report.push(
                "joint pmf compatibility (depth 3)",
                compatibility,
                tol.trace,
            );
        }
        report
    }

    /// Worst conditional-pmf residual and worst `|Σ_k p(n̄∘k) − p(n̄)|` over
    /// all prefixes up to `depth` (capped at 4096 prefixes per level).
    fn sampled_compatibility(&self, depth: usize) -> (f64, f64) {
        let n = self.num_symbols();
        let mut worst_conditional = 0.0f64;
        let mut worst_compat = 0.0f64;
        let mut level: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..depth {
            let mut next = Vec::new();
            for prefix in &level {
                worst_conditional =
                    worst_conditional.max(pmf_residual(&self.law.conditional(prefix)));
                let children: Vec<Vec<usize>> = (0..n)
                    .map(|k| {
                        let mut c = prefix.clone();
                        c.push(k);
                        c
                    })
                    .collect();
                let total: f64 = children
                    .iter()
                    .map(|c| self.joint_pmf(c).unwrap_or(f64::NAN))
                    .sum();
                let parent = if prefix.is_empty() {
                    1.0
                } else {
                    self.joint_pmf(prefix).unwrap_or(f64::NAN)
                };
                worst_compat = worst_compat.max((total - parent).abs());
                next.extend(children);
            }
            next.truncate(4096);
            level = next;
        }
        (worst_conditional, worst_compat)
    }
}

fn mix_blocks(blocks: &[ComplexMatrix], weights: &[f64]) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(blocks[0].rows(), blocks[0].cols());
    for (block, &w) in blocks.iter().zip(weights) {
        if w != 0.0 {
            out.add_scaled(real(w), block)?;
        }
    }
    Ok(out)
}

fn sum_blocks(blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    mix_blocks(blocks, &vec![1.0; blocks.len()])
}

/// Largest violation of the pmf conditions: a negative entry or the
/// deviation of the sum from one.
fn pmf_residual(p: &[f64]) -> f64 {
    let negative = p.iter().map(|&x| (-x).max(0.0)).fold(0.0, f64::max);
    let sum: f64 = p.iter().sum();
    negative.max((sum - 1.0).abs())
}

/// Outcome of one model check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: residual <= tolerance,
            residual,
            detail: format!("tolerance {tolerance:e}"),
        });
    }

    fn push_flag(&mut self, name: &str, passed: bool, residual: f64, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            residual,
            detail,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when a non-stationary Markov law was accepted; the dynamical
    /// entropy identity is only claimed for stationary ones.
    pub fn stationarity_warning(&self) -> bool {
        self.check("stationarity Pp = p").is_some_and(|c| !c.passed)
    }
}

/// `|s_{n_1}⟩ ⊗ ⋯ ⊗ |s_{n_k}⟩`.
pub fn product_state(symbols: &SymbolSet, string: &[usize]) -> ComplexVector {
    string[1..]
        .iter()
        .fold(symbols.state(string[0]).clone(), |acc, &s| {
            acc.tensor(symbols.state(s))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::builtin;

    #[test]
    fn trine_joint_pmf_forbids_repeats() {
        let trine = builtin::trine();
        assert_eq!(trine.joint_pmf(&[0, 0]).unwrap(), 0.0);
        assert!((trine.joint_pmf(&[0, 1]).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(trine.joint_pmf(&[]).is_err());
        assert!(trine.joint_pmf(&[3]).is_err());
    }

    #[test]
    fn trine_single_symbol_state_is_maximally_mixed() {
        let rho = builtin::trine().ensemble_state(1, &Caps::DEFAULT).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn bell_states_are_maximally_mixed() {
        let bell = builtin::bell();
        for k in [2, 5] {
            let rho = bell.ensemble_state(k, &Caps::DEFAULT).unwrap();
            let dim = 1usize << k;
            let expected = ComplexMatrix::from_real_diag(&vec![1.0 / dim as f64; dim]);
            assert!(rho.max_abs_diff(&expected) < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn caps_are_enforced() {
        let caps = Caps {
            max_dim: 8,
            max_enum: 100,
        };
        let trine = builtin::trine();
        assert!(matches!(
            trine.ensemble_state(4, &caps),
            Err(Error::ResourceCap { .. })
        ));
        assert!(matches!(
            trine.ensemble_state_bruteforce(
                5,
                &Caps {
                    max_dim: 64,
                    max_enum: 100,
                }
            ),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn validation_reports_residuals() {
        let report = builtin::trine().validate(&Tolerances::DEFAULT);
        assert!(report.all_passed(), "{report:?}");
        assert!(report.check("stationarity Pp = p").unwrap().residual < 1e-12);

        let model = EnsembleModel::new(
            builtin::iid_demo().symbols().clone(),
            StochasticLaw::Markov {
                transition: vec![vec![0.5, 0.5], vec![0.4, 0.5]],
                initial: vec![0.5, 0.5],
            },
        )
        .unwrap();
        let report = model.validate(&Tolerances::DEFAULT);
        let column = report.check("column stochasticity").unwrap();
        assert!(!column.passed);
        assert!((column.residual - 0.1).abs() < 1e-12);
    }

    #[test]
    fn non_stationary_start_is_flagged() {
        let model = EnsembleModel::new(
            builtin::iid_demo().symbols().clone(),
            StochasticLaw::Markov {
                transition: vec![vec![0.9, 0.5], vec![0.1, 0.5]],
                initial: vec![0.5, 0.5],
            },
        )
        .unwrap();
        assert!(model.validate(&Tolerances::DEFAULT).stationarity_warning());
    }
}
