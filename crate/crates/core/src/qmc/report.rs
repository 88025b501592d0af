use serde::Serialize;

use super::{FockDynSystem, MarkovDynSystem, OperationalPartition};
use crate::codes::optimal_length_of_spectrum;
use crate::ensembles::EnsembleModel;
use crate::numkit::{density_spectrum, entropy_of_spectrum, Caps, ComplexMatrix, Tolerances};
use crate::{Error, Result};

/// Joint correlations `ρ_1 … ρ_K`.
#[derive(Debug, Clone)]
pub struct JointCorrelations {
    pub states: Vec<ComplexMatrix>,
    /// Dimension of one tensor factor.
    pub factor_dim: usize,
}

impl JointCorrelations {
    /// Largest `‖tr_last ρ_{k+1} − ρ_k‖_max`.
    pub fn marginal_residual(&self) -> f64 {
        self.states
            .windows(2)
            .map(|w| {
                w[1].partial_trace_last(self.factor_dim)
                    .map(|m| m.max_abs_diff(&w[0]))
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}

/// `ρ_1 … ρ_kmax` of the dynamical system attached to `model`: the Markov
/// system for i.i.d. and Markov laws, the Fock-space system otherwise.
pub fn joint_correlations(
    model: &EnsembleModel,
    kmax: usize,
    caps: &Caps,
    tol: &Tolerances,
) -> Result<JointCorrelations> {
    let mut states = Vec::with_capacity(kmax);
    for_each_correlation(model, kmax, caps, tol, |_, rho| {
        states.push(rho);
        Ok(())
    })?;
    Ok(JointCorrelations {
        states,
        factor_dim: model.dim(),
    })
}

fn for_each_correlation(
    model: &EnsembleModel,
    kmax: usize,
    caps: &Caps,
    tol: &Tolerances,
    mut f: impl FnMut(usize, ComplexMatrix) -> Result<()>,
) -> Result<()> {
    if kmax == 0 {
        return Err(Error::contract("need at least one joint correlation"));
    }
    if model.law().is_markov() {
        let system = MarkovDynSystem::from_model(model, tol)?;
        let gamma = OperationalPartition::from_symbols(model.symbols());
        for (k, rho) in system.joint_correlations(&gamma, kmax, caps)?.enumerate() {
            f(k + 1, rho?)?;
        }
    } else {
        let system = FockDynSystem::from_model(model, kmax);
        for (k, rho) in system
            .joint_correlations(model.symbols(), kmax, caps)?
            .into_iter()
            .enumerate()
        {
            f(k + 1, rho)?;
        }
    }
    Ok(())
}

/// One line of an [`EntropyReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyRow {
    pub k: usize,
    #[serde(rename = "S")]
    pub entropy: f64,
    #[serde(rename = "S_per_k")]
    pub entropy_per_symbol: f64,
    /// `EL*(ρ_k) / k`, when requested.
    #[serde(rename = "EL_star_k")]
    pub optimal_length_per_symbol: Option<f64>,
    /// Number of nonzero eigenvalues of `ρ_k`.
    pub rank: usize,
}

impl EntropyRow {
    /// `S/k ≤ EL*_k < S/k + 1/k`. A rank-one `ρ_k` still needs a one-bit
    /// codeword, so there the upper bound is met with equality.
    pub fn sandwich_holds(&self, tol: &Tolerances) -> Option<bool> {
        let el = self.optimal_length_per_symbol?;
        let upper = self.entropy_per_symbol + 1.0 / self.k as f64;
        let lower_ok = self.entropy_per_symbol <= el + tol.ent;
        let upper_ok = if self.rank == 1 {
            el <= upper + tol.ent
        } else {
            el < upper
        };
        Some(lower_ok && upper_ok)
    }
}

/// The finite sequence `S(ρ_k)/k` and what can honestly be said about its
/// limsup: the maximum over the last `tail_window` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub rows: Vec<EntropyRow>,
    pub tail_window: usize,
    pub tail_max: f64,
    pub strictly_decreasing: bool,
    /// `None` when no optimal lengths were computed.
    pub sandwich_holds: Option<bool>,
    /// `‖Pp − p‖_∞` for Markov laws.
    pub stationarity_residual: Option<f64>,
}

impl EntropyReport {
    pub fn from_rows(rows: Vec<EntropyRow>, tail_window: usize, tol: &Tolerances) -> Self {
        let window = tail_window.clamp(1, rows.len().max(1));
        let tail_max = rows[rows.len().saturating_sub(window)..]
            .iter()
            .map(|r| r.entropy_per_symbol)
            .fold(f64::NEG_INFINITY, f64::max);
        let strictly_decreasing = rows
            .windows(2)
            .all(|w| w[1].entropy_per_symbol < w[0].entropy_per_symbol);
        let sandwich_holds = rows
            .iter()
            .map(|r| r.sandwich_holds(tol))
            .collect::<Option<Vec<bool>>>()
            .map(|v| v.into_iter().all(|b| b));
        Self {
            rows,
            tail_window: window,
            tail_max,
            strictly_decreasing,
            sandwich_holds,
            stationarity_residual: None,
        }
    }

    /// `k,S,S_per_k,EL_star_k`, full precision, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,S,S_per_k,EL_star_k\n");
        for r in &self.rows {
            let el = r
                .optimal_length_per_symbol
                .map(|v| v.to_string())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.k, r.entropy, r.entropy_per_symbol, el
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Settings for [`dynamical_entropy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOptions {
    pub caps: Caps,
    pub tol: Tolerances,
    pub tail_window: usize,
    pub optimal_lengths: bool,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            caps: Caps::DEFAULT,
            tol: Tolerances::DEFAULT,
            tail_window: 3,
            optimal_lengths: true,
        }
    }
}

/// Default number of joint correlations: 12 for qubit Markov sources, 8
/// otherwise.
pub fn default_kmax(model: &EnsembleModel) -> usize {
    if model.law().is_markov() && model.dim() == 2 {
        12
    } else {
        8
    }
}

/// `S(ρ_k)`, `S(ρ_k)/k` and optionally `EL*(ρ_k)/k` for `k = 1..=kmax`.
pub fn dynamical_entropy(
    model: &EnsembleModel,
    kmax: usize,
    opts: &EntropyOptions,
) -> Result<EntropyReport> {
    dynamical_entropy_with(model, kmax, opts, |_| {})
}

/// As [`dynamical_entropy`], calling `on_row` as each row is finished.
pub fn dynamical_entropy_with(
    model: &EnsembleModel,
    kmax: usize,
    opts: &EntropyOptions,
    mut on_row: impl FnMut(&EntropyRow),
) -> Result<EntropyReport> {
    let tol = &opts.tol;
    let mut rows = Vec::with_capacity(kmax);
    for_each_correlation(model, kmax, &opts.caps, tol, |k, rho| {
        let spectrum = density_spectrum(&rho, tol)?;
        drop(rho);
        let entropy = entropy_of_spectrum(&spectrum, tol);
        let optimal_length_per_symbol = if opts.optimal_lengths {
            Some(optimal_length_of_spectrum(&spectrum, tol)? / k as f64)
        } else {
            None
        };
        let row = EntropyRow {
            k,
            entropy,
            entropy_per_symbol: entropy / k as f64,
            optimal_length_per_symbol,
            rank: spectrum.iter().filter(|&&l| l >= tol.zero).count(),
        };
        on_row(&row);
        rows.push(row);
        Ok(())
    })?;
    let mut report = EntropyReport::from_rows(rows, opts.tail_window, tol);
    if model.law().is_markov() {
        report.stationarity_residual =
            Some(MarkovDynSystem::from_model(model, tol)?.stationarity_residual());
    }
    Ok(report)
}
