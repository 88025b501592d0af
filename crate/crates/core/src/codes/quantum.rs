use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{huffman_with, ClassicalCode};
use crate::ensembles::EnsembleModel;
use crate::numkit::{
    density_spectrum, hermitian_eig, Caps, ComplexMatrix, ComplexVector, Tolerances,
};
use crate::{Error, Result};

/// Indeterminate-length quantum code with length eigenstates,
/// `U = Σ_i |ψ_i⟩⟨e_i|`, where each `|ψ_i⟩` is the computational basis state
/// of a bitstring and so lives in the sector of its length.
///
/// The `|e_i⟩` are orthonormal but need not span the domain: a code built
/// for a rank-deficient density only covers its support.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCode {
    dim: usize,
    basis: Vec<ComplexVector>,
    words: Vec<String>,
}

impl QuantumCode {
    pub fn new(
        dim: usize,
        basis: Vec<ComplexVector>,
        words: Vec<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if basis.len() != words.len() {
            return Err(Error::dims(format!(
                "{} basis vectors for {} codewords",
                basis.len(),
                words.len()
            )));
        }
        if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
            return Err(Error::dims(format!(
                "basis vector of dimension {} in C^{dim}",
                v.dim()
            )));
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().take(i + 1) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (a.inner(b) - target).norm() > tol.norm {
                    return Err(Error::contract("code basis is not orthonormal"));
                }
            }
        }
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() || w.chars().any(|c| c != '0' && c != '1') {
                return Err(Error::contract(format!(
                    "codeword {i} ({w:?}) is not a nonempty bitstring"
                )));
            }
            if words[..i].contains(w) {
                return Err(Error::contract(format!(
                    "codeword {w:?} is used twice, so U is not an isometry"
                )));
            }
        }
        Ok(Self { dim, basis, words })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Length eigenvalues `ℓ_i`.
    pub fn lengths(&self) -> Vec<usize> {
        self.words.iter().map(String::len).collect()
    }

    pub fn max_length(&self) -> usize {
        self.lengths().into_iter().max().unwrap_or(0)
    }

    /// `d_ℓ`, the number of length eigenstates of each length.
    pub fn length_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for l in self.lengths() {
            *counts.entry(l).or_insert(0) += 1;
        }
        counts
    }

    /// `|ψ_i⟩` as a vector of `H_A^{⊗ℓ_i}`.
    pub fn codeword_state(&self, i: usize) -> ComplexVector {
        let w = &self.words[i];
        ComplexVector::basis(
            1 << w.len(),
            usize::from_str_radix(w, 2).expect("bitstring"),
        )
    }

    /// `tr(U† 2^{−Λ} U) = Σ_ℓ 2^{−ℓ} d_ℓ`.
    pub fn kraft_sum(&self) -> f64 {
        super::kraft_sum(&self.lengths())
    }

    /// `U` as a dense matrix from `C^d` into `⊕_{ℓ=1}^{ℓ_max} H_A^{⊗ℓ}`,
    /// whose sector `ℓ` starts at row `2^ℓ − 2`.
    pub fn isometry(&self, caps: &Caps) -> Result<ComplexMatrix> {
        let fock = fock_dim(self.max_length(), caps)?;
        let mut u = ComplexMatrix::zeros(fock, self.dim);
        for (e, w) in self.basis.iter().zip(&self.words) {
            let row = (1usize << w.len()) - 2 + usize::from_str_radix(w, 2).expect("bitstring");
            for (col, z) in e.entries().iter().enumerate() {
                u[(row, col)] += z.conj();
            }
        }
        Ok(u)
    }

    /// `tr(U† 2^{−Λ} U)` from the dense matrices.
    pub fn kraft_trace_dense(&self, caps: &Caps) -> Result<f64> {
        let u = self.isometry(caps)?;
        let weights = length_observable(self.max_length(), caps)?
            .diagonal()
            .iter()
            .map(|l| Complex64::new(2f64.powf(-l.re), 0.0))
            .collect::<Vec<_>>();
        let weighted = ComplexMatrix::from_fn(u.rows(), u.cols(), |r, c| weights[r] * u[(r, c)]);
        Ok(u.adjoint().matmul(&weighted)?.trace().re)
    }

    /// `ℓ(|s⟩) = ⟨s|U†ΛU|s⟩ = Σ_i |⟨e_i|s⟩|² ℓ_i`.
    pub fn codeword_length(&self, s: &ComplexVector, tol: &Tolerances) -> Result<f64> {
        if s.dim() != self.dim {
            return Err(Error::dims(format!(
                "state in C^{} for a code on C^{}",
                s.dim(),
                self.dim
            )));
        }
        if !s.is_normalized(tol) {
            return Err(Error::contract("state is not normalized"));
        }
        Ok(self
            .basis
            .iter()
            .zip(self.lengths())
            .map(|(e, l)| e.inner(s).norm_sqr() * l as f64)
            .sum())
    }

    /// `EL(U) = tr(ρ U†ΛU) = Σ_i ⟨e_i|ρ|e_i⟩ ℓ_i`.
    pub fn average_length(&self, rho: &ComplexMatrix) -> Result<f64> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::dims(format!(
                "{}x{} density for a code on C^{}",
                rho.rows(),
                rho.cols(),
                self.dim
            )));
        }
        let mut total = 0.0;
        for (e, l) in self.basis.iter().zip(self.lengths()) {
            let mut expectation = Complex64::new(0.0, 0.0);
            for r in 0..self.dim {
                let row: Complex64 = (0..self.dim).map(|c| rho[(r, c)] * e[c]).sum();
                expectation += e[r].conj() * row;
            }
            total += expectation.re * l as f64;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(QuantumCodeFile {
            dim: self.dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.entries().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            sectors: self
                .words
                .iter()
                .map(|w| Sector {
                    bits: w.clone(),
                    length: w.len(),
                })
                .collect(),
        })
        .expect("quantum code serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: QuantumCodeFile = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("quantum code file: {e}")))?;
        for s in &file.sectors {
            if s.bits.len() != s.length {
                return Err(Error::Config(format!(
                    "sector {:?} declares length {}",
                    s.bits, s.length
                )));
            }
        }
        let basis = file
            .basis
            .iter()
            .map(|v| ComplexVector::new(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()))
            .collect();
        let words = file.sectors.into_iter().map(|s| s.bits).collect();
        Self::new(file.dim, basis, words, &Tolerances::DEFAULT)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantumCodeFile {
    dim: usize,
    basis: Vec<Vec<[f64; 2]>>,
    sectors: Vec<Sector>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sector {
    bits: String,
    length: usize,
}

fn fock_dim(max_length: usize, caps: &Caps) -> Result<usize> {
    let needed = (1u128 << (max_length + 1).min(127)) - 2;
    if needed > caps.max_dim as u128 {
        return Err(Error::ResourceCap {
            what: "codeword Fock space dimension",
            needed,
            cap: caps.max_dim as u128,
        });
    }
    Ok(needed as usize)
}

/// `Λ = Σ_ℓ ℓ Π_ℓ` on `⊕_{ℓ=1}^{ℓ_max} H_A^{⊗ℓ}`, dense.
pub fn length_observable(max_length: usize, caps: &Caps) -> Result<ComplexMatrix> {
    let dim = fock_dim(max_length, caps)?;
    let diag: Vec<f64> = (1..=max_length)
        .flat_map(|l| std::iter::repeat_n(l as f64, 1 << l))
        .collect();
    debug_assert_eq!(diag.len(), dim);
    Ok(ComplexMatrix::from_real_diag(&diag))
}

/// The c-q scheme `U = Σ_i |C(x_i)⟩⟨e_i|`: symbol `i` of `code` is
/// transcribed onto basis vector `basis[i]`.
pub fn cq_scheme(
    code: &ClassicalCode,
    basis: &[ComplexVector],
    tol: &Tolerances,
) -> Result<QuantumCode> {
    if !code.is_uniquely_decodable() {
        return Err(Error::contract(
            "c-q schemes need a uniquely decodable code",
        ));
    }
    let dim = basis.first().map_or(0, ComplexVector::dim);
    let mut vectors = Vec::with_capacity(code.len());
    let mut words = Vec::with_capacity(code.len());
    for (&i, w) in code.codewords() {
        let e = basis.get(i).ok_or_else(|| {
            Error::dims(format!(
                "symbol {i} has no basis vector among {}",
                basis.len()
            ))
        })?;
        vectors.push(e.clone());
        words.push(w.clone());
    }
    QuantumCode::new(dim, vectors, words, tol)
}

/// Optimal length-eigenstate code for a density and its `EL*`.
#[derive(Debug, Clone)]
pub struct OptimalCode {
    pub code: QuantumCode,
    pub eigenvalues: Vec<f64>,
    pub expected_length: f64,
}

/// Huffman code on the spectrum of `rho`, transcribed into its eigenbasis.
/// Eigenvalues below `tol.zero` receive no codeword.
pub fn optimal_code(rho: &ComplexMatrix, tol: &Tolerances) -> Result<OptimalCode> {
    density_spectrum(rho, tol)?;
    let eig = hermitian_eig(rho)?;
    let spectrum: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let classical = huffman_with(&spectrum, tol)?;
    let basis: Vec<ComplexVector> = (0..spectrum.len())
        .map(|j| eig.eigenvectors.column(j))
        .collect();
    let code = cq_scheme(&classical, &basis, tol)?;
    let expected_length = classical.expected_length(&masked(&spectrum, &classical))?;
    Ok(OptimalCode {
        code,
        eigenvalues: spectrum,
        expected_length,
    })
}

fn masked(spectrum: &[f64], code: &ClassicalCode) -> Vec<f64> {
    spectrum
        .iter()
        .enumerate()
        .map(|(i, &l)| if code.codeword(i).is_some() { l } else { 0.0 })
        .collect()
}

/// `EL*` from a spectrum alone.
pub fn optimal_length_of_spectrum(spectrum: &[f64], tol: &Tolerances) -> Result<f64> {
    let spectrum: Vec<f64> = spectrum.iter().map(|&l| l.max(0.0)).collect();
    let code = huffman_with(&spectrum, tol)?;
    code.expected_length(&masked(&spectrum, &code))
}

/// `EL*(ρ)`, skipping the eigenvectors.
pub fn optimal_length(rho: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    optimal_length_of_spectrum(&density_spectrum(rho, tol)?, tol)
}

/// `EL*_k = EL*(ρ_{S^k}) / k`.
pub fn per_symbol_optimal_length(
    model: &EnsembleModel,
    k: usize,
    caps: &Caps,
    tol: &Tolerances,
) -> Result<f64> {
    let rho = model.ensemble_state(k, caps)?;
    Ok(optimal_length(&rho, tol)? / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::kraft_converse;
    use crate::ensembles::{builtin, EnsembleModel, StochasticLaw, SymbolSet};

    fn standard(d: usize) -> Vec<ComplexVector> {
        (0..d).map(|i| ComplexVector::basis(d, i)).collect()
    }

    fn code_122() -> QuantumCode {
        let classical = ClassicalCode::from_words(&["0", "10", "11"]).unwrap();
        cq_scheme(&classical, &standard(3), &Tolerances::DEFAULT).unwrap()
    }

    #[test]
    fn cq_scheme_transcribes_codewords() {
        let code = code_122();
        assert_eq!(code.lengths(), vec![1, 2, 2]);
        assert_eq!(code.codeword_state(1), ComplexVector::basis(4, 2));
        assert_eq!(code.kraft_sum(), 1.0);
        assert!((code.kraft_trace_dense(&Caps::DEFAULT).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cq_scheme_accepts_non_prefix_ud_code() {
        let classical = ClassicalCode::from_words(&["0", "01"]).unwrap();
        let code = cq_scheme(&classical, &standard(2), &Tolerances::DEFAULT).unwrap();
        assert_eq!(code.lengths(), vec![1, 2]);
        let bad = ClassicalCode::from_words(&["0", "01", "10"]).unwrap();
        assert!(cq_scheme(&bad, &standard(3), &Tolerances::DEFAULT).is_err());
    }

    #[test]
    fn quantum_kraft_of_lengths() {
        let code = cq_scheme(
            &kraft_converse(&[3, 3]).unwrap(),
            &standard(2),
            &Tolerances::DEFAULT,
        )
        .unwrap();
        assert_eq!(code.kraft_sum(), 0.25);
        assert_eq!(code.length_counts(), BTreeMap::from([(3, 2)]));
    }

    #[test]
    fn codeword_lengths() {
        let code = code_122();
        let tol = Tolerances::DEFAULT;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            code.codeword_length(&ComplexVector::basis(3, 0), &tol)
                .unwrap(),
            1.0
        );
        let plus = ComplexVector::from_real(&[h, h, 0.0]);
        assert!((code.codeword_length(&plus, &tol).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(
            code.codeword_length(&ComplexVector::basis(3, 2), &tol)
                .unwrap(),
            2.0
        );
        assert!(code
            .codeword_length(&ComplexVector::from_real(&[1.0, 1.0, 0.0]), &tol)
            .is_err());
    }

    #[test]
    fn average_lengths() {
        let code = code_122();
        let rho = ComplexMatrix::from_real_diag(&[0.5, 0.25, 0.25]);
        assert_eq!(code.average_length(&rho).unwrap(), 1.5);
        let two = cq_scheme(
            &ClassicalCode::from_words(&["0", "10"]).unwrap(),
            &standard(2),
            &Tolerances::DEFAULT,
        )
        .unwrap();
        assert_eq!(
            two.average_length(&ComplexMatrix::from_real_diag(&[1.0, 0.0]))
                .unwrap(),
            1.0
        );
        assert_eq!(
            two.average_length(&ComplexMatrix::from_real_diag(&[0.5, 0.5]))
                .unwrap(),
            1.5
        );
        assert!(two.average_length(&rho).is_err());
    }

    #[test]
    fn optimal_code_examples() {
        let tol = Tolerances::DEFAULT;
        let dyadic =
            optimal_code(&ComplexMatrix::from_real_diag(&[0.5, 0.25, 0.25]), &tol).unwrap();
        assert!((dyadic.expected_length - 1.5).abs() < 1e-12);
        let mixed = optimal_code(&ComplexMatrix::from_real_diag(&[0.5, 0.5]), &tol).unwrap();
        assert!((mixed.expected_length - 1.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let pure = ComplexVector::from_real(&[h, h]).projector();
        let opt = optimal_code(&pure, &tol).unwrap();
        assert!((opt.expected_length - 1.0).abs() < 1e-12);
        assert_eq!(opt.code.lengths(), vec![1]);
        assert!((opt.code.average_length(&pure).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn per_symbol_lengths() {
        let tol = Tolerances::DEFAULT;
        for k in 1..=4 {
            let el = per_symbol_optimal_length(&builtin::bell(), k, &Caps::DEFAULT, &tol).unwrap();
            assert!((el - 1.0).abs() < 1e-12);
        }
        let model = EnsembleModel::new(
            SymbolSet::new(standard(3)).unwrap(),
            StochasticLaw::Iid {
                p: vec![0.5, 0.25, 0.25],
            },
        )
        .unwrap();
        let el = per_symbol_optimal_length(&model, 1, &Caps::DEFAULT, &tol).unwrap();
        assert!((el - 1.5).abs() < 1e-12);
        let trine = per_symbol_optimal_length(&builtin::trine(), 2, &Caps::DEFAULT, &tol).unwrap();
        assert!((0.9528..0.9528 + 0.5).contains(&trine));
    }

    #[test]
    fn json_round_trip() {
        let code = code_122();
        let back = QuantumCode::from_json(&code.to_json().to_string()).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn length_observable_is_capped() {
        let caps = Caps {
            max_dim: 100,
            max_enum: 10,
        };
        assert_eq!(length_observable(2, &caps).unwrap().rows(), 6);
        assert!(matches!(
            length_observable(7, &caps),
            Err(Error::ResourceCap { .. })
        ));
    }
}
