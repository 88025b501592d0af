//! Built-in example sources.

use super::{EnsembleModel, StochasticLaw, SymbolSet};
use crate::numkit::ComplexVector;

/// Three trine states on a qubit driven by a Markov chain that never
/// repeats a symbol: `|s_1⟩ = e_1`, `|s_{2,3}⟩ = −½ e_1 ± (√3/2) e_2`, each
/// successor chosen uniformly among the other two, uniform start.
pub fn trine() -> EnsembleModel {
    let r = 3f64.sqrt() / 2.0;
    let symbols = SymbolSet::new(vec![
        ComplexVector::from_real(&[1.0, 0.0]),
        ComplexVector::from_real(&[-0.5, r]),
        ComplexVector::from_real(&[-0.5, -r]),
    ])
    .expect("trine states are well formed");
    let law = StochasticLaw::Markov {
        transition: vec![
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ],
        initial: vec![1.0 / 3.0; 3],
    };
    EnsembleModel::new(symbols, law).expect("trine model is consistent")
}

/// Computational and Hadamard basis states `e_1, e_2, |+⟩, |−⟩`; the chain
/// never leaves the basis it starts in, and each step picks either state of
/// that basis with probability ½. Every joint correlation is maximally
/// mixed.
pub fn bell() -> EnsembleModel {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let symbols = SymbolSet::new(vec![
        ComplexVector::from_real(&[1.0, 0.0]),
        ComplexVector::from_real(&[0.0, 1.0]),
        ComplexVector::from_real(&[h, h]),
        ComplexVector::from_real(&[h, -h]),
    ])
    .expect("bell states are well formed");
    let law = StochasticLaw::Markov {
        transition: vec![
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
            vec![0.0, 0.0, 0.5, 0.5],
        ],
        initial: vec![0.25; 4],
    };
    EnsembleModel::new(symbols, law).expect("bell model is consistent")
}

/// Independent uniform draws of the non-orthogonal pair `e_1`, `|+⟩`.
pub fn iid_demo() -> EnsembleModel {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let symbols = SymbolSet::new(vec![
        ComplexVector::from_real(&[1.0, 0.0]),
        ComplexVector::from_real(&[h, h]),
    ])
    .expect("demo states are well formed");
    EnsembleModel::new(symbols, StochasticLaw::Iid { p: vec![0.5, 0.5] })
        .expect("demo model is consistent")
}

/// Looks up a built-in model by name.
pub fn by_name(name: &str) -> Option<EnsembleModel> {
    match name {
        "trine" => Some(trine()),
        "bell" => Some(bell()),
        "iid-demo" => Some(iid_demo()),
        _ => None,
    }
}

pub const NAMES: [&str; 3] = ["trine", "bell", "iid-demo"];
