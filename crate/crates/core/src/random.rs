//! Seeded random instances for property checks and demos.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::ensembles::{
    stationary_distribution, EnsembleModel, ProbabilityTree, StochasticLaw, SymbolSet, TreeNode,
};
use crate::numkit::{ComplexMatrix, ComplexVector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(
        StandardNormal.sample(&mut *rng),
        StandardNormal.sample(&mut *rng),
    )
}

/// Haar-random pure state in `C^d`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexVector {
    let raw: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ComplexVector::new(raw.into_iter().map(|z| z / norm).collect())
}

/// `n ≥ d` random states; they span `C^d` with probability one.
pub fn random_symbol_set<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> SymbolSet {
    assert!(n >= d, "{n} states cannot span C^{d}");
    SymbolSet::new((0..n).map(|_| random_state(rng, d)).collect()).expect("consistent dims")
}

/// A random orthonormal basis of `C^d`, as symbol states.
pub fn random_orthonormal_symbols<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SymbolSet {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<Complex64> = random_state(rng, d).entries().to_vec();
        for b in &basis {
            let overlap = b.inner(&ComplexVector::new(v.clone()));
            for (x, y) in v.iter_mut().zip(b.entries()) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(ComplexVector::new(
                v.into_iter().map(|z| z / norm).collect(),
            ));
        }
    }
    SymbolSet::new(basis).expect("consistent dims")
}

/// Random pmf with all entries positive.
pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| {
            let x: f64 = Exp1.sample(&mut *rng);
            x + 1e-3
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Random column-stochastic `n×n` matrix with positive entries.
pub fn random_column_stochastic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let columns: Vec<Vec<f64>> = (0..n).map(|_| random_pmf(rng, n)).collect();
    (0..n)
        .map(|i| (0..n).map(|j| columns[j][i]).collect())
        .collect()
}

/// Random Markov law started in its stationary distribution.
pub fn random_stationary_markov<R: Rng + ?Sized>(rng: &mut R, n: usize) -> StochasticLaw {
    let transition = random_column_stochastic(rng, n);
    let initial = stationary_distribution(&transition).expect("positive chains are irreducible");
    StochasticLaw::Markov {
        transition,
        initial,
    }
}

/// Random probability tree with explicit conditionals to `depth`.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize, depth: usize) -> ProbabilityTree {
    fn node<R: Rng + ?Sized>(rng: &mut R, n: usize, remaining: usize) -> TreeNode {
        TreeNode {
            p: random_pmf(rng, n),
            children: if remaining == 0 {
                vec![]
            } else {
                (0..n).map(|_| node(rng, n, remaining - 1)).collect()
            },
        }
    }
    ProbabilityTree::new(n, depth, node(rng, n, depth)).expect("random tree is well formed")
}

/// Which law a random model should carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    Iid,
    Markov,
    /// Probability tree of the given depth.
    General(usize),
}

pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d: usize,
    kind: LawKind,
) -> EnsembleModel {
    let symbols = random_symbol_set(rng, n, d);
    let law = match kind {
        LawKind::Iid => StochasticLaw::Iid {
            p: random_pmf(rng, n),
        },
        LawKind::Markov => random_stationary_markov(rng, n),
        LawKind::General(depth) => StochasticLaw::general(random_tree(rng, n, depth)),
    };
    EnsembleModel::new(symbols, law).expect("consistent model")
}

/// Random density of the given rank, `G G* / tr(G G*)` for a Gaussian
/// `d×rank` matrix `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, rank, |_, _| gaussian(rng));
    let rho = g.matmul(&g.adjoint()).expect("shapes agree");
    let tr = rho.trace().re;
    let mut out = rho.scaled(Complex64::new(1.0 / tr, 0.0));
    // exact hermiticity
    for i in 0..d {
        out[(i, i)].im = 0.0;
        for j in 0..i {
            out[(j, i)] = out[(i, j)].conj();
        }
    }
    out
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        a[(i, i)] = Complex64::new(StandardNormal.sample(&mut *rng), 0.0);
        for j in 0..i {
            let z = gaussian(rng);
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    a
}
