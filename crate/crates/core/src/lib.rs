//! Optimal lossless compression of quantum stochastic ensembles.
//!
//! The crate computes ensemble density operators for strings of pure
//! quantum symbol states emitted by i.i.d., stationary Markov, or general
//! stochastic sources; builds Huffman-optimal classical-quantum codes for
//! them; and evaluates the same densities a second way, as the joint
//! correlations of a quantum Markov chain over an associated quantum
//! dynamical system. The per-symbol entropy of those joint correlations is
//! the dynamical entropy, which sandwiches the optimal average codeword
//! length per symbol.
//!
//! Modules:
//! - [`numkit`]: dense complex matrices, Hermitian eigensolver, entropies.
//! - [`ensembles`]: symbol sets, stochastic laws, ensemble states.
//! - [`codes`]: Kraft sums, unique decodability, Huffman, quantum codes.
//! - [`qmc`]: dynamical systems, liftings, joint correlations, entropy reports.

pub mod codes;
pub mod ensembles;
mod error;
pub mod numkit;
pub mod qmc;
pub mod random;

pub use error::{Error, Result};
