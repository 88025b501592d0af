//! Binary lossless codes, classical and quantum.
//!
//! Classical codes come with the Kraft–McMillan inequality in both
//! directions, the Sardinas–Patterson decodability test and Huffman
//! coding. Quantum codes are c-q schemes: classical codewords transcribed
//! onto an orthonormal basis, which gives every codeword a definite length.

mod classical;
mod quantum;

pub use classical::{
    huffman, huffman_with, is_uniquely_decodable, kraft_converse, kraft_sum, ClassicalCode,
};
pub use quantum::{
    cq_scheme, length_observable, optimal_code, optimal_length, optimal_length_of_spectrum,
    per_symbol_optimal_length, OptimalCode, QuantumCode,
};
