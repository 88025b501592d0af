//! Stochastic ensembles of pure symbol states and their density operators.

pub mod builtin;
mod config;
mod law;
mod model;
mod symbols;

pub use config::{load_model, LawConfig, ModelConfig, TreeConfig};
pub use law::{
    stationary_distribution, ConditionalLaw, FnLaw, ProbabilityTree, StochasticLaw, TreeNode,
};
pub use model::{product_state, Check, EnsembleModel, ValidationReport};
pub use symbols::SymbolSet;
