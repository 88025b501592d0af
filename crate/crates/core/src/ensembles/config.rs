//! JSON model files.
//!
//! ```json
//! {
//!   "d": 2,
//!   "N": 3,
//!   "symbols": [[[1, 0], [0, 0]], [[-0.5, 0], [0.866, 0]], [[-0.5, 0], [-0.866, 0]]],
//!   "law": {"type": "markov", "P": [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]], "p": [0.3333, 0.3333, 0.3334]}
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs. `P[i][j]` is the probability of
//! symbol `i` following symbol `j`. A general law is a probability tree:
//! `{"type": "general", "depth": D, "tree": {"p": [...], "children": [...]}}`
//! where `children[k]` conditions on symbol `k` having been emitted, nodes
//! are given for every history up to length `D`, and longer histories use
//! their last `D` symbols. Symbols are indexed from 0. Unknown fields are
//! rejected.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EnsembleModel, ProbabilityTree, StochasticLaw, SymbolSet, TreeNode};
use crate::numkit::ComplexVector;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub symbols: Vec<Vec<[f64; 2]>>,
    pub law: LawConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawConfig {
    Iid {
        p: Vec<f64>,
    },
    Markov {
        #[serde(rename = "P")]
        transition: Vec<Vec<f64>>,
        p: Vec<f64>,
    },
    General {
        depth: usize,
        tree: TreeConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeConfig {
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeConfig>,
}

impl From<&TreeConfig> for TreeNode {
    fn from(t: &TreeConfig) -> Self {
        TreeNode {
            p: t.p.clone(),
            children: t.children.iter().map(TreeNode::from).collect(),
        }
    }
}

impl From<&TreeNode> for TreeConfig {
    fn from(t: &TreeNode) -> Self {
        TreeConfig {
            p: t.p.clone(),
            children: t.children.iter().map(TreeConfig::from).collect(),
        }
    }
}

impl ModelConfig {
    /// Parses a model, reporting the offending field path and position on
    /// failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = inner.to_string();
            let message = message
                .rsplit_once(" at line ")
                .map_or(message.as_str(), |(m, _)| m);
            Error::Config(format!(
                "line {}, column {}, field `{path}`: {message}",
                inner.line(),
                inner.column()
            ))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model config serializes")
    }

    pub fn to_model(&self) -> Result<EnsembleModel> {
        if self.symbols.len() != self.n {
            return Err(Error::Config(format!(
                "field `symbols`: {} states listed but N = {}",
                self.symbols.len(),
                self.n
            )));
        }
        let states = self
            .symbols
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                if s.len() != self.d {
                    return Err(Error::Config(format!(
                        "field `symbols[{idx}]`: {} components but d = {}",
                        s.len(),
                        self.d
                    )));
                }
                Ok(ComplexVector::new(
                    s.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let law = match &self.law {
            LawConfig::Iid { p } => StochasticLaw::Iid { p: p.clone() },
            LawConfig::Markov { transition, p } => StochasticLaw::Markov {
                transition: transition.clone(),
                initial: p.clone(),
            },
            LawConfig::General { depth, tree } => StochasticLaw::general(
                ProbabilityTree::new(self.n, *depth, TreeNode::from(tree))
                    .map_err(|e| Error::Config(format!("field `law.tree`: {e}")))?,
            ),
        };
        let symbols = SymbolSet::new(states).map_err(|e| Error::Config(e.to_string()))?;
        EnsembleModel::new(symbols, law).map_err(|e| Error::Config(e.to_string()))
    }

    /// Config describing `model`. General laws are only expressible when
    /// they are probability trees.
    pub fn from_model(model: &EnsembleModel) -> Result<Self> {
        let symbols = model
            .symbols()
            .states()
            .iter()
            .map(|s| s.entries().iter().map(|z| [z.re, z.im]).collect())
            .collect();
        let law = match model.law() {
            StochasticLaw::Iid { p } => LawConfig::Iid { p: p.clone() },
            StochasticLaw::Markov {
                transition,
                initial,
            } => LawConfig::Markov {
                transition: transition.clone(),
                p: initial.clone(),
            },
            StochasticLaw::General(law) => {
                let tree = law.as_tree().ok_or_else(|| {
                    Error::Config(
                        "only probability-tree laws can be written to a model file".into(),
                    )
                })?;
                LawConfig::General {
                    depth: tree.depth(),
                    tree: TreeConfig::from(tree.root()),
                }
            }
        };
        Ok(Self {
            d: model.dim(),
            n: model.num_symbols(),
            symbols,
            law,
        })
    }
}

/// Reads and converts a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<EnsembleModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    ModelConfig::from_json(&text)?.to_model()
}
