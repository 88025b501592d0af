use std::fmt;
use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::numkit::{check_pmf, Tolerances};
use crate::{Error, Result};

/// Conditional next-symbol distributions `p(· | n_1 … n_k)` of a general
/// stochastic source. The empty history yields the marginal of the first
/// symbol.
///
/// Implementations must return a pmf for every history, including
/// histories of probability zero.
pub trait ConditionalLaw: Send + Sync {
    fn num_symbols(&self) -> usize;

    fn conditional(&self, history: &[usize]) -> Vec<f64>;

    /// The explicit tree behind this law, when there is one.
    fn as_tree(&self) -> Option<&ProbabilityTree> {
        None
    }
}

/// A general law given as a closure.
pub struct FnLaw<F> {
    num_symbols: usize,
    f: F,
}

impl<F> FnLaw<F>
where
    F: Fn(&[usize]) -> Vec<f64> + Send + Sync,
{
    pub fn new(num_symbols: usize, f: F) -> Self {
        Self { num_symbols, f }
    }
}

impl<F> ConditionalLaw for FnLaw<F>
where
    F: Fn(&[usize]) -> Vec<f64> + Send + Sync,
{
    fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    fn conditional(&self, history: &[usize]) -> Vec<f64> {
        (self.f)(history)
    }
}

/// One node of a [`ProbabilityTree`]: the next-symbol pmf after the history
/// spelled by the path from the root, and one child per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub p: Vec<f64>,
    pub children: Vec<TreeNode>,
}

/// Explicit conditional pmfs for every history up to length `depth`.
/// Longer histories are conditioned on their last `depth` symbols, so the
/// source continues as an order-`depth` Markov chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTree {
    num_symbols: usize,
    depth: usize,
    root: TreeNode,
}

impl ProbabilityTree {
    pub fn new(num_symbols: usize, depth: usize, root: TreeNode) -> Result<Self> {
        fn check(
            node: &TreeNode,
            level: usize,
            n: usize,
            depth: usize,
            path: &mut Vec<usize>,
        ) -> Result<()> {
            if node.p.len() != n {
                return Err(Error::Config(format!(
                    "tree node at history {path:?} has {} probabilities, expected {n}",
                    node.p.len()
                )));
            }
            check_pmf(&node.p, &Tolerances::DEFAULT)
                .map_err(|e| Error::Config(format!("tree node at history {path:?}: {e}")))?;
            if level < depth {
                if node.children.len() != n {
                    return Err(Error::Config(format!(
                        "tree node at history {path:?} has {} children, expected {n} (declared depth {depth})",
                        node.children.len()
                    )));
                }
                for (k, child) in node.children.iter().enumerate() {
                    path.push(k);
                    check(child, level + 1, n, depth, path)?;
                    path.pop();
                }
            } else if !node.children.is_empty() {
                return Err(Error::Config(format!(
                    "tree node at history {path:?} lies beyond the declared depth {depth}"
                )));
            }
            Ok(())
        }
        if num_symbols == 0 {
            return Err(Error::Config("a probability tree needs symbols".into()));
        }
        check(&root, 0, num_symbols, depth, &mut Vec::new())?;
        Ok(Self {
            num_symbols,
            depth,
            root,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }
}

impl ConditionalLaw for ProbabilityTree {
    fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    fn conditional(&self, history: &[usize]) -> Vec<f64> {
        let context = &history[history.len().saturating_sub(self.depth)..];
        let node = context
            .iter()
            .fold(&self.root, |node, &k| &node.children[k]);
        node.p.clone()
    }

    fn as_tree(&self) -> Option<&ProbabilityTree> {
        Some(self)
    }
}

/// The stochastic process choosing the symbol indices.
#[derive(Clone)]
pub enum StochasticLaw {
    /// Independent draws from one pmf.
    Iid { p: Vec<f64> },
    /// Markov chain; `transition[i][j]` is the probability of emitting `i`
    /// right after `j` (columns sum to one), `initial` the law of the first
    /// symbol.
    Markov {
        transition: Vec<Vec<f64>>,
        initial: Vec<f64>,
    },
    /// Arbitrary process given by its conditionals.
    General(Arc<dyn ConditionalLaw>),
}

impl fmt::Debug for StochasticLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Iid { p } => f.debug_struct("Iid").field("p", p).finish(),
            Self::Markov {
                transition,
                initial,
            } => f
                .debug_struct("Markov")
                .field("transition", transition)
                .field("initial", initial)
                .finish(),
            Self::General(law) => f
                .debug_struct("General")
                .field("num_symbols", &law.num_symbols())
                .finish_non_exhaustive(),
        }
    }
}

impl StochasticLaw {
    pub fn general(law: impl ConditionalLaw + 'static) -> Self {
        Self::General(Arc::new(law))
    }

    pub fn num_symbols(&self) -> usize {
        match self {
            Self::Iid { p } => p.len(),
            Self::Markov { initial, .. } => initial.len(),
            Self::General(law) => law.num_symbols(),
        }
    }

    /// Marginal law of the first symbol.
    pub fn initial(&self) -> Vec<f64> {
        match self {
            Self::Iid { p } => p.clone(),
            Self::Markov { initial, .. } => initial.clone(),
            Self::General(law) => law.conditional(&[]),
        }
    }

    /// `p(· | history)`.
    pub fn conditional(&self, history: &[usize]) -> Vec<f64> {
        match (self, history.last()) {
            (Self::Iid { p }, _) => p.clone(),
            (Self::Markov { initial, .. }, None) => initial.clone(),
            (Self::Markov { transition, .. }, Some(&prev)) => {
                transition.iter().map(|row| row[prev]).collect()
            }
            (Self::General(law), _) => law.conditional(history),
        }
    }

    /// Transition matrix view of i.i.d. and Markov laws.
    pub fn transition_matrix(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            Self::Iid { p } => Some(p.iter().map(|&pi| vec![pi; p.len()]).collect()),
            Self::Markov { transition, .. } => Some(transition.clone()),
            Self::General(_) => None,
        }
    }

    pub fn is_markov(&self) -> bool {
        !matches!(self, Self::General(_))
    }
}

/// Invariant distribution of a column-stochastic matrix, from
/// `(P − I) p = 0` with one equation replaced by `Σ p = 1`. Unique only for
/// irreducible chains; reducible chains get one of their fixed points.
pub fn stationary_distribution(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = transition.len();
    if n == 0 || transition.iter().any(|row| row.len() != n) {
        return Err(Error::dims("transition matrix must be square and nonempty"));
    }
    let a = Mat::<f64>::from_fn(n, n, |i, j| {
        if i == n - 1 {
            1.0
        } else {
            transition[i][j] - if i == j { 1.0 } else { 0.0 }
        }
    });
    let b = Mat::<f64>::from_fn(n, 1, |i, _| if i == n - 1 { 1.0 } else { 0.0 });
    let x = a.partial_piv_lu().solve(&b);
    let p: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::contract(
            "transition matrix has no unique stationary distribution",
        ));
    }
    Ok(p)
}
