use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::numkit::{check_pmf, Tolerances};
use crate::{Error, Result};

/// A binary code `C: S → {0,1}⁺`, stored as symbol index → codeword.
/// Symbols without a codeword (for instance zero-probability symbols left
/// out by [`huffman`]) are simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCode {
    codewords: BTreeMap<usize, String>,
}

impl ClassicalCode {
    pub fn new(codewords: BTreeMap<usize, String>) -> Result<Self> {
        for (symbol, word) in &codewords {
            if word.is_empty() {
                return Err(Error::contract(format!(
                    "symbol {symbol} has an empty codeword"
                )));
            }
            if word.chars().any(|c| c != '0' && c != '1') {
                return Err(Error::contract(format!(
                    "codeword {word:?} of symbol {symbol} is not a bitstring"
                )));
            }
        }
        Ok(Self { codewords })
    }

    /// Code whose `i`-th codeword belongs to symbol `i`.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        Self::new(
            words
                .iter()
                .enumerate()
                .map(|(i, w)| (i, w.as_ref().to_string()))
                .collect(),
        )
    }

    pub fn codewords(&self) -> &BTreeMap<usize, String> {
        &self.codewords
    }

    pub fn codeword(&self, symbol: usize) -> Option<&str> {
        self.codewords.get(&symbol).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Codeword lengths in symbol order.
    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.values().map(String::len).collect()
    }

    pub fn kraft_sum(&self) -> f64 {
        kraft_sum(&self.lengths())
    }

    pub fn is_prefix_free(&self) -> bool {
        let words: Vec<&String> = self.codewords.values().collect();
        words.iter().enumerate().all(|(i, a)| {
            words
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !b.starts_with(a.as_str()))
        })
    }

    pub fn is_uniquely_decodable(&self) -> bool {
        is_uniquely_decodable(self)
    }

    /// `Σ p_i ℓ_i`; symbols without a codeword must have probability zero.
    pub fn expected_length(&self, p: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (i, &pi) in p.iter().enumerate() {
            match self.codewords.get(&i) {
                Some(w) => total += pi * w.len() as f64,
                None if pi == 0.0 => {}
                None => {
                    return Err(Error::contract(format!(
                        "symbol {i} has probability {pi} but no codeword"
                    )))
                }
            }
        }
        Ok(total)
    }

    /// `{"0": "10", "1": "0", …}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.codewords
                .iter()
                .map(|(i, w)| (i.to_string(), serde_json::Value::String(w.clone())))
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("code file: {e}")))?;
        let mut codewords = BTreeMap::new();
        for (key, word) in raw {
            let symbol: usize = key.parse().map_err(|_| {
                Error::Config(format!("code file: key {key:?} is not a symbol index"))
            })?;
            codewords.insert(symbol, word);
        }
        Self::new(codewords).map_err(|e| Error::Config(e.to_string()))
    }
}

/// `Σ 2^{−ℓ_i}`.
pub fn kraft_sum(lengths: &[usize]) -> f64 {
    lengths
        .iter()
        .map(|&l| 2f64.powi(-(l.min(i32::MAX as usize) as i32)))
        .sum()
}

/// Suffixes `w ≠ ε` with `a·w = b` for some `a ∈ from`, `b ∈ into`.
fn dangling(from: &BTreeSet<String>, into: &BTreeSet<String>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in from {
        for b in into {
            if b.len() > a.len() && b.starts_with(a.as_str()) {
                out.insert(b[a.len()..].to_string());
            }
        }
    }
    out
}

/// Sardinas–Patterson test: the extension `C⁺` is injective iff no
/// dangling-suffix set ever contains a codeword. Repeated codewords make a
/// code ambiguous outright.
pub fn is_uniquely_decodable(code: &ClassicalCode) -> bool {
    let words: BTreeSet<String> = code.codewords.values().cloned().collect();
    if words.len() != code.len() {
        return false;
    }
    let mut seen: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    let mut current = dangling(&words, &words);
    while !current.is_empty() {
        if current.iter().any(|s| words.contains(s)) {
            return false;
        }
        if !seen.insert(current.clone()) {
            return true;
        }
        let mut next = dangling(&words, &current);
        next.extend(dangling(&current, &words));
        current = next;
    }
    true
}

#[derive(Debug)]
struct HeapNode {
    weight: f64,
    /// 0 for leaves, 1 for merged nodes.
    rank: u8,
    order: usize,
    node: usize,
}

impl PartialEq for HeapNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapNode {}

impl PartialOrd for HeapNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapNode {
    // reversed so the max-heap pops the lightest node first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then(other.rank.cmp(&self.rank))
            .then(other.order.cmp(&self.order))
    }
}

/// Binary Huffman code for `p`.
///
/// Symbols with probability below `tol.zero` get no codeword. The two
/// lightest nodes are merged repeatedly; among equal weights leaves go
/// first in index order, then merged nodes in creation order. The first
/// node of each merge takes bit `0`. A lone symbol gets the codeword `0`.
pub fn huffman_with(p: &[f64], tol: &Tolerances) -> Result<ClassicalCode> {
    check_pmf(p, tol)?;
    let symbols: Vec<usize> = (0..p.len()).filter(|&i| p[i] >= tol.zero).collect();
    if symbols.is_empty() {
        return Err(Error::contract("no symbol has positive probability"));
    }
    if symbols.len() == 1 {
        return ClassicalCode::new(BTreeMap::from([(symbols[0], "0".to_string())]));
    }
    // children[node] = (first, second) for merged nodes; leaves come first
    let leaves = symbols.len();
    let mut children: Vec<(usize, usize)> = Vec::with_capacity(leaves - 1);
    let mut heap: BinaryHeap<HeapNode> = symbols
        .iter()
        .enumerate()
        .map(|(node, &s)| HeapNode {
            weight: p[s],
            rank: 0,
            order: s,
            node,
        })
        .collect();
    while heap.len() > 1 {
        let a = heap.pop().expect("heap has two nodes");
        let b = heap.pop().expect("heap has two nodes");
        children.push((a.node, b.node));
        heap.push(HeapNode {
            weight: a.weight + b.weight,
            rank: 1,
            order: children.len() - 1,
            node: leaves + children.len() - 1,
        });
    }
    let mut words = vec![String::new(); leaves];
    let mut stack = vec![(leaves + children.len() - 1, String::new())];
    while let Some((node, prefix)) = stack.pop() {
        if node < leaves {
            words[node] = prefix;
        } else {
            let (a, b) = children[node - leaves];
            stack.push((b, format!("{prefix}1")));
            stack.push((a, format!("{prefix}0")));
        }
    }
    ClassicalCode::new(symbols.into_iter().zip(words).collect())
}

pub fn huffman(p: &[f64]) -> Result<ClassicalCode> {
    huffman_with(p, &Tolerances::DEFAULT)
}

/// Canonical prefix code with the given lengths: symbols sorted by length
/// (ties by index) receive consecutive binary numbers, left-shifted
/// whenever the length grows.
pub fn kraft_converse(lengths: &[usize]) -> Result<ClassicalCode> {
    if let Some(i) = lengths.iter().position(|&l| l == 0) {
        return Err(Error::contract(format!(
            "symbol {i} asks for an empty codeword"
        )));
    }
    let sum = kraft_sum(lengths);
    if sum > 1.0 {
        return Err(Error::contract(format!(
            "Kraft sum {sum} exceeds 1; no prefix code has these lengths"
        )));
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| lengths[i]);
    let mut codewords = BTreeMap::new();
    let mut bits: Vec<u8> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 {
            // binary increment; cannot overflow while the Kraft sum is ≤ 1
            let mut j = bits.len();
            loop {
                if j == 0 {
                    return Err(Error::contract("Kraft sum exceeds 1"));
                }
                j -= 1;
                if bits[j] == 0 {
                    bits[j] = 1;
                    break;
                }
                bits[j] = 0;
            }
        }
        bits.resize(lengths[i], 0);
        codewords.insert(i, bits.iter().map(|&b| char::from(b'0' + b)).collect());
    }
    ClassicalCode::new(codewords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kraft_sums() {
        assert_eq!(kraft_sum(&[1, 2, 2]), 1.0);
        assert_eq!(kraft_sum(&[1, 1, 1]), 1.5);
        assert_eq!(kraft_sum(&[2, 2, 2, 2]), 1.0);
    }

    #[test]
    fn sardinas_patterson_examples() {
        let ud = |w: &[&str]| {
            ClassicalCode::from_words(w)
                .unwrap()
                .is_uniquely_decodable()
        };
        assert!(ud(&["0", "10", "11"]));
        assert!(ud(&["0", "01"]));
        assert!(!ud(&["0", "01", "10"]));
        assert!(!ud(&["0", "0"]));
        assert!(!ud(&["1", "011", "01110", "1110", "10011"]));
    }

    #[test]
    fn empty_and_non_binary_codewords_are_rejected() {
        assert!(ClassicalCode::from_words(&["0", ""]).is_err());
        assert!(ClassicalCode::from_words(&["02"]).is_err());
    }

    #[test]
    fn huffman_examples() {
        let code = huffman(&[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(code.lengths(), vec![1, 2, 2]);
        assert_eq!(code.expected_length(&[0.5, 0.25, 0.25]).unwrap(), 1.5);
        assert!(code.is_prefix_free());

        let single = huffman(&[1.0]).unwrap();
        assert_eq!(single.codeword(0), Some("0"));

        assert_eq!(huffman(&[0.25; 4]).unwrap().lengths(), vec![2; 4]);
    }

    #[test]
    fn huffman_skips_zero_probabilities() {
        let code = huffman(&[0.0, 0.5, 0.0, 0.5]).unwrap();
        assert_eq!(code.codeword(0), None);
        assert_eq!(code.lengths(), vec![1, 1]);
        assert!(huffman(&[0.0]).is_err());
    }

    #[test]
    fn huffman_ties_are_deterministic() {
        let code = huffman(&[0.25; 4]).unwrap();
        let words: Vec<&str> = code.codewords().values().map(String::as_str).collect();
        assert_eq!(words, vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn canonical_converse() {
        let words = |l: &[usize]| -> Vec<String> {
            kraft_converse(l)
                .unwrap()
                .codewords()
                .values()
                .cloned()
                .collect()
        };
        assert_eq!(words(&[1, 2, 2]), vec!["0", "10", "11"]);
        assert_eq!(words(&[2, 2, 2, 2]), vec!["00", "01", "10", "11"]);
        assert_eq!(words(&[3, 1, 2]), vec!["110", "0", "10"]);
        assert!(kraft_converse(&[1, 1, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let code = ClassicalCode::from_words(&["0", "10", "11"]).unwrap();
        let text = code.to_json().to_string();
        assert_eq!(text, r#"{"0":"0","1":"10","2":"11"}"#);
        assert_eq!(ClassicalCode::from_json(&text).unwrap(), code);
    }
}
