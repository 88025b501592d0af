use std::collections::HashMap;

use proptest::collection::vec;
use proptest::prelude::*;
use qdcomp_core::codes::{
    cq_scheme, huffman, kraft_converse, kraft_sum, optimal_code, optimal_length, ClassicalCode,
};
use qdcomp_core::numkit::{
    shannon_entropy, von_neumann_entropy, ComplexMatrix, ComplexVector, Tolerances,
};
use qdcomp_core::random::{random_density, random_orthonormal_symbols, seeded};

/// Two distinct sequences of at most `depth` codewords spelling the same
/// bitstring.
fn has_collision(words: &[String], depth: usize) -> bool {
    let mut spelled: HashMap<String, Vec<usize>> = HashMap::new();
    let mut frontier: Vec<(Vec<usize>, String)> = vec![(vec![], String::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (seq, text) in &frontier {
            for (i, w) in words.iter().enumerate() {
                let mut s = seq.clone();
                s.push(i);
                let t = format!("{text}{w}");
                if let Some(other) = spelled.get(&t) {
                    if *other != s {
                        return true;
                    }
                }
                spelled.insert(t.clone(), s.clone());
                next.push((s, t));
            }
        }
        frontier = next;
    }
    false
}

/// Minimum of `Σ p_i ℓ_i` over all length vectors with lengths in
/// `1..=n` and Kraft sum at most one.
fn exhaustive_optimum(p: &[f64]) -> f64 {
    let n = p.len();
    let mut best = f64::INFINITY;
    let mut lengths = vec![1usize; n];
    loop {
        if kraft_sum(&lengths) <= 1.0 {
            let cost: f64 = p.iter().zip(&lengths).map(|(pi, &l)| pi * l as f64).sum();
            best = best.min(cost);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return best;
            }
            lengths[pos] += 1;
            if lengths[pos] <= n {
                break;
            }
            lengths[pos] = 1;
            pos += 1;
        }
    }
}

fn bitstring() -> impl Strategy<Value = String> {
    vec(prop_oneof![Just('0'), Just('1')], 1..4).prop_map(|v| v.into_iter().collect())
}

fn pmf(max: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(1u32..100, 1..=max).prop_map(|w| {
        let total: u32 = w.iter().sum();
        w.into_iter().map(|x| x as f64 / total as f64).collect()
    })
}

#[test]
fn collision_oracle_examples() {
    let words = |w: &[&str]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert!(!has_collision(&words(&["0", "01"]), 4));
    assert!(has_collision(&words(&["0", "01", "10"]), 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sardinas_patterson_matches_collision_search(words in vec(bitstring(), 1..5)) {
        let code = ClassicalCode::from_words(&words).unwrap();
        prop_assert_eq!(code.is_uniquely_decodable(), !has_collision(&words, 4));
    }

    #[test]
    fn uniquely_decodable_codes_satisfy_kraft(words in vec(bitstring(), 1..5)) {
        let code = ClassicalCode::from_words(&words).unwrap();
        if code.is_uniquely_decodable() {
            let basis: Vec<ComplexVector> =
                (0..words.len()).map(|i| ComplexVector::basis(words.len(), i)).collect();
            let quantum = cq_scheme(&code, &basis, &Tolerances::DEFAULT).unwrap();
            prop_assert!(quantum.kraft_sum() <= 1.0 + 1e-12);
            prop_assert_eq!(quantum.kraft_sum(), code.kraft_sum());
        }
    }

    #[test]
    fn converse_preserves_lengths(lengths in vec(1usize..8, 1..10), seed in any::<u64>()) {
        prop_assume!(kraft_sum(&lengths) <= 1.0);
        let code = kraft_converse(&lengths).unwrap();
        prop_assert!(code.is_prefix_free());
        prop_assert_eq!(code.lengths(), lengths.clone());
        let d = lengths.len();
        let basis = random_orthonormal_symbols(&mut seeded(seed), d).states().to_vec();
        let quantum = cq_scheme(&code, &basis, &Tolerances::DEFAULT).unwrap();
        let mut expected = std::collections::BTreeMap::new();
        for l in lengths {
            *expected.entry(l).or_insert(0usize) += 1;
        }
        prop_assert_eq!(quantum.length_counts(), expected);
        let dense = quantum.kraft_trace_dense(&Default::default()).unwrap();
        prop_assert!((dense - quantum.kraft_sum()).abs() < 1e-12);
    }

    #[test]
    fn huffman_is_optimal(p in pmf(6)) {
        let code = huffman(&p).unwrap();
        prop_assert!(code.is_prefix_free());
        let expected = code.expected_length(&p).unwrap();
        prop_assert!((expected - exhaustive_optimum(&p)).abs() < 1e-12);
        let h = shannon_entropy(&p).unwrap();
        prop_assert!(h <= expected + 1e-12);
        prop_assert!(p.len() == 1 || expected < h + 1.0);
    }

    #[test]
    fn cq_average_length_is_classical(p in pmf(6), seed in any::<u64>()) {
        let code = huffman(&p).unwrap();
        let basis = random_orthonormal_symbols(&mut seeded(seed), p.len()).states().to_vec();
        let quantum = cq_scheme(&code, &basis, &Tolerances::DEFAULT).unwrap();
        let mut rho = ComplexMatrix::zeros(p.len(), p.len());
        for (e, &pi) in basis.iter().zip(&p) {
            rho.add_scaled(pi.into(), &e.projector()).unwrap();
        }
        let classical = code.expected_length(&p).unwrap();
        prop_assert!((quantum.average_length(&rho).unwrap() - classical).abs() < 1e-12);
    }

    #[test]
    fn codeword_length_is_affine(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = seeded(seed);
        let basis = random_orthonormal_symbols(&mut rng, d).states().to_vec();
        let lengths: Vec<usize> = (0..d).map(|i| i % 3 + 1).collect();
        prop_assume!(kraft_sum(&lengths) <= 1.0);
        let quantum = cq_scheme(&kraft_converse(&lengths).unwrap(), &basis, &Tolerances::DEFAULT).unwrap();
        let s = qdcomp_core::random::random_state(&mut rng, d);
        let direct: f64 = basis
            .iter()
            .zip(&lengths)
            .map(|(e, &l)| e.inner(&s).norm_sqr() * l as f64)
            .sum();
        prop_assert!((quantum.codeword_length(&s, &Tolerances::DEFAULT).unwrap() - direct).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn optimal_length_sandwich(seed in any::<u64>(), d in 2usize..=16, rank in 2usize..=16) {
        let rank = rank.min(d);
        let rho = random_density(&mut seeded(seed), d, rank);
        let s = von_neumann_entropy(&rho).unwrap();
        let opt = optimal_code(&rho, &Tolerances::DEFAULT).unwrap();
        prop_assert!(s <= opt.expected_length + 1e-9);
        prop_assert!(opt.expected_length < s + 1.0);
        prop_assert!((opt.code.average_length(&rho).unwrap() - opt.expected_length).abs() < 1e-9);
        prop_assert!((optimal_length(&rho, &Tolerances::DEFAULT).unwrap() - opt.expected_length).abs() < 1e-12);
    }
}
