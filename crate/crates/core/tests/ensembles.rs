use proptest::prelude::*;
use qdcomp_core::ensembles::{builtin, EnsembleModel, StochasticLaw};
use qdcomp_core::numkit::{
    shannon_entropy, tensor, von_neumann_entropy, Caps, Complex64, ComplexMatrix, Tolerances,
};
use qdcomp_core::random::{random_model, random_orthonormal_symbols, random_pmf, seeded, LawKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn markov_recursion_matches_enumeration(seed in any::<u64>(), n in 2usize..5, d in 1usize..4, k in 1usize..5) {
        let mut rng = seeded(seed);
        let d = d.min(n);
        let kind = if seed % 2 == 0 { LawKind::Markov } else { LawKind::Iid };
        let model = random_model(&mut rng, n, d, kind);
        let fast = model.ensemble_state_markov(k, &Caps::DEFAULT).unwrap();
        let slow = model.ensemble_state_bruteforce(k, &Caps::DEFAULT).unwrap();
        prop_assert!(fast.max_abs_diff(&slow) < 1e-12);
        prop_assert!((fast.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(fast.hermiticity_residual() < 1e-14);
    }

    #[test]
    fn iid_state_is_tensor_power(seed in any::<u64>(), n in 2usize..4, k in 1usize..5) {
        let mut rng = seeded(seed);
        let model = random_model(&mut rng, n, 2, LawKind::Iid);
        let one = model.ensemble_state(1, &Caps::DEFAULT).unwrap();
        let power = (1..k).fold(one.clone(), |acc, _| tensor(&acc, &one).unwrap());
        let rho = model.ensemble_state(k, &Caps::DEFAULT).unwrap();
        prop_assert!(rho.max_abs_diff(&power) < 1e-12);
    }

    #[test]
    fn general_tree_probabilities_are_consistent(seed in any::<u64>(), n in 2usize..4, depth in 0usize..3) {
        let mut rng = seeded(seed);
        let model = random_model(&mut rng, n, 2, LawKind::General(depth));
        let report = model.validate(&Tolerances::DEFAULT);
        prop_assert!(report.all_passed(), "{:?}", report);
        let rho = model.ensemble_state(3, &Caps::DEFAULT).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_symbols_reduce_to_shannon(seed in any::<u64>(), d in 2usize..4, k in 1usize..4) {
        let mut rng = seeded(seed);
        let symbols = random_orthonormal_symbols(&mut rng, d);
        let p = random_pmf(&mut rng, d);
        let model = EnsembleModel::new(symbols, StochasticLaw::Iid { p: p.clone() }).unwrap();
        let rho = model.ensemble_state(k, &Caps::DEFAULT).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!((s - k as f64 * shannon_entropy(&p).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn iid_demo_single_symbol_state() {
    let rho = builtin::iid_demo()
        .ensemble_state(1, &Caps::DEFAULT)
        .unwrap();
    let expected = ComplexMatrix::from_fn(2, 2, |i, j| {
        Complex64::new(if i == 0 && j == 0 { 0.75 } else { 0.25 }, 0.0)
    });
    assert!(rho.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn builtin_models_validate() {
    for name in builtin::NAMES {
        let report = builtin::by_name(name)
            .unwrap()
            .validate(&Tolerances::DEFAULT);
        assert!(report.all_passed(), "{name}: {report:?}");
    }
}
