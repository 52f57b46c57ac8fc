use nsc_grover::complexity::optimal_iterations;
use nsc_grover::engine::{
    analytic_success, fast_amplitudes, grover_search_fast, grover_search_gate_level, quantum_count,
    robust_decision_quantum, CountVerdict, DEFAULT_COUNT_SHOTS,
};
use nsc_grover::model::{random_instance, GenMode, RobustParams};
use nsc_grover::verify::default_ensemble;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fast_backend_follows_the_amplification_law(
        marked in prop::collection::vec(any::<bool>(), 2..=64),
        k in 0usize..=10,
    ) {
        let m = marked.iter().filter(|&&b| b).count() as u64;
        let amps = fast_amplitudes(&marked, k).unwrap();
        let success: f64 = amps.iter().zip(&marked).filter(|(_, &b)| b).map(|(a, _)| a * a).sum();
        let expected = analytic_success(marked.len() as u64, m, k).unwrap();
        prop_assert!((success - expected).abs() < 1e-9, "{} vs {}", success, expected);
        let norm: f64 = amps.iter().map(|a| a * a).sum();
        prop_assert!((norm - 1.0).abs() < 1e-9);
    }
}

#[test]
fn k_exact_is_the_argmax_and_engines_reach_it() {
    for inst in default_ensemble().unwrap() {
        let fs = inst.feasible_set().unwrap();
        let (n, m) = (fs.search_space, fs.count());
        if m == 0 {
            continue;
        }
        let ks = optimal_iterations(n, m).unwrap();
        let best = analytic_success(n, m, ks.k_exact).unwrap();
        for k in 0..=64 {
            assert!(best >= analytic_success(n, m, k).unwrap() - 1e-12);
        }
        let out = grover_search_fast(&inst, ks.k_exact, None, 0).unwrap();
        assert!((out.success_probability - best).abs() < 1e-9);
    }
}

#[test]
fn gate_level_reaches_k_exact_on_small_instances() {
    for inst in default_ensemble()
        .unwrap()
        .into_iter()
        .filter(|i| i.num_nodes() == 4)
    {
        let fs = inst.feasible_set().unwrap();
        if fs.count() == 0 {
            continue;
        }
        let ks = optimal_iterations(fs.search_space, fs.count()).unwrap();
        let out = grover_search_gate_level(&inst, ks.k_exact, None, 0).unwrap();
        let best = analytic_success(fs.search_space, fs.count(), ks.k_exact).unwrap();
        assert!((out.success_probability - best).abs() < 1e-9);
    }
}

#[test]
fn sampled_success_within_four_sigma() {
    for inst in default_ensemble().unwrap().into_iter().take(10) {
        let out = grover_search_fast(&inst, 1, Some(1024), 17).unwrap();
        let p = out.success_probability;
        let sigma = (p * (1.0 - p) / 1024.0).sqrt();
        let sampled = out.sampled.unwrap().success;
        assert!(
            (sampled - p).abs() <= 4.0 * sigma + 1e-12,
            "{sampled} vs {p}"
        );
    }
}

#[test]
fn counting_never_contradicts_classical_when_margin_is_clear() {
    for inst in default_ensemble().unwrap().into_iter().take(12) {
        let m = inst.feasible_set().unwrap().count();
        let est = quantum_count(&inst, 7, DEFAULT_COUNT_SHOTS, 4).unwrap();
        if (est.m_hat - m as f64).abs() > est.error_bound {
            // permitted only with probability < 1 − 8/π²; flag it loudly if it happens here
            panic!(
                "estimate {} outside bound {} of M={m}",
                est.m_hat, est.error_bound
            );
        }
    }
}

#[test]
fn boundary_counts_never_give_a_wrong_definite_verdict() {
    // δ = M exactly: the classical verdict holds, so Fails would be wrong
    let inst = (0..)
        .map(|s| random_instance(5, s, GenMode::Binary).unwrap())
        .find(|i| i.feasible_set().unwrap().count() >= 2)
        .unwrap();
    let m = inst.feasible_set().unwrap().count();
    for seed in 0..50 {
        let v = robust_decision_quantum(&inst, RobustParams::Delta(m), 5, 64, seed).unwrap();
        assert_ne!(v.verdict, CountVerdict::Fails, "seed {seed}: {v:?}");
    }
}
