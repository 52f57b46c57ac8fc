use nsc_grover::complexity::{
    oracle_cost, poly_precision_iterations, qubit_count, robust_iterations,
};
use nsc_grover::gadgets::RegisterLayout;
use nsc_grover::model::{random_instance, GenMode};

#[test]
fn robust_iterations_do_not_depend_on_search_space() {
    for alpha in [1.0, 0.5, 0.25, 0.1, 0.01] {
        let k = robust_iterations(alpha).unwrap();
        for e in 4..=20 {
            let n = (1u64 << e) as f64;
            // ⌈(π/4)√(N/δ)⌉ with δ = αN
            let direct = (std::f64::consts::PI / 4.0 * (n / (alpha * n)).sqrt()).ceil() as usize;
            assert_eq!(direct, k);
        }
    }
}

#[test]
fn robust_and_poly_counts_agree_up_to_rounding() {
    for alpha in [1.0, 0.7, 0.5, 0.25, 0.1, 0.05, 0.01] {
        let r = robust_iterations(alpha).unwrap() as i64;
        let p = poly_precision_iterations(1.0, 1.0 / alpha).unwrap().raw as i64;
        assert!((r - p).abs() <= 1, "alpha {alpha}: {r} vs {p}");
    }
}

#[test]
fn poly_precision_recovers_standard_grover_count() {
    for e in 2..=20 {
        let n = (1u64 << e) as f64;
        for a0 in [1.0, 0.5, 0.1] {
            let expected = (std::f64::consts::PI / 4.0 * (n / a0).sqrt()).floor() as usize;
            assert_eq!(poly_precision_iterations(a0, n).unwrap().raw, expected);
        }
    }
}

#[test]
fn qubit_formula_is_the_layout_total() {
    for n in 4..=10 {
        for seed in 0..20 {
            let inst = random_instance(n, seed, GenMode::Binary).unwrap();
            let l = RegisterLayout::plan(&inst).unwrap();
            assert_eq!(
                qubit_count(1, n, inst.num_arcs()).unwrap().total,
                l.total_qubits
            );
        }
    }
}

#[test]
fn adder_gate_count_grows_like_a_log_a() {
    let mut points = Vec::new();
    for n in 4..=14 {
        let inst = random_instance(n, 3, GenMode::Binary).unwrap();
        let a = inst.num_arcs();
        let gates = oracle_cost(&inst).unwrap().adder_stage.gates as f64;
        let x = a as f64 * ((a as f64).log2().floor() + 1.0);
        points.push((x, gates));
    }
    // least-squares slope through the origin, then every point under it with 1% slack
    let c = points.iter().map(|(x, y)| x * y).sum::<f64>()
        / points.iter().map(|(x, _)| x * x).sum::<f64>();
    let c_max = points.iter().map(|(x, y)| y / x).fold(0.0, f64::max);
    assert!(c_max <= c * 1.25, "c = {c}, worst ratio {c_max}");
    for (x, y) in points {
        assert!(y <= c_max * x + 1e-9);
    }
}

#[test]
fn four_node_iteration_has_tens_of_two_qubit_class_gates() {
    for seed in 0..10 {
        let inst = random_instance(4, seed, GenMode::Binary).unwrap();
        let r = oracle_cost(&inst).unwrap();
        assert!(
            (10..1000).contains(&r.iteration.multi_qubit),
            "{}",
            r.iteration.multi_qubit
        );
    }
}
