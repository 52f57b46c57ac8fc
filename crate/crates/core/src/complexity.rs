//! Closed-form iteration counts, asymptotic cost records and resource
//! estimates measured from the built circuits.

use std::f64::consts::PI;

use serde::Serialize;

use crate::engine::{analytic_success, build_oracle, MAX_ITERATIONS};
use crate::gadgets::{diffuser, floor_log2, RegisterLayout};
use crate::model::NscInstance;
use crate::statevec::QuantumCircuit;
use crate::{Error, Result};

/// `constant · base^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expression {
    pub constant: f64,
    pub base: f64,
    pub exponent: f64,
}

impl Expression {
    pub fn new(constant: f64, base: f64, exponent: f64) -> Self {
        Expression {
            constant,
            base,
            exponent,
        }
    }

    pub fn eval(&self) -> f64 {
        self.constant * self.base.powf(self.exponent)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IterationCounts {
    /// `⌈(π/4)√(N/M)⌉`.
    pub k_paper: usize,
    /// Smallest `k` maximising `sin²((2k+1)θ)`.
    pub k_exact: usize,
}

pub fn optimal_iterations(search_space: u64, marked: u64) -> Result<IterationCounts> {
    if marked == 0 || marked > search_space {
        return Err(Error::domain(format!(
            "optimal iteration count needs 1 <= M <= N, got M={marked}, N={search_space}"
        )));
    }
    let k_paper = (PI / 4.0 * (search_space as f64 / marked as f64).sqrt()).ceil() as usize;
    let limit = MAX_ITERATIONS.max(k_paper + 1);
    let mut k_exact = 0;
    let mut best = analytic_success(search_space, marked, 0)?;
    for k in 1..=limit {
        let p = analytic_success(search_space, marked, k)?;
        if p > best + 1e-12 {
            best = p;
            k_exact = k;
        }
    }
    Ok(IterationCounts { k_paper, k_exact })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QueryCount {
    /// `C^{|V|/2}`.
    pub quantum: Expression,
    /// `C^{|V|}`.
    pub classical: Expression,
    pub ratio: f64,
}

pub fn grover_query_count(cycle_length: usize, num_nodes: usize) -> Result<QueryCount> {
    if cycle_length < 2 || num_nodes == 0 {
        return Err(Error::domain(format!(
            "query count needs C >= 2 and |V| >= 1, got C={cycle_length}, |V|={num_nodes}"
        )));
    }
    let c = cycle_length as f64;
    let quantum = Expression::new(1.0, c, num_nodes as f64 / 2.0);
    let classical = Expression::new(1.0, c, num_nodes as f64);
    Ok(QueryCount {
        quantum,
        classical,
        ratio: classical.eval() / quantum.eval(),
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0, 1]")));
    }
    Ok(())
}

/// `⌈(π/4)√(1/α)⌉`, independent of the search-space size.
pub fn robust_iterations(alpha: f64) -> Result<usize> {
    check_alpha(alpha)?;
    Ok((PI / 4.0 * (1.0 / alpha).sqrt()).ceil() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolyIterations {
    /// `⌊(π/4)√(p(N)/α₀)⌋`; zero means uniform sampling already suffices.
    pub raw: usize,
    /// `max(1, raw)`.
    pub practical: usize,
}

pub fn poly_precision_iterations(alpha0: f64, p_n: f64) -> Result<PolyIterations> {
    check_alpha(alpha0)?;
    if !p_n.is_finite() || p_n < 1.0 {
        return Err(Error::domain(format!(
            "p(N) = {p_n} must be a finite value >= 1"
        )));
    }
    if alpha0 / p_n > 1.0 {
        return Err(Error::domain("alpha0 / p(N) must not exceed 1"));
    }
    let raw = (PI / 4.0 * (p_n / alpha0).sqrt()).floor() as usize;
    Ok(PolyIterations {
        raw,
        practical: raw.max(1),
    })
}

/// Expected uniform draws until a feasible assignment: `1/α`.
pub fn classical_sampling_cost(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(1.0 / alpha)
}

/// Counting query form `√(2/α)` at accuracy `ε = αN/2`.
pub fn counting_cost(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((2.0 / alpha).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QubitCount {
    pub node: usize,
    pub delay: usize,
    pub sum: usize,
    pub pad: usize,
    pub carry: usize,
    pub flag: usize,
    pub comparator_ancilla: usize,
    pub total: usize,
}

impl QubitCount {
    pub fn from_layout(l: &RegisterLayout) -> Self {
        QubitCount {
            node: l.node_regs.iter().map(|r| r.len()).sum(),
            delay: l.delay_regs.iter().map(|r| r.len()).sum(),
            sum: l.sum_reg.len(),
            pad: l.pad_reg.len(),
            carry: 1,
            flag: 1,
            comparator_ancilla: l.cmp_ancilla.len(),
            total: l.total_qubits,
        }
    }
}

/// Binary-mode register budget `n·V + A + 3·⌊log2 A⌋ + 4`.
pub fn qubit_count(bits_per_node: usize, num_nodes: usize, num_arcs: usize) -> Result<QubitCount> {
    if bits_per_node == 0 || num_nodes < 2 || num_arcs == 0 {
        return Err(Error::domain(format!(
            "qubit count needs n >= 1, V >= 2, A >= 1, got n={bits_per_node}, V={num_nodes}, A={num_arcs}"
        )));
    }
    let eps = floor_log2(num_arcs as u64) + 1;
    let q = QubitCount {
        node: bits_per_node * num_nodes,
        delay: num_arcs,
        sum: eps,
        pad: eps,
        carry: 1,
        flag: 1,
        comparator_ancilla: eps - 1,
        total: bits_per_node * num_nodes + num_arcs + 3 * (eps - 1) + 4,
    };
    debug_assert_eq!(
        q.total,
        q.node + q.delay + q.sum + q.pad + q.carry + q.flag + q.comparator_ancilla
    );
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GateTally {
    pub gates: usize,
    pub multi_qubit: usize,
    pub depth: usize,
}

impl GateTally {
    fn of(c: &QuantumCircuit) -> Self {
        GateTally {
            gates: c.len(),
            multi_qubit: c.multi_qubit_count(),
            depth: c.depth(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceEstimate {
    pub qubits: QubitCount,
    pub delay_stage: GateTally,
    pub adder_stage: GateTally,
    pub comparator_stage: GateTally,
    /// Delay, adder and comparator stages (the compute half).
    pub oracle: GateTally,
    /// Compute, phase flip and uncompute.
    pub phase_oracle: GateTally,
    pub diffuser: GateTally,
    /// One oracle call followed by one diffuser.
    pub iteration: GateTally,
    /// Asymptotic gate-count label of the oracle.
    pub oracle_complexity: &'static str,
}

/// Gate counts and depths taken from the circuits the gate-level backend
/// would run. Capacity is not checked; only circuit construction is needed.
pub fn oracle_cost(instance: &NscInstance) -> Result<ResourceEstimate> {
    let l = RegisterLayout::plan(instance)?;
    let qubits = QubitCount::from_layout(&l);
    let oracle = build_oracle(instance, &l)?;
    let diff = diffuser(l.total_qubits, &l.node_qubits())?;
    let mut iteration = oracle.circuit.clone();
    iteration.append(&diff)?;
    Ok(ResourceEstimate {
        qubits,
        delay_stage: GateTally::of(&oracle.delay_stage),
        adder_stage: GateTally::of(&oracle.adder_stage),
        comparator_stage: GateTally::of(&oracle.comparator_stage),
        oracle: GateTally::of(&oracle.compute()),
        phase_oracle: GateTally::of(&oracle.circuit),
        diffuser: GateTally::of(&diff),
        iteration: GateTally::of(&iteration),
        oracle_complexity: "O(|A| log |A|)",
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hardness {
    Constant,
    Polynomial,
    ExponentialBoundary,
    Exponential,
}

impl Hardness {
    pub fn is_exponential(self) -> bool {
        matches!(self, Hardness::ExponentialBoundary | Hardness::Exponential)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub beta: f64,
    /// `(π/4)·√(1/α₀) · C^{β|V|/2}`.
    pub quantum_iterations: Expression,
    /// `(1/α₀) · C^{β|V|}`.
    pub classical_samples: Expression,
    pub speedup: Expression,
    pub hardness: Hardness,
}

/// Cost regime for precision `p(N) = N^β` with `N = C^{|V|}`.
pub fn regime_classify(
    beta: f64,
    cycle_length: usize,
    num_nodes: usize,
    alpha0: f64,
) -> Result<RegimeReport> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::domain(format!(
            "beta {beta} must be finite and >= 0"
        )));
    }
    check_alpha(alpha0)?;
    if cycle_length < 2 || num_nodes == 0 {
        return Err(Error::domain("regime needs C >= 2 and |V| >= 1"));
    }
    let c = cycle_length as f64;
    let v = num_nodes as f64;
    let quantum = Expression::new(PI / 4.0 / alpha0.sqrt(), c, beta * v / 2.0);
    let classical = Expression::new(1.0 / alpha0, c, beta * v);
    let speedup = Expression::new(classical.constant / quantum.constant, c, beta * v / 2.0);
    let hardness = if beta == 0.0 {
        Hardness::Constant
    } else if beta < 1.0 {
        Hardness::Polynomial
    } else if beta == 1.0 {
        Hardness::ExponentialBoundary
    } else {
        Hardness::Exponential
    };
    Ok(RegimeReport {
        beta,
        quantum_iterations: quantum,
        classical_samples: classical,
        speedup,
        hardness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::layout;
    use crate::model::{random_instance, GenMode};

    #[test]
    fn iteration_examples() {
        assert_eq!(
            optimal_iterations(8, 8).unwrap(),
            IterationCounts {
                k_paper: 1,
                k_exact: 0
            }
        );
        assert_eq!(
            optimal_iterations(4, 1).unwrap(),
            IterationCounts {
                k_paper: 2,
                k_exact: 1
            }
        );
        assert_eq!(
            optimal_iterations(1024, 1).unwrap(),
            IterationCounts {
                k_paper: 26,
                k_exact: 25
            }
        );
        assert!(optimal_iterations(4, 0).is_err());
    }

    #[test]
    fn query_count_examples() {
        let q = grover_query_count(2, 4).unwrap();
        assert_eq!((q.quantum.eval(), q.classical.eval()), (4.0, 16.0));
        let q = grover_query_count(2, 14).unwrap();
        assert_eq!((q.quantum.eval(), q.classical.eval()), (128.0, 16384.0));
        assert!(grover_query_count(2, 0).is_err());
    }

    #[test]
    fn robust_and_poly_examples() {
        let r: Vec<usize> = [1.0, 0.25, 0.01]
            .iter()
            .map(|&a| robust_iterations(a).unwrap())
            .collect();
        assert_eq!(r, vec![1, 2, 8]);
        assert!(robust_iterations(0.0).is_err());
        assert!(robust_iterations(1.5).is_err());
        assert_eq!(
            poly_precision_iterations(1.0, 2500.0).unwrap(),
            PolyIterations {
                raw: 39,
                practical: 39
            }
        );
        assert_eq!(
            poly_precision_iterations(1.0, 1.0).unwrap(),
            PolyIterations {
                raw: 0,
                practical: 1
            }
        );
        assert!(poly_precision_iterations(1.0, 0.5).is_err());
    }

    #[test]
    fn sampling_and_counting_costs() {
        assert_eq!(classical_sampling_cost(1.0).unwrap(), 1.0);
        assert!((classical_sampling_cost(0.01).unwrap() - 100.0).abs() < 1e-9);
        assert_eq!(counting_cost(0.5).unwrap(), 2.0);
    }

    #[test]
    fn worked_qubit_totals() {
        assert_eq!(qubit_count(1, 4, 5).unwrap().total, 19);
        assert_eq!(qubit_count(1, 6, 7).unwrap().total, 23);
        assert_eq!(qubit_count(1, 10, 11).unwrap().total, 34);
    }

    #[test]
    fn qubit_breakdown_matches_layout() {
        let inst = random_instance(5, 2, GenMode::Binary).unwrap();
        let from_layout = QubitCount::from_layout(&layout(&inst).unwrap());
        assert_eq!(qubit_count(1, 5, 6).unwrap(), from_layout);
    }

    #[test]
    fn oracle_cost_counts_real_circuits() {
        let inst = random_instance(4, 1, GenMode::Binary).unwrap();
        let r = oracle_cost(&inst).unwrap();
        assert_eq!(r.qubits.total, 19);
        assert_eq!(r.phase_oracle.gates, 2 * r.oracle.gates + 1);
        assert_eq!(r.iteration.gates, r.phase_oracle.gates + r.diffuser.gates);
        assert!(r.iteration.depth >= 2 * r.oracle.depth);
        // ten-node instances exceed the simulator but can still be costed
        let big = random_instance(10, 1, GenMode::Binary).unwrap();
        assert_eq!(oracle_cost(&big).unwrap().qubits.total, 34);
    }

    #[test]
    fn regimes() {
        let r = regime_classify(0.5, 2, 12, 1.0).unwrap();
        assert_eq!(r.quantum_iterations.exponent, 3.0);
        assert_eq!(r.classical_samples.exponent, 6.0);
        assert_eq!(r.hardness, Hardness::Polynomial);
        let r = regime_classify(1.0, 2, 10, 1.0).unwrap();
        assert_eq!(r.hardness, Hardness::ExponentialBoundary);
        assert!(r.hardness.is_exponential());
        assert!((r.quantum_iterations.eval() - PI / 4.0 * 32.0).abs() < 1e-9);
        assert_eq!(
            regime_classify(0.0, 2, 10, 0.5).unwrap().hardness,
            Hardness::Constant
        );
        assert_eq!(
            regime_classify(2.0, 2, 10, 0.5).unwrap().hardness,
            Hardness::Exponential
        );
        assert!(regime_classify(-1.0, 2, 10, 0.5).is_err());
    }
}
