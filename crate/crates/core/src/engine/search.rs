use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use super::oracle::build_oracle;
use crate::gadgets::{diffuser, hadamard_layer, layout, RegisterLayout};
use crate::metrics::success_metrics;
use crate::model::{NscInstance, ENUMERATION_CAP};
use crate::rng::derive_seed;
use crate::statevec::{sample_distribution, QuantumCircuit, StateVector};
use crate::{Error, Result};

/// Engines refuse more Grover iterations than this.
pub const MAX_ITERATIONS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Full circuit with all ancilla registers.
    Gate,
    /// Phase oracle applied from classical κ on the node space only.
    Fast,
    /// Gate-level with Pauli-noise trajectories.
    Noisy,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Gate => "gate",
            Backend::Fast => "fast",
            Backend::Noisy => "noisy",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledOutcome {
    pub shots: usize,
    pub counts: BTreeMap<usize, usize>,
    /// Fraction of shots landing on marked assignments.
    pub success: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub node_distribution: Vec<f64>,
    pub marked: Vec<bool>,
    pub marked_count: u64,
    pub search_space: u64,
    pub success_probability: f64,
    pub baseline: f64,
    pub ratio: Option<f64>,
    pub k_used: usize,
    pub backend: Backend,
    pub seed: u64,
    pub noise_rate: f64,
    pub trajectories: usize,
    pub sampled: Option<SampledOutcome>,
}

/// `sin²((2k+1)·θ)` with `sin²θ = M/N`; zero when nothing is marked.
pub fn analytic_success(search_space: u64, marked: u64, k: usize) -> Result<f64> {
    if search_space == 0 || marked > search_space {
        return Err(Error::domain(format!(
            "need 0 <= M <= N, got M={marked}, N={search_space}"
        )));
    }
    if marked == 0 {
        return Ok(0.0);
    }
    if k == 0 {
        return Ok(marked as f64 / search_space as f64);
    }
    let theta = (marked as f64 / search_space as f64).sqrt().asin();
    Ok(((2 * k + 1) as f64 * theta).sin().powi(2))
}

fn check_iterations(k: usize) -> Result<()> {
    if k > MAX_ITERATIONS {
        return Err(Error::domain(format!(
            "{k} iterations requested; engines stop at {MAX_ITERATIONS}, use analytic_success beyond"
        )));
    }
    Ok(())
}

fn check_fast_capacity(instance: &NscInstance) -> Result<u64> {
    let n = instance.search_space();
    if n > ENUMERATION_CAP {
        return Err(Error::Capacity {
            backend: "fast backend",
            required: n,
            limit: ENUMERATION_CAP,
        });
    }
    Ok(n)
}

struct Assembled {
    distribution: Vec<f64>,
    marked: Vec<bool>,
}

fn outcome(
    a: Assembled,
    k: usize,
    backend: Backend,
    shots: Option<usize>,
    seed: u64,
    noise_rate: f64,
    trajectories: usize,
) -> Result<SearchOutcome> {
    let metrics = success_metrics(&a.distribution, &a.marked)?;
    let sampled = match shots {
        None => None,
        Some(shots) => {
            let counts = sample_distribution(&a.distribution, shots, seed)?;
            let hits: usize = counts
                .iter()
                .filter(|(&o, _)| a.marked[o])
                .map(|(_, &c)| c)
                .sum();
            Some(SampledOutcome {
                shots,
                counts,
                success: hits as f64 / shots as f64,
            })
        }
    };
    Ok(SearchOutcome {
        marked_count: a.marked.iter().filter(|&&m| m).count() as u64,
        search_space: a.marked.len() as u64,
        node_distribution: a.distribution,
        marked: a.marked,
        success_probability: metrics.success,
        baseline: metrics.baseline,
        ratio: metrics.ratio,
        k_used: k,
        backend,
        seed,
        noise_rate,
        trajectories,
        sampled,
    })
}

/// Uniform preparation followed by `k` rounds of oracle then diffuser.
pub fn grover_circuit(
    instance: &NscInstance,
    k: usize,
) -> Result<(QuantumCircuit, RegisterLayout)> {
    check_iterations(k)?;
    let l = layout(instance)?;
    let oracle = build_oracle(instance, &l)?;
    let nodes = l.node_qubits();
    let diff = diffuser(l.total_qubits, &nodes)?;
    let mut c = hadamard_layer(l.total_qubits, &nodes)?;
    for _ in 0..k {
        c.append(&oracle.circuit)?;
        c.append(&diff)?;
    }
    Ok((c, l))
}

/// Prepared gate-level run: the circuit restricted to the qubits it
/// touches. Node qubits are touched and lowest, so they keep indices
/// `0..node_qubits` and the node block of the state is its first
/// `2^node_qubits` amplitudes.
struct CompactRun {
    circuit: QuantumCircuit,
    node_qubits: usize,
}

impl CompactRun {
    fn new(circuit: &QuantumCircuit, layout: &RegisterLayout) -> Self {
        let (circuit, kept) = circuit.compact();
        let node_qubits = layout.node_qubits().len();
        debug_assert!(kept[..node_qubits].iter().enumerate().all(|(i, &q)| i == q));
        CompactRun {
            circuit,
            node_qubits,
        }
    }

    fn nodes(&self) -> Vec<usize> {
        (0..self.node_qubits).collect()
    }

    fn node_block(&self, s: &StateVector) -> Vec<Complex64> {
        s.amplitudes()[..1usize << self.node_qubits].to_vec()
    }
}

/// Node-register amplitudes of the gate-level state on the all-ancilla-zero
/// subspace.
pub fn gate_level_node_amplitudes(instance: &NscInstance, k: usize) -> Result<Vec<Complex64>> {
    let (c, l) = grover_circuit(instance, k)?;
    let run = CompactRun::new(&c, &l);
    let mut s = StateVector::zero(run.circuit.num_qubits())?;
    s.run(&run.circuit)?;
    Ok(run.node_block(&s))
}

/// Node amplitudes (ancillas at 0) after each of `0..=k_max` gate-level
/// iterations, from a single pass.
pub fn gate_level_iterates(instance: &NscInstance, k_max: usize) -> Result<Vec<Vec<Complex64>>> {
    check_iterations(k_max)?;
    let (one, l) = grover_circuit(instance, 1)?;
    let run = CompactRun::new(&one, &l);
    let prep_len = l.node_qubits().len();
    let (prep, iteration) = run.circuit.gates().split_at(prep_len);
    let width = run.circuit.num_qubits();
    let prep = QuantumCircuit::from_gates(width, prep.to_vec())?;
    let iteration = QuantumCircuit::from_gates(width, iteration.to_vec())?;
    let mut s = StateVector::zero(width)?;
    s.run(&prep)?;
    let mut out = vec![run.node_block(&s)];
    for _ in 0..k_max {
        s.run(&iteration)?;
        out.push(run.node_block(&s));
    }
    Ok(out)
}

pub fn grover_search_gate_level(
    instance: &NscInstance,
    k: usize,
    shots: Option<usize>,
    seed: u64,
) -> Result<SearchOutcome> {
    let (c, l) = grover_circuit(instance, k)?;
    let run = CompactRun::new(&c, &l);
    let mut s = StateVector::zero(run.circuit.num_qubits())?;
    s.run(&run.circuit)?;
    let distribution = s.probabilities(&run.nodes())?;
    let marked = instance.kappa_table()?;
    outcome(
        Assembled {
            distribution,
            marked,
        },
        k,
        Backend::Gate,
        shots,
        seed,
        0.0,
        1,
    )
}

/// Node-space amplitudes after `k` fast iterations.
///
/// Uses the same sign convention as the gate-level circuit, whose diffuser
/// is `I − 2|u⟩⟨u|`, so amplitudes (not only probabilities) agree.
pub fn fast_amplitudes(marked: &[bool], k: usize) -> Result<Vec<f64>> {
    check_iterations(k)?;
    if marked.is_empty() {
        return Err(Error::structure("empty search space"));
    }
    let n = marked.len();
    let marked_idx: Vec<usize> = (0..n).filter(|&i| marked[i]).collect();
    let mut amps = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..k {
        for &i in &marked_idx {
            amps[i] = -amps[i];
        }
        let mean = amps.par_iter().sum::<f64>() / n as f64;
        amps.par_iter_mut().for_each(|a| *a -= 2.0 * mean);
    }
    Ok(amps)
}

pub fn grover_search_fast(
    instance: &NscInstance,
    k: usize,
    shots: Option<usize>,
    seed: u64,
) -> Result<SearchOutcome> {
    check_fast_capacity(instance)?;
    check_iterations(k)?;
    let marked = instance.kappa_table()?;
    let amps = fast_amplitudes(&marked, k)?;
    let distribution = amps.iter().map(|a| a * a).collect();
    outcome(
        Assembled {
            distribution,
            marked,
        },
        k,
        Backend::Fast,
        shots,
        seed,
        0.0,
        1,
    )
}

/// Gate-level search averaged over `trajectories` Pauli-noise runs.
///
/// Trajectory `t` uses seed `derive_seed(seed, t)`; the reported
/// distribution is the mean of the per-trajectory node marginals.
pub fn grover_search_noisy(
    instance: &NscInstance,
    k: usize,
    noise_rate: f64,
    trajectories: usize,
    shots: Option<usize>,
    seed: u64,
) -> Result<SearchOutcome> {
    if trajectories == 0 {
        return Err(Error::domain("at least one trajectory is required"));
    }
    if !(0.0..=1.0).contains(&noise_rate) {
        return Err(Error::domain(format!(
            "noise rate {noise_rate} outside [0, 1]"
        )));
    }
    let (c, l) = grover_circuit(instance, k)?;
    // Noise only lands on touched qubits, so the compact run sees the same
    // error draws as the full register would.
    let run = CompactRun::new(&c, &l);
    let nodes = run.nodes();
    let width = run.circuit.num_qubits();
    // A zero rate makes every trajectory the noiseless run.
    let runs = if noise_rate == 0.0 {
        1
    } else {
        trajectories as u64
    };
    let per_traj: Vec<Vec<f64>> = (0..runs)
        .into_par_iter()
        .map(|t| {
            let mut s = StateVector::zero(width)?;
            s.run_noisy(&run.circuit, noise_rate, derive_seed(seed, t))?;
            s.probabilities(&nodes)
        })
        .collect::<Result<_>>()?;
    let mut distribution = vec![0.0; 1usize << nodes.len()];
    for d in &per_traj {
        for (acc, p) in distribution.iter_mut().zip(d) {
            *acc += p;
        }
    }
    for p in &mut distribution {
        *p /= runs as f64;
    }
    let marked = instance.kappa_table()?;
    outcome(
        Assembled {
            distribution,
            marked,
        },
        k,
        Backend::Noisy,
        shots,
        seed,
        noise_rate,
        trajectories,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EdgeDelay, Mode, NetworkGraph, PeriodicDelayTable};

    /// Two nodes, two parallel arcs, K = 0: only μ = (1, 1) is feasible.
    fn single_marked() -> NscInstance {
        let g = NetworkGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let d = vec![
            EdgeDelay::Periodic(PeriodicDelayTable::new(vec![0, 1]).unwrap()),
            EdgeDelay::Congestion { from: 0, to: 0 },
        ];
        NscInstance::new(g, 2, d, 0, Mode::Binary).unwrap()
    }

    #[test]
    fn analytic_examples() {
        assert_eq!(analytic_success(16, 5, 0).unwrap(), 5.0 / 16.0);
        assert!((analytic_success(4, 1, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((analytic_success(2, 1, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(analytic_success(8, 0, 3).unwrap(), 0.0);
        assert!(analytic_success(4, 5, 1).is_err());
    }

    #[test]
    fn single_marked_hits_one_on_both_backends() {
        let inst = single_marked();
        assert_eq!(inst.feasible_set().unwrap().indices, vec![3]);
        for out in [
            grover_search_fast(&inst, 1, None, 0).unwrap(),
            grover_search_gate_level(&inst, 1, None, 0).unwrap(),
        ] {
            assert!(
                (out.success_probability - 1.0).abs() < 1e-12,
                "{:?}",
                out.backend
            );
            assert_eq!(out.baseline, 0.25);
            assert!((out.ratio.unwrap() - 4.0).abs() < 1e-11);
        }
    }

    #[test]
    fn amplitudes_share_sign_convention() {
        let inst = single_marked();
        let fast = fast_amplitudes(&inst.kappa_table().unwrap(), 2).unwrap();
        let gate = gate_level_node_amplitudes(&inst, 2).unwrap();
        for (g, f) in gate.iter().zip(&fast) {
            assert!((g - Complex64::new(*f, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn iteration_cap() {
        let inst = single_marked();
        assert!(grover_search_fast(&inst, MAX_ITERATIONS, None, 0).is_ok());
        assert!(matches!(
            grover_search_fast(&inst, MAX_ITERATIONS + 1, None, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sampling_is_seeded() {
        let inst = single_marked();
        let a = grover_search_fast(&inst, 1, Some(256), 9)
            .unwrap()
            .sampled
            .unwrap();
        let b = grover_search_fast(&inst, 1, Some(256), 9)
            .unwrap()
            .sampled
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.get(&3), Some(&256));
        assert_eq!(a.success, 1.0);
    }

    #[test]
    fn noisy_at_zero_rate_is_noiseless() {
        let inst = single_marked();
        let exact = grover_search_gate_level(&inst, 1, None, 0).unwrap();
        let noisy = grover_search_noisy(&inst, 1, 0.0, 3, None, 5).unwrap();
        assert!((noisy.success_probability - exact.success_probability).abs() < 1e-12);
        assert!(grover_search_noisy(&inst, 1, 0.1, 0, None, 5).is_err());
    }

    #[test]
    fn iterates_match_single_runs() {
        let inst = single_marked();
        let all = gate_level_iterates(&inst, 3).unwrap();
        for (k, amps) in all.iter().enumerate() {
            let single = gate_level_node_amplitudes(&inst, k).unwrap();
            for (a, b) in amps.iter().zip(&single) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
