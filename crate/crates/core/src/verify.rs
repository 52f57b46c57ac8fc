//! Self-checks shared by the test suites and the `verify` command.

use num_complex::Complex64;

use crate::engine::{build_oracle, fast_amplitudes, gate_level_node_amplitudes};
use crate::gadgets::{hadamard_layer, layout};
use crate::model::{random_instance, GenMode, NscInstance, OffsetAssignment};
use crate::rng::derive_seed;
use crate::statevec::StateVector;
use crate::Result;

pub const ENSEMBLE_MASTER_SEED: u64 = 0x4e53_4347;

/// Ten seeded binary instances for each of 4, 5 and 6 nodes.
pub fn default_ensemble() -> Result<Vec<NscInstance>> {
    let mut out = Vec::with_capacity(30);
    for n in 4..=6usize {
        for s in 0..10u64 {
            let seed = derive_seed(ENSEMBLE_MASTER_SEED, (n as u64) << 32 | s);
            out.push(random_instance(n, seed, GenMode::Binary)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub assignments: u64,
    pub delay_mismatches: u64,
    pub sum_mismatches: u64,
    pub flag_mismatches: u64,
    pub phase_mismatches: u64,
    pub unrestored: u64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.delay_mismatches
            + self.sum_mismatches
            + self.flag_mismatches
            + self.phase_mismatches
            + self.unrestored
            == 0
    }
}

/// Replays every node basis state through each oracle stage and compares
/// the registers with the classical delay, total and feasibility values.
pub fn oracle_equivalence(instance: &NscInstance) -> Result<OracleReport> {
    let l = layout(instance)?;
    let oracle = build_oracle(instance, &l)?;
    let mut r = OracleReport::default();
    for idx in 0..instance.search_space() {
        let mu = OffsetAssignment::from_index(idx, instance.cycle_length(), instance.num_nodes());
        let delays: Vec<u64> = instance
            .arc_delays(&mu)?
            .into_iter()
            .map(u64::from)
            .collect();
        let total = instance.total_delay(&mu)?;
        let kappa = instance.kappa(&mu)?;
        let p = oracle.probe(idx)?;
        r.assignments += 1;
        r.delay_mismatches += u64::from(p.delays != delays);
        r.sum_mismatches += u64::from(p.sum != total);
        r.flag_mismatches += u64::from(p.flag != kappa);
        r.phase_mismatches += u64::from(p.phase_flipped != kappa);
        r.unrestored += u64::from(!p.restored);
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncomputeReport {
    /// Probability mass outside the all-ancilla-zero subspace.
    pub leaked_mass: f64,
    /// Largest amplitude deviation from the ideal phase-flipped state.
    pub phase_error: f64,
}

/// Applies the oracle to the uniform node superposition and compares the
/// result with `Σ (−1)^κ(μ) |μ⟩|0…0⟩ / √N`.
///
/// Qubits no gate touches are left out of the simulation; they cannot leave
/// |0⟩.
pub fn uncomputation_residual(instance: &NscInstance) -> Result<UncomputeReport> {
    let l = layout(instance)?;
    let mut c = hadamard_layer(l.total_qubits, &l.node_qubits())?;
    c.append(&build_oracle(instance, &l)?.circuit)?;
    let (c, _) = c.compact();
    let mut s = StateVector::zero(c.num_qubits())?;
    s.run(&c)?;
    let marked = instance.kappa_table()?;
    let amp = 1.0 / (marked.len() as f64).sqrt();
    let (node, rest) = s.amplitudes().split_at(marked.len());
    let leaked_mass = rest.iter().map(|a| a.norm_sqr()).sum();
    let phase_error = node
        .iter()
        .zip(&marked)
        .map(|(a, &m)| (a - Complex64::new(if m { -amp } else { amp }, 0.0)).norm())
        .fold(0.0, f64::max);
    Ok(UncomputeReport {
        leaked_mass,
        phase_error,
    })
}

/// Largest per-amplitude difference between gate-level and fast node
/// amplitudes after `k` iterations.
pub fn backend_agreement(instance: &NscInstance, k: usize) -> Result<f64> {
    let gate = gate_level_node_amplitudes(instance, k)?;
    let fast = fast_amplitudes(&instance.kappa_table()?, k)?;
    Ok(gate
        .iter()
        .zip(&fast)
        .map(|(g, &f)| (g - Complex64::new(f, 0.0)).norm())
        .fold(0.0, f64::max))
}
