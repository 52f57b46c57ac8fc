use num_complex::Complex64;
use rayon::prelude::*;

use crate::gadgets::{ceil_log2, hadamard_layer, inverse_qft};
use crate::model::{NscInstance, RobustParams, ENUMERATION_CAP};
use crate::statevec::{sample_distribution, StateVector, MAX_QUBITS};
use crate::{Error, Result};

pub const MAX_COUNTING_QUBITS: usize = 12;
pub const DEFAULT_COUNT_SHOTS: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct CountEstimate {
    pub search_space: u64,
    pub counting_qubits: usize,
    /// Most frequent counting-register outcome (smallest on ties).
    pub outcome: u64,
    /// `π·outcome / 2^t`.
    pub theta: f64,
    pub m_hat: f64,
    /// Additive accuracy `2π√(M̂(N−M̂))/2^t + π²N/4^t`, valid whenever the
    /// phase estimate is within one grid step (probability ≥ 8/π²).
    pub error_bound: f64,
    pub shots: usize,
    pub seed: u64,
    /// Exact outcome distribution of the counting register.
    pub distribution: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountVerdict {
    Holds,
    Fails,
    /// `|M̂ − δ|` is below the error bound; more counting qubits are needed.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumRobustVerdict {
    pub verdict: CountVerdict,
    pub delta: u64,
    /// `M̂ − δ`.
    pub margin: f64,
    pub estimate: CountEstimate,
}

/// `N·(2ε√(p(1−p)) + ε²)` with `p = m/N`, `ε = π/2^t`.
pub fn counting_error_bound(search_space: u64, m: f64, t: usize) -> f64 {
    let n = search_space as f64;
    let eps = std::f64::consts::PI / (1u64 << t) as f64;
    let p = (m / n).clamp(0.0, 1.0);
    n * (2.0 * eps * (p * (1.0 - p)).sqrt() + eps * eps)
}

/// One application of `G = (2|u⟩⟨u| − I)·O` on the first `n` entries of a
/// node block, `u` uniform over those entries.
fn grover_step(block: &mut [Complex64], marked: &[usize], n: usize) {
    for &i in marked {
        block[i] = -block[i];
    }
    let mean = block[..n].iter().sum::<Complex64>() / n as f64;
    for a in &mut block[..n] {
        *a = 2.0 * mean - *a;
    }
}

/// Quantum counting over an explicit marked table of length `N`.
pub fn quantum_count_marked(
    marked: &[bool],
    t: usize,
    shots: usize,
    seed: u64,
) -> Result<CountEstimate> {
    if !(1..=MAX_COUNTING_QUBITS).contains(&t) {
        return Err(Error::domain(format!(
            "counting qubits must be in 1..={MAX_COUNTING_QUBITS}, got {t}"
        )));
    }
    if shots == 0 {
        return Err(Error::domain("counting needs at least one shot"));
    }
    let n = marked.len();
    if n == 0 {
        return Err(Error::structure("empty search space"));
    }
    if n as u64 > ENUMERATION_CAP {
        return Err(Error::Capacity {
            backend: "fast backend",
            required: n as u64,
            limit: ENUMERATION_CAP,
        });
    }
    let m = ceil_log2(n as u64);
    let total = m + t;
    if total > MAX_QUBITS {
        return Err(Error::Capacity {
            backend: "counting register",
            required: total as u64,
            limit: MAX_QUBITS as u64,
        });
    }
    let marked_idx: Vec<usize> = (0..n).filter(|&i| marked[i]).collect();
    let block_len = 1usize << m;

    // Node register low, counting register high; block x holds counting value x.
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << total];
    let amp = 1.0 / (n as f64).sqrt();
    for a in &mut amps[..n] {
        *a = Complex64::new(amp, 0.0);
    }
    let counting: Vec<usize> = (m..total).collect();
    let mut state = StateVector::from_amplitudes(amps)?;
    state.run(&hadamard_layer(total, &counting)?)?;

    for j in 0..t {
        let reps = 1usize << j;
        state
            .amplitudes_mut()
            .par_chunks_mut(block_len)
            .enumerate()
            .filter(|(x, _)| (x >> j) & 1 == 1)
            .for_each(|(_, block)| {
                for _ in 0..reps {
                    grover_step(block, &marked_idx, n);
                }
            });
    }
    state.run(&inverse_qft(total, &counting)?)?;

    let distribution = state.probabilities(&counting)?;
    let counts = sample_distribution(&distribution, shots, seed)?;
    // BTreeMap iterates in ascending outcome order, so `>` keeps the smallest on ties.
    let mut outcome = 0usize;
    let mut best = 0usize;
    for (&o, &c) in &counts {
        if c > best {
            best = c;
            outcome = o;
        }
    }
    let theta = std::f64::consts::PI * outcome as f64 / (1u64 << t) as f64;
    let m_hat = (n as f64 * theta.sin().powi(2)).clamp(0.0, n as f64);
    Ok(CountEstimate {
        search_space: n as u64,
        counting_qubits: t,
        outcome: outcome as u64,
        theta,
        m_hat,
        error_bound: counting_error_bound(n as u64, m_hat, t),
        shots,
        seed,
        distribution,
    })
}

pub fn quantum_count(
    instance: &NscInstance,
    t: usize,
    shots: usize,
    seed: u64,
) -> Result<CountEstimate> {
    let n = instance.search_space();
    if n > ENUMERATION_CAP {
        return Err(Error::Capacity {
            backend: "fast backend",
            required: n,
            limit: ENUMERATION_CAP,
        });
    }
    quantum_count_marked(&instance.kappa_table()?, t, shots, seed)
}

pub fn robust_decision_quantum(
    instance: &NscInstance,
    params: RobustParams,
    t: usize,
    shots: usize,
    seed: u64,
) -> Result<QuantumRobustVerdict> {
    let delta = params.delta(instance.search_space())?;
    let estimate = quantum_count(instance, t, shots, seed)?;
    let margin = estimate.m_hat - delta as f64;
    let verdict = if margin.abs() < estimate.error_bound {
        CountVerdict::Inconclusive
    } else if margin >= 0.0 {
        CountVerdict::Holds
    } else {
        CountVerdict::Fails
    };
    Ok(QuantumRobustVerdict {
        verdict,
        delta,
        margin,
        estimate,
    })
}
