//! Exact state-vector simulation.
//!
//! Qubit `q` is bit `q` of the basis index (little-endian), so on a 3-qubit
//! register the basis state with qubits 0 and 1 set is index `0b011`.
//!
//! Gates are applied in place. A gate with `c` controls and one target only
//! visits the `2^(n-c-1)` index pairs whose control bits already match,
//! enumerated as increasing subsets of the free-bit mask.

mod circuit;
mod gate;

pub use circuit::{invert, BasisImage, QuantumCircuit};
pub use gate::{Control, Gate};

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::rng::{seeded, SimRng};
use crate::{Error, Result};

/// Largest register the full backend will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Single-qubit Pauli error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

fn check_capacity(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::domain("a state vector needs at least one qubit"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            backend: "full state-vector backend",
            required: num_qubits as u64,
            limit: MAX_QUBITS as u64,
        });
    }
    Ok(())
}

/// |0…0⟩ on `num_qubits` qubits.
pub fn zero_state(num_qubits: usize) -> Result<StateVector> {
    StateVector::zero(num_qubits)
}

struct Pattern {
    /// Control and target positions, ascending.
    fixed: Vec<usize>,
    /// Bits forced by satisfied controls; the target bit is left at 0.
    base: usize,
    target_mask: usize,
}

impl Pattern {
    fn of(gate: &Gate) -> Self {
        let mut fixed = Vec::with_capacity(gate.arity());
        let mut base = 0usize;
        for c in gate.controls() {
            fixed.push(c.qubit);
            if c.value {
                base |= 1 << c.qubit;
            }
        }
        let t = gate.target();
        fixed.push(t);
        fixed.sort_unstable();
        Pattern {
            fixed,
            base,
            target_mask: 1 << t,
        }
    }

    /// Indices with satisfied controls and the target bit clear.
    fn indices(&self, num_qubits: usize) -> impl Iterator<Item = usize> + '_ {
        let count = 1usize << (num_qubits - self.fixed.len());
        let fixed_mask: usize = self.fixed.iter().map(|&q| 1usize << q).sum();
        let free = ((1usize << num_qubits) - 1) & !fixed_mask;
        // next subset of `free` in increasing order
        std::iter::successors(Some(0usize), move |&cur| {
            Some(((cur | !free).wrapping_add(1)) & free)
        })
        .take(count)
        .map(move |k| k | self.base)
    }
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let mut amplitudes = vec![ZERO; 1usize << num_qubits];
        amplitudes[0] = ONE;
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(num_qubits)?;
        if index >= s.amplitudes.len() {
            return Err(Error::structure(format!(
                "basis index {index} outside a {num_qubits}-qubit register"
            )));
        }
        s.amplitudes[0] = ZERO;
        s.amplitudes[index] = ONE;
        Ok(s)
    }

    /// Wrap raw amplitudes. The length must be a power of two and the norm 1
    /// within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::structure(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_capacity(num_qubits)?;
        let s = StateVector {
            num_qubits,
            amplitudes,
        };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::structure(format!(
                "amplitudes have squared norm {norm}"
            )));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::structure(
                "fidelity between registers of different width",
            ));
        }
        let inner: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner.norm_sqr())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &Gate) {
        let n = self.num_qubits;
        let amps = &mut self.amplitudes;
        match gate {
            Gate::H(q) => {
                let pat = Pattern::of(gate);
                let mask = 1usize << q;
                for i in pat.indices(n) {
                    let a = amps[i];
                    let b = amps[i | mask];
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
                }
            }
            Gate::X(_) | Gate::Cnot { .. } | Gate::Ccx { .. } | Gate::Mcx { .. } => {
                let pat = Pattern::of(gate);
                for i in pat.indices(n) {
                    amps.swap(i, i | pat.target_mask);
                }
            }
            Gate::Z(_) | Gate::Mcz { .. } => {
                let pat = Pattern::of(gate);
                for i in pat.indices(n) {
                    let j = i | pat.target_mask;
                    amps[j] = -amps[j];
                }
            }
            Gate::Cp { angle, .. } => {
                let pat = Pattern::of(gate);
                let phase = Complex64::from_polar(1.0, *angle);
                for i in pat.indices(n) {
                    let j = i | pat.target_mask;
                    amps[j] *= phase;
                }
            }
        }
    }

    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::structure(format!(
                "Pauli on qubit {qubit} of a {}-qubit register",
                self.num_qubits
            )));
        }
        match pauli {
            Pauli::X => self.apply_unchecked(&Gate::X(qubit)),
            Pauli::Z => self.apply_unchecked(&Gate::Z(qubit)),
            Pauli::Y => {
                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                let mask = 1usize << qubit;
                let i_unit = Complex64::new(0.0, 1.0);
                for i in 0..self.amplitudes.len() {
                    if i & mask == 0 {
                        let a0 = self.amplitudes[i];
                        let a1 = self.amplitudes[i | mask];
                        self.amplitudes[i] = -i_unit * a1;
                        self.amplitudes[i | mask] = i_unit * a0;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &QuantumCircuit) -> Result<()> {
        self.check_width(circuit)?;
        for g in circuit.gates() {
            self.apply_unchecked(g);
        }
        Ok(())
    }

    /// Run `circuit`, and after every gate touching two or more qubits hit
    /// each touched qubit, independently with probability `noise_rate`, with
    /// a uniformly chosen X, Y or Z.
    pub fn run_noisy(
        &mut self,
        circuit: &QuantumCircuit,
        noise_rate: f64,
        seed: u64,
    ) -> Result<()> {
        if !(0.0..=1.0).contains(&noise_rate) {
            return Err(Error::domain(format!(
                "noise rate {noise_rate} outside [0, 1]"
            )));
        }
        self.check_width(circuit)?;
        if noise_rate == 0.0 {
            return self.run(circuit);
        }
        let mut rng = seeded(seed);
        for g in circuit.gates() {
            self.apply_unchecked(g);
            if g.arity() >= 2 {
                for q in g.qubits() {
                    if rng.gen::<f64>() < noise_rate {
                        let p = match rng.gen_range(0..3) {
                            0 => Pauli::X,
                            1 => Pauli::Y,
                            _ => Pauli::Z,
                        };
                        self.apply_pauli(q, p)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn check_width(&self, circuit: &QuantumCircuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::structure(format!(
                "{}-qubit circuit run on a {}-qubit state",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Marginal distribution of `subset`; outcome bit `b` is the value of
    /// `subset[b]`.
    pub fn probabilities(&self, subset: &[usize]) -> Result<Vec<f64>> {
        let mut seen = vec![false; self.num_qubits];
        for &q in subset {
            if q >= self.num_qubits {
                return Err(Error::structure(format!("qubit {q} out of range")));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::structure(format!("qubit {q} listed twice")));
            }
        }
        if subset.len() > MAX_QUBITS {
            return Err(Error::structure("marginal over too many qubits"));
        }
        let mut out = vec![0.0; 1usize << subset.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut o = 0usize;
            for (b, &q) in subset.iter().enumerate() {
                o |= ((i >> q) & 1) << b;
            }
            out[o] += p;
        }
        Ok(out)
    }

    /// Draw `shots` measurements of `subset`.
    pub fn sample(
        &self,
        subset: &[usize],
        shots: usize,
        seed: u64,
    ) -> Result<BTreeMap<usize, usize>> {
        let probs = self.probabilities(subset)?;
        sample_distribution(&probs, shots, seed)
    }
}

/// Free-function forms mirroring the methods, for pipeline-style code.
pub fn apply(mut state: StateVector, gate: &Gate) -> Result<StateVector> {
    state.apply(gate)?;
    Ok(state)
}

pub fn run_circuit(mut state: StateVector, circuit: &QuantumCircuit) -> Result<StateVector> {
    state.run(circuit)?;
    Ok(state)
}

pub fn run_noisy_trajectory(
    mut state: StateVector,
    circuit: &QuantumCircuit,
    noise_rate: f64,
    seed: u64,
) -> Result<StateVector> {
    state.run_noisy(circuit, noise_rate, seed)?;
    Ok(state)
}

/// Inverse-CDF sampling from a probability vector. Outcomes with zero
/// probability are never drawn.
pub fn sample_distribution(
    probs: &[f64],
    shots: usize,
    seed: u64,
) -> Result<BTreeMap<usize, usize>> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    if probs.is_empty() {
        return Err(Error::structure("empty distribution"));
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        if p.is_nan() || p < 0.0 {
            return Err(Error::structure(format!("negative or NaN probability {p}")));
        }
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    if total <= 0.0 {
        return Err(Error::structure("distribution has no mass"));
    }
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng: SimRng = seeded(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let r = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= r).min(last_nonzero);
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts)
}
