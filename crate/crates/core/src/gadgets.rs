//! Reversible sub-circuits for the feasibility oracle.
//!
//! All arithmetic gadgets act on computational-basis registers stored
//! little-endian (bit 0 of a register is its lowest qubit). Conformance of
//! each builder is defined by exhaustive classical replay against the
//! integer function it implements.

use std::f64::consts::PI;
use std::ops::Range;

use crate::model::{EdgeDelay, Mode, NscInstance};
use crate::statevec::{Control, Gate, QuantumCircuit, MAX_QUBITS};
use crate::{Error, Result};

/// Qubit assignment for the full oracle circuit.
///
/// Order on the register: node offsets, per-arc delays, sum, padding,
/// carry, flag, comparator work bits. Node registers come first so the node
/// subspace index equals the mixed-radix assignment index when `C = 2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub bits_per_node: usize,
    pub node_regs: Vec<Range<usize>>,
    pub delay_regs: Vec<Range<usize>>,
    pub sum_reg: Range<usize>,
    /// Formatting register that zero-extends a delay to the sum width. The
    /// half-adder chain does not need it, so it stays |0⟩; it is kept so the
    /// layout matches the standard resource count.
    pub pad_reg: Range<usize>,
    pub carry: usize,
    pub flag: usize,
    pub cmp_ancilla: Range<usize>,
    pub total_qubits: usize,
}

/// `⌈log2 x⌉` for `x >= 1`.
pub(crate) fn ceil_log2(x: u64) -> usize {
    if x <= 1 {
        0
    } else {
        (64 - (x - 1).leading_zeros()) as usize
    }
}

/// `⌊log2 x⌋` for `x >= 1`.
pub(crate) fn floor_log2(x: u64) -> usize {
    debug_assert!(x >= 1);
    63 - x.leading_zeros() as usize
}

fn bits_for(value: u64) -> usize {
    ceil_log2(value + 1).max(1)
}

impl RegisterLayout {
    /// Register plan for `instance`, with no capacity check.
    ///
    /// Binary mode sizes the sum register by the arc count,
    /// `ε = ⌊log2 |A|⌋ + 1`. General mode uses
    /// `ε = ⌈log2(1 + Σ_a max h_a)⌉`, which can never overflow.
    pub fn plan(instance: &NscInstance) -> Result<Self> {
        let arcs = instance.num_arcs();
        if arcs == 0 {
            return Err(Error::structure("layout needs at least one arc"));
        }
        let bits_per_node = ceil_log2(instance.cycle_length() as u64);
        let (delay_width, sum_width) = match instance.mode() {
            Mode::Binary => (1, floor_log2(arcs as u64) + 1),
            Mode::General => {
                let max = instance
                    .delays()
                    .iter()
                    .map(EdgeDelay::max)
                    .max()
                    .unwrap_or(0);
                (bits_for(max as u64), bits_for(instance.max_total_delay()))
            }
        };
        let mut next = 0usize;
        let mut take = |w: usize| {
            let r = next..next + w;
            next += w;
            r
        };
        let node_regs = (0..instance.num_nodes())
            .map(|_| take(bits_per_node))
            .collect();
        let delay_regs = (0..arcs).map(|_| take(delay_width)).collect();
        let sum_reg = take(sum_width);
        let pad_reg = take(sum_width);
        let carry = take(1).start;
        let flag = take(1).start;
        let cmp_ancilla = take(sum_width - 1);
        Ok(RegisterLayout {
            bits_per_node,
            node_regs,
            delay_regs,
            sum_reg,
            pad_reg,
            carry,
            flag,
            cmp_ancilla,
            total_qubits: next,
        })
    }

    pub fn node_qubits(&self) -> Vec<usize> {
        self.node_regs.iter().flat_map(|r| r.clone()).collect()
    }

    /// Every qubit that must return to |0⟩ after the oracle.
    pub fn ancilla_qubits(&self) -> Vec<usize> {
        let first = self.node_regs.last().map_or(0, |r| r.end);
        (first..self.total_qubits).collect()
    }

    pub fn delay_width(&self) -> usize {
        self.delay_regs.first().map_or(0, |r| r.len())
    }

    pub fn sum_width(&self) -> usize {
        self.sum_reg.len()
    }

    pub fn check_capacity(&self) -> Result<()> {
        if self.total_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                backend: "gate-level backend",
                required: self.total_qubits as u64,
                limit: MAX_QUBITS as u64,
            });
        }
        Ok(())
    }
}

/// Capacity-checked layout for the gate-level backend.
pub fn layout(instance: &NscInstance) -> Result<RegisterLayout> {
    let l = RegisterLayout::plan(instance)?;
    l.check_capacity()?;
    Ok(l)
}

/// Threshold for the `≤ K` comparator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComparatorSpec {
    threshold: u64,
    width: usize,
}

impl ComparatorSpec {
    pub fn new(threshold: u64, width: usize) -> Result<Self> {
        if width == 0 || width >= 64 {
            return Err(Error::Width(format!(
                "comparator width {width} unsupported"
            )));
        }
        if threshold >= 1u64 << width {
            return Err(Error::Width(format!(
                "threshold {threshold} not representable in {width} bits"
            )));
        }
        Ok(ComparatorSpec { threshold, width })
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

pub fn hadamard_layer(num_qubits: usize, qubits: &[usize]) -> Result<QuantumCircuit> {
    QuantumCircuit::from_gates(num_qubits, qubits.iter().map(|&q| Gate::H(q)).collect())
}

/// Controls selecting `value` on the little-endian register `reg`.
fn value_controls(reg: &Range<usize>, value: u64) -> impl Iterator<Item = Control> + '_ {
    reg.clone()
        .enumerate()
        .map(move |(b, q)| Control::when(q, (value >> b) & 1 == 1))
}

/// XOR-load arc `edge`'s delay `h((μ_i − μ_j) mod C)` into its delay register.
///
/// - Toffoli congestion edges: X-conjugate the node qubits whose required
///   value is 0, then one CCX.
/// - Binary periodic tables: `(μ_i − μ_j) mod 2 = μ_i ⊕ μ_j`, so two CNOTs
///   load the difference and an X fixes `h = [1, 0]`; constant tables need
///   at most one X.
/// - General tables: a lookup with one multi-controlled X per set bit of
///   `h` for each of the `C²` offset pairs. Requires `C = 2^n`.
pub fn delay_oracle_for_edge(
    instance: &NscInstance,
    edge: usize,
    layout: &RegisterLayout,
) -> Result<QuantumCircuit> {
    let &(i, j) = instance
        .graph()
        .arcs()
        .get(edge)
        .ok_or_else(|| Error::structure(format!("no arc {edge}")))?;
    let ri = &layout.node_regs[i];
    let rj = &layout.node_regs[j];
    let rd = &layout.delay_regs[edge];
    let width = rd.len();
    let mut c = QuantumCircuit::new(layout.total_qubits);
    let delay = &instance.delays()[edge];
    if delay.max() as u64 >= 1u64 << width {
        return Err(Error::Encoding(format!(
            "arc {edge}: delay {} does not fit {width} bit(s)",
            delay.max()
        )));
    }
    match delay {
        EdgeDelay::Congestion { from, to } => {
            let (qi, qj) = (ri.start, rj.start);
            let flips: Vec<usize> = [(qi, *from), (qj, *to)]
                .into_iter()
                .filter(|&(_, v)| v == 0)
                .map(|(q, _)| q)
                .collect();
            for &q in &flips {
                c.push(Gate::X(q))?;
            }
            c.push(Gate::Ccx {
                controls: [qi, qj],
                target: rd.start,
            })?;
            for &q in &flips {
                c.push(Gate::X(q))?;
            }
        }
        EdgeDelay::Periodic(table) if instance.cycle_length() == 2 && width == 1 => {
            let (same, differ) = (table.values()[0], table.values()[1]);
            let d = rd.start;
            if same != differ {
                c.push(Gate::Cnot {
                    control: ri.start,
                    target: d,
                })?;
                c.push(Gate::Cnot {
                    control: rj.start,
                    target: d,
                })?;
            }
            if same == 1 {
                c.push(Gate::X(d))?;
            }
        }
        EdgeDelay::Periodic(table) => {
            let cl = instance.cycle_length();
            if !cl.is_power_of_two() {
                return Err(Error::domain(format!(
                    "gate-level lookup needs a power-of-two cycle length, got {cl}"
                )));
            }
            for u in 0..cl as u64 {
                for v in 0..cl as u64 {
                    let h = table.delay(u as i64 - v as i64) as u64;
                    for (b, target) in rd.clone().enumerate() {
                        if (h >> b) & 1 == 1 {
                            let controls =
                                value_controls(ri, u).chain(value_controls(rj, v)).collect();
                            c.push(Gate::Mcx { controls, target })?;
                        }
                    }
                }
            }
        }
    }
    Ok(c)
}

/// `sum ← sum + delay` over the `sum_reg ++ [carry]` register.
///
/// For each delay bit `j` this is a controlled increment of the sum bits
/// from `j` upwards: a half-adder chain written top-down so every MCX reads
/// lower bits before they change. The delay register is left unchanged.
pub fn add_into_sum(
    num_qubits: usize,
    delay_reg: &Range<usize>,
    sum_reg: &Range<usize>,
    carry: usize,
) -> Result<QuantumCircuit> {
    if delay_reg.len() > sum_reg.len() {
        return Err(Error::Width(format!(
            "{}-bit delay cannot be added into a {}-bit sum",
            delay_reg.len(),
            sum_reg.len()
        )));
    }
    let acc: Vec<usize> = sum_reg.clone().chain(std::iter::once(carry)).collect();
    let mut c = QuantumCircuit::new(num_qubits);
    for (j, d) in delay_reg.clone().enumerate() {
        for t in (j..acc.len()).rev() {
            let controls = std::iter::once(Control::on(d))
                .chain(acc[j..t].iter().map(|&q| Control::on(q)))
                .collect();
            c.push(Gate::Mcx {
                controls,
                target: acc[t],
            })?;
        }
    }
    Ok(c)
}

/// `flag ← flag ⊕ [sum ≤ K]`, restoring `sum_reg` and `cmp_ancilla`.
///
/// `sum ≤ K` iff adding the constant `2^ε − (K + 1)` to `sum` produces no
/// carry out of bit `ε − 1`. The carries of that constant addition ripple
/// through the work bits (`carry_{i+1}` is `s_i ∨ carry_i` where the constant
/// bit is 1 and `s_i ∧ carry_i` where it is 0), the last one lands in the
/// flag, the flag is negated, and the work bits are uncomputed.
pub fn comparator_leq(
    num_qubits: usize,
    sum_reg: &Range<usize>,
    spec: ComparatorSpec,
    flag: usize,
    cmp_ancilla: &Range<usize>,
) -> Result<QuantumCircuit> {
    let width = sum_reg.len();
    if spec.width() != width {
        return Err(Error::Width(format!(
            "comparator spec width {} vs sum register width {width}",
            spec.width()
        )));
    }
    if cmp_ancilla.len() + 1 < width {
        return Err(Error::Width(format!(
            "comparator on {width} bits needs {} work qubits, got {}",
            width - 1,
            cmp_ancilla.len()
        )));
    }
    let constant = (1u64 << width) - (spec.threshold() + 1);
    let s: Vec<usize> = sum_reg.clone().collect();
    let work: Vec<usize> = cmp_ancilla.clone().take(width - 1).collect();

    let mut ripple = QuantumCircuit::new(num_qubits);
    for i in 0..width - 1 {
        push_carry(&mut ripple, i, constant, &s, &work, work[i])?;
    }
    let mut c = ripple.clone();
    push_carry(&mut c, width - 1, constant, &s, &work, flag)?;
    c.push(Gate::X(flag))?;
    c.append(&ripple.inverse())?;
    Ok(c)
}

fn push_carry(
    c: &mut QuantumCircuit,
    i: usize,
    constant: u64,
    s: &[usize],
    work: &[usize],
    target: usize,
) -> Result<()> {
    let bit = (constant >> i) & 1 == 1;
    if i == 0 {
        if bit {
            c.push(Gate::Cnot {
                control: s[0],
                target,
            })?;
        }
        return Ok(());
    }
    let prev = work[i - 1];
    if bit {
        c.push(Gate::X(target))?;
        c.push(Gate::Mcx {
            controls: vec![Control::off(s[i]), Control::off(prev)],
            target,
        })?;
    } else {
        c.push(Gate::Ccx {
            controls: [s[i], prev],
            target,
        })?;
    }
    Ok(())
}

/// Reflection about the uniform state on `qubits`: H, X, MCZ, X, H.
///
/// The circuit equals `I − 2|u⟩⟨u|`, i.e. `2|u⟩⟨u| − I` up to a global −1.
pub fn diffuser(num_qubits: usize, qubits: &[usize]) -> Result<QuantumCircuit> {
    let (&last, rest) = qubits
        .split_last()
        .ok_or_else(|| Error::structure("diffuser needs at least one qubit"))?;
    let mut c = hadamard_layer(num_qubits, qubits)?;
    for &q in qubits {
        c.push(Gate::X(q))?;
    }
    c.push(Gate::Mcz {
        controls: rest.iter().map(|&q| Control::on(q)).collect(),
        target: last,
    })?;
    for &q in qubits {
        c.push(Gate::X(q))?;
    }
    c.append(&hadamard_layer(num_qubits, qubits)?)?;
    Ok(c)
}

fn push_swap(c: &mut QuantumCircuit, a: usize, b: usize) -> Result<()> {
    c.push(Gate::Cnot {
        control: a,
        target: b,
    })?;
    c.push(Gate::Cnot {
        control: b,
        target: a,
    })?;
    c.push(Gate::Cnot {
        control: a,
        target: b,
    })
}

/// Quantum Fourier transform on the little-endian register `qubits`:
/// `|x⟩ ↦ 2^{-t/2} Σ_y e^{2πi·xy/2^t} |y⟩`.
pub fn qft(num_qubits: usize, qubits: &[usize]) -> Result<QuantumCircuit> {
    if qubits.is_empty() {
        return Err(Error::structure("QFT needs at least one qubit"));
    }
    let t = qubits.len();
    let mut c = QuantumCircuit::new(num_qubits);
    for j in (0..t).rev() {
        c.push(Gate::H(qubits[j]))?;
        for k in (0..j).rev() {
            let angle = PI / (1u64 << (j - k)) as f64;
            c.push(Gate::Cp {
                control: qubits[k],
                target: qubits[j],
                angle,
            })?;
        }
    }
    for k in 0..t / 2 {
        push_swap(&mut c, qubits[k], qubits[t - 1 - k])?;
    }
    Ok(c)
}

pub fn inverse_qft(num_qubits: usize, qubits: &[usize]) -> Result<QuantumCircuit> {
    Ok(qft(num_qubits, qubits)?.inverse())
}
