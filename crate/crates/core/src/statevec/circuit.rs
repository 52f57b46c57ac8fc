use super::gate::Gate;
use crate::{Error, Result};
use num_complex::Complex64;

/// An ordered gate list over a fixed number of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

/// Where a basis state lands under a classical (H-free) circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisImage {
    pub index: u64,
    pub phase: Complex64,
}

impl QuantumCircuit {
    pub fn new(num_qubits: usize) -> Self {
        QuantumCircuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = QuantumCircuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn append(&mut self, other: &QuantumCircuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::structure(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Reversed gate order, each gate replaced by its inverse.
    pub fn inverse(&self) -> QuantumCircuit {
        QuantumCircuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Drop qubits no gate touches. Returns the narrower circuit and, for
    /// each of its qubits, the original index (ascending). Untouched qubits
    /// stay in their initial state, so simulating the compact circuit from
    /// |0…0⟩ loses nothing.
    pub fn compact(&self) -> (QuantumCircuit, Vec<usize>) {
        let mut used = vec![false; self.num_qubits];
        for g in &self.gates {
            for q in g.qubits() {
                used[q] = true;
            }
        }
        let kept: Vec<usize> = (0..self.num_qubits).filter(|&q| used[q]).collect();
        let mut new_index = vec![usize::MAX; self.num_qubits];
        for (i, &q) in kept.iter().enumerate() {
            new_index[q] = i;
        }
        let gates = self
            .gates
            .iter()
            .map(|g| g.map_qubits(|q| new_index[q]))
            .collect();
        (
            QuantumCircuit {
                num_qubits: kept.len(),
                gates,
            },
            kept,
        )
    }

    /// Gates acting on two or more qubits.
    pub fn multi_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.arity() >= 2).count()
    }

    /// ASAP layer count: each gate starts after the latest gate sharing
    /// one of its qubits.
    pub fn depth(&self) -> usize {
        let mut frontier = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let qs = g.qubits();
            let layer = qs.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
            for q in qs {
                frontier[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Classical replay: push one computational basis state through the
    /// circuit, tracking the accumulated phase. Fails on a Hadamard.
    pub fn replay_basis(&self, index: u64) -> Result<BasisImage> {
        if self.num_qubits < 64 && index >> self.num_qubits != 0 {
            return Err(Error::structure(format!(
                "basis index {index} outside a {}-qubit register",
                self.num_qubits
            )));
        }
        let mut bits = index;
        let mut phase = Complex64::new(1.0, 0.0);
        for g in &self.gates {
            let fires = g
                .controls()
                .iter()
                .all(|c| ((bits >> c.qubit) & 1 == 1) == c.value);
            let t = g.target();
            match g {
                Gate::H(_) => {
                    return Err(Error::structure(
                        "classical replay cannot pass through a Hadamard",
                    ))
                }
                Gate::X(_) | Gate::Cnot { .. } | Gate::Ccx { .. } | Gate::Mcx { .. } => {
                    if fires {
                        bits ^= 1 << t;
                    }
                }
                Gate::Z(_) | Gate::Mcz { .. } => {
                    if fires && (bits >> t) & 1 == 1 {
                        phase = -phase;
                    }
                }
                Gate::Cp { angle, .. } => {
                    if fires && (bits >> t) & 1 == 1 {
                        phase *= Complex64::from_polar(1.0, *angle);
                    }
                }
            }
        }
        Ok(BasisImage { index: bits, phase })
    }
}

/// Free-function form of [`QuantumCircuit::inverse`].
pub fn invert(circuit: &QuantumCircuit) -> QuantumCircuit {
    circuit.inverse()
}

#[cfg(test)]
mod tests {
    #[test]
    fn compact_drops_idle_qubits() {
        let c = QuantumCircuit::from_gates(
            5,
            vec![
                Gate::H(0),
                Gate::Ccx {
                    controls: [0, 3],
                    target: 1,
                },
            ],
        )
        .unwrap();
        let (small, kept) = c.compact();
        assert_eq!(kept, vec![0, 1, 3]);
        assert_eq!(small.num_qubits(), 3);
        assert_eq!(
            small.gates()[1],
            Gate::Ccx {
                controls: [0, 2],
                target: 1
            }
        );
    }

    use super::*;
    use crate::statevec::Control;

    #[test]
    fn invert_empty_is_empty() {
        let c = QuantumCircuit::new(3);
        assert!(invert(&c).is_empty());
    }

    #[test]
    fn invert_reverses_self_inverse_gates() {
        let c = QuantumCircuit::from_gates(
            2,
            vec![
                Gate::H(0),
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
            ],
        )
        .unwrap();
        let inv = invert(&c);
        assert_eq!(
            inv.gates(),
            &[
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
                Gate::H(0)
            ]
        );
    }

    #[test]
    fn invert_is_an_involution() {
        let c = QuantumCircuit::from_gates(
            3,
            vec![
                Gate::H(0),
                Gate::Cp {
                    control: 0,
                    target: 2,
                    angle: 0.7,
                },
                Gate::Mcx {
                    controls: vec![Control::off(1), Control::on(0)],
                    target: 2,
                },
            ],
        )
        .unwrap();
        assert_eq!(invert(&invert(&c)), c);
    }

    #[test]
    fn depth_counts_layers() {
        let c = QuantumCircuit::from_gates(
            3,
            vec![
                Gate::H(0),
                Gate::H(1),
                Gate::H(2),
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
                Gate::X(2),
            ],
        )
        .unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(c.multi_qubit_count(), 1);
    }

    #[test]
    fn replay_toffoli_truth_table() {
        let c = QuantumCircuit::from_gates(
            3,
            vec![Gate::Ccx {
                controls: [0, 1],
                target: 2,
            }],
        )
        .unwrap();
        for i in 0..8u64 {
            let expected = if i & 3 == 3 { i ^ 4 } else { i };
            assert_eq!(c.replay_basis(i).unwrap().index, expected);
        }
    }

    #[test]
    fn append_rejects_width_mismatch() {
        let mut a = QuantumCircuit::new(2);
        assert!(a.append(&QuantumCircuit::new(3)).is_err());
    }
}
