use crate::{Error, Result};

/// A control condition: the gate fires only when `qubit` reads `value`.
///
/// `value == false` is a negated (open) control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control { qubit, value: true }
    }

    pub fn off(qubit: usize) -> Self {
        Control {
            qubit,
            value: false,
        }
    }

    pub fn when(qubit: usize, value: bool) -> Self {
        Control { qubit, value }
    }
}

/// The simulator's gate set. Every gate is a permutation, a phase, or a
/// Hadamard, which is all the search and counting circuits need.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Ccx {
        controls: [usize; 2],
        target: usize,
    },
    /// Multi-controlled X with arbitrary (possibly negated) controls. With no
    /// controls it is a plain X.
    Mcx {
        controls: Vec<Control>,
        target: usize,
    },
    /// Multi-controlled Z: phase −1 when every control is satisfied and the
    /// target is |1⟩.
    Mcz {
        controls: Vec<Control>,
        target: usize,
    },
    /// Controlled phase `diag(1, 1, 1, e^{iθ})`.
    Cp {
        control: usize,
        target: usize,
        angle: f64,
    },
}

impl Gate {
    pub fn controls(&self) -> Vec<Control> {
        match self {
            Gate::H(_) | Gate::X(_) | Gate::Z(_) => Vec::new(),
            Gate::Cnot { control, .. } | Gate::Cp { control, .. } => vec![Control::on(*control)],
            Gate::Ccx { controls, .. } => controls.iter().map(|&q| Control::on(q)).collect(),
            Gate::Mcx { controls, .. } | Gate::Mcz { controls, .. } => controls.clone(),
        }
    }

    pub fn target(&self) -> usize {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => *q,
            Gate::Cnot { target, .. }
            | Gate::Ccx { target, .. }
            | Gate::Mcx { target, .. }
            | Gate::Mcz { target, .. }
            | Gate::Cp { target, .. } => *target,
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.controls().iter().map(|c| c.qubit).collect();
        q.push(self.target());
        q
    }

    pub fn arity(&self) -> usize {
        self.controls().len() + 1
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Cp {
                control,
                target,
                angle,
            } => Gate::Cp {
                control: *control,
                target: *target,
                angle: -angle,
            },
            g => g.clone(),
        }
    }

    /// The same gate with every qubit index passed through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        let cs = |cs: &[Control]| {
            cs.iter()
                .map(|c| Control::when(f(c.qubit), c.value))
                .collect()
        };
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::Ccx { controls, target } => Gate::Ccx {
                controls: [f(controls[0]), f(controls[1])],
                target: f(*target),
            },
            Gate::Mcx { controls, target } => Gate::Mcx {
                controls: cs(controls),
                target: f(*target),
            },
            Gate::Mcz { controls, target } => Gate::Mcz {
                controls: cs(controls),
                target: f(*target),
            },
            Gate::Cp {
                control,
                target,
                angle,
            } => Gate::Cp {
                control: f(*control),
                target: f(*target),
                angle: *angle,
            },
        }
    }

    /// True for gates that map basis states to basis states up to a phase.
    pub fn is_classical(&self) -> bool {
        !matches!(self, Gate::H(_))
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::structure(format!(
                    "{self:?} addresses qubit {q} on a {num_qubits}-qubit register"
                )));
            }
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(Error::structure(format!(
                "{self:?} repeats a qubit across controls and target"
            )));
        }
        if let Gate::Cp { angle, .. } = self {
            if !angle.is_finite() {
                return Err(Error::structure("controlled phase with non-finite angle"));
            }
        }
        Ok(())
    }
}
