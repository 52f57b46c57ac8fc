//! Grover search and quantum counting on top of the statevector simulator.

mod counting;
mod oracle;
mod search;

pub use counting::{
    counting_error_bound, quantum_count, quantum_count_marked, robust_decision_quantum,
    CountEstimate, CountVerdict, QuantumRobustVerdict, DEFAULT_COUNT_SHOTS, MAX_COUNTING_QUBITS,
};
pub use oracle::{build_oracle, OracleCircuit, OracleProbe};
pub use search::{
    analytic_success, fast_amplitudes, gate_level_iterates, gate_level_node_amplitudes,
    grover_circuit, grover_search_fast, grover_search_gate_level, grover_search_noisy, Backend,
    SampledOutcome, SearchOutcome, MAX_ITERATIONS,
};
