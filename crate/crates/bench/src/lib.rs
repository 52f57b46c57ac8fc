//! Experiment harness around `nsc-grover`: instance generation, single
//! runs, sweeps, counting, resource reports and the verification suite.

pub mod cli;
pub mod svg;
pub mod sweep;
