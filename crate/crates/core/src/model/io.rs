//! Instance files (JSON, UTF-8).
//!
//! ```json
//! { "nodes": 4, "cycle_length": 2, "threshold": 1, "mode": "binary",
//!   "edges": [ { "i": 0, "j": 1, "table": [0, 1] },
//!              { "i": 1, "j": 2, "pattern": [1, 1] } ],
//!   "seed": 7 }
//! ```
//!
//! An edge carries either a periodic `table` of length `cycle_length` or, in
//! binary mode, a Toffoli congestion `pattern` `[a, b]`.

use serde::{Deserialize, Serialize};

use super::{EdgeDelay, Mode, NetworkGraph, NscInstance, PeriodicDelayTable};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeTag {
    Binary,
    General,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    i: usize,
    j: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pattern: Option<[u8; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    nodes: usize,
    cycle_length: usize,
    threshold: u64,
    mode: ModeTag,
    edges: Vec<EdgeRecord>,
    seed: Option<u64>,
}

impl NscInstance {
    pub fn to_json(&self) -> String {
        let record = InstanceRecord {
            nodes: self.num_nodes(),
            cycle_length: self.cycle_length,
            threshold: self.threshold,
            mode: match self.mode {
                Mode::Binary => ModeTag::Binary,
                Mode::General => ModeTag::General,
            },
            edges: self
                .graph
                .arcs()
                .iter()
                .zip(&self.delays)
                .map(|(&(i, j), d)| match d {
                    EdgeDelay::Periodic(t) => EdgeRecord {
                        i,
                        j,
                        table: Some(t.values.clone()),
                        pattern: None,
                    },
                    EdgeDelay::Congestion { from, to } => EdgeRecord {
                        i,
                        j,
                        table: None,
                        pattern: Some([*from, *to]),
                    },
                })
                .collect(),
            seed: self.seed,
        };
        let mut s =
            serde_json::to_string_pretty(&record).expect("instance records always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: InstanceRecord = serde_json::from_str(text)?;
        let mode = match record.mode {
            ModeTag::Binary => Mode::Binary,
            ModeTag::General => Mode::General,
        };
        let mut arcs = Vec::with_capacity(record.edges.len());
        let mut delays = Vec::with_capacity(record.edges.len());
        for (a, e) in record.edges.into_iter().enumerate() {
            arcs.push((e.i, e.j));
            delays.push(match (e.table, e.pattern) {
                (Some(t), None) => EdgeDelay::Periodic(PeriodicDelayTable::new(t)?),
                (None, Some([from, to])) => EdgeDelay::Congestion { from, to },
                _ => {
                    return Err(Error::Instance(format!(
                        "edge {a} must have exactly one of \"table\" or \"pattern\""
                    )))
                }
            });
        }
        let graph = NetworkGraph::new(record.nodes, arcs)?;
        Ok(
            NscInstance::new(graph, record.cycle_length, delays, record.threshold, mode)?
                .with_seed(record.seed),
        )
    }
}
