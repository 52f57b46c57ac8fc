//! The classical NSC problem.
//!
//! A network is a list of arcs `(i, j)` over `|V|` intersections. Each arc
//! carries a delay function of the two endpoint offsets; the objective is
//! the total delay and the decision question is whether some offset
//! assignment keeps it at or below a threshold `K`.
//!
//! Offset assignments are indexed mixed-radix: `index = Σ μ_i · C^i`. When
//! `C = 2^n` this is exactly the basis index of the node registers in the
//! gate-level circuit (node `i` owns bits `n·i .. n·i + n`).

mod generate;
mod io;

pub use generate::{random_instance, GenMode, DEFAULT_THRESHOLD};

use rand::Rng;
use rayon::prelude::*;

use crate::rng::seeded;
use crate::{Error, Result};

/// Largest search space `C^|V|` that is enumerated exhaustively.
pub const ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkGraph {
    num_nodes: usize,
    arcs: Vec<(usize, usize)>,
}

impl NetworkGraph {
    pub fn new(num_nodes: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Instance("graph has no arcs".into()));
        }
        for &(i, j) in &arcs {
            if i >= num_nodes || j >= num_nodes {
                return Err(Error::Instance(format!(
                    "arc ({i}, {j}) references a node outside 0..{num_nodes}"
                )));
            }
            if i == j {
                return Err(Error::Instance(format!("self-loop on node {i}")));
            }
        }
        Ok(NetworkGraph { num_nodes, arcs })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(i, j) in &self.arcs {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `h(x)` for `x = (μ_i − μ_j) mod C`; the table length is the cycle length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicDelayTable {
    values: Vec<u32>,
}

impl PeriodicDelayTable {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Instance(format!(
                "delay table of length {} (cycle length must be >= 2)",
                values.len()
            )));
        }
        Ok(PeriodicDelayTable { values })
    }

    pub fn cycle_length(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Delay at any integer offset difference; reduced modulo the cycle.
    pub fn delay(&self, diff: i64) -> u32 {
        self.values[diff.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn max(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

/// Delay model of one arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeDelay {
    /// Periodic function of the offset difference.
    Periodic(PeriodicDelayTable),
    /// Binary congestion pattern: delay 1 iff `μ_i = from ∧ μ_j = to`.
    /// Realized as a single Toffoli with X-conjugated negated controls.
    Congestion { from: u8, to: u8 },
}

impl EdgeDelay {
    pub fn delay(&self, mu_i: u32, mu_j: u32) -> u32 {
        match self {
            EdgeDelay::Periodic(t) => t.delay(mu_i as i64 - mu_j as i64),
            EdgeDelay::Congestion { from, to } => {
                (mu_i == *from as u32 && mu_j == *to as u32) as u32
            }
        }
    }

    pub fn max(&self) -> u32 {
        match self {
            EdgeDelay::Periodic(t) => t.max(),
            EdgeDelay::Congestion { .. } => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `C = 2`, one delay bit per arc.
    Binary,
    /// Any `C >= 2`, multi-bit delays.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NscInstance {
    graph: NetworkGraph,
    cycle_length: usize,
    delays: Vec<EdgeDelay>,
    threshold: u64,
    mode: Mode,
    seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetAssignment(Vec<u32>);

impl OffsetAssignment {
    pub fn new(offsets: Vec<u32>) -> Self {
        OffsetAssignment(offsets)
    }

    pub fn offsets(&self) -> &[u32] {
        &self.0
    }

    /// Decode a mixed-radix search-space index.
    pub fn from_index(mut index: u64, cycle_length: usize, num_nodes: usize) -> Self {
        let c = cycle_length as u64;
        let offsets = (0..num_nodes)
            .map(|_| {
                let d = (index % c) as u32;
                index /= c;
                d
            })
            .collect();
        OffsetAssignment(offsets)
    }

    pub fn index(&self, cycle_length: usize) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, &m| acc * cycle_length as u64 + m as u64)
    }
}

/// Required feasible-set size, given directly or as a fraction of `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RobustParams {
    Delta(u64),
    Alpha(f64),
}

impl RobustParams {
    /// `δ`, with `δ = ⌈αN⌉` for the fractional form.
    pub fn delta(&self, search_space: u64) -> Result<u64> {
        let delta = match *self {
            RobustParams::Delta(d) => d,
            RobustParams::Alpha(a) => {
                if !(a > 0.0 && a <= 1.0) {
                    return Err(Error::domain(format!("alpha {a} outside (0, 1]")));
                }
                // guard against 0.1 * 10 = 1.0000000000000002 style overshoot
                let raw = a * search_space as f64;
                let rounded = raw.round();
                if (raw - rounded).abs() < 1e-9 * raw.max(1.0) {
                    rounded as u64
                } else {
                    raw.ceil() as u64
                }
            }
        };
        if delta == 0 {
            return Err(Error::domain("delta must be at least 1"));
        }
        if delta > search_space {
            return Err(Error::domain(format!(
                "delta {delta} exceeds the search space {search_space}"
            )));
        }
        Ok(delta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibleSet {
    /// Search-space indices with κ = 1, ascending.
    pub indices: Vec<u64>,
    pub search_space: u64,
}

impl FeasibleSet {
    pub fn count(&self) -> u64 {
        self.indices.len() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RobustVerdict {
    pub holds: bool,
    pub feasible_count: u64,
    pub delta: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingResult {
    Found { trials: u64 },
    Exhausted { trials: u64 },
}

impl NscInstance {
    pub fn new(
        graph: NetworkGraph,
        cycle_length: usize,
        delays: Vec<EdgeDelay>,
        threshold: u64,
        mode: Mode,
    ) -> Result<Self> {
        if cycle_length < 2 {
            return Err(Error::Instance(format!("cycle length {cycle_length} < 2")));
        }
        if delays.len() != graph.num_arcs() {
            return Err(Error::Instance(format!(
                "{} delay functions for {} arcs",
                delays.len(),
                graph.num_arcs()
            )));
        }
        for (a, d) in delays.iter().enumerate() {
            match d {
                EdgeDelay::Periodic(t) => {
                    if t.cycle_length() != cycle_length {
                        return Err(Error::Instance(format!(
                            "arc {a}: table length {} differs from cycle length {cycle_length}",
                            t.cycle_length()
                        )));
                    }
                }
                EdgeDelay::Congestion { from, to } => {
                    if mode != Mode::Binary || *from > 1 || *to > 1 {
                        return Err(Error::Instance(format!(
                            "arc {a}: congestion patterns need binary mode and offsets in {{0, 1}}"
                        )));
                    }
                }
            }
            if mode == Mode::Binary && d.max() > 1 {
                return Err(Error::Instance(format!(
                    "arc {a}: binary mode allows delays 0 and 1 only"
                )));
            }
        }
        if mode == Mode::Binary && cycle_length != 2 {
            return Err(Error::Instance(
                "binary mode requires cycle length 2".into(),
            ));
        }
        Ok(NscInstance {
            graph,
            cycle_length,
            delays,
            threshold,
            mode,
            seed: None,
        })
    }

    pub fn with_threshold(mut self, threshold: u64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn graph(&self) -> &NetworkGraph {
        &self.graph
    }

    pub fn num_nodes(&self) -> usize {
        self.graph.num_nodes()
    }

    pub fn num_arcs(&self) -> usize {
        self.graph.num_arcs()
    }

    pub fn cycle_length(&self) -> usize {
        self.cycle_length
    }

    pub fn delays(&self) -> &[EdgeDelay] {
        &self.delays
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `N = C^|V|`, saturating at `u64::MAX`.
    pub fn search_space(&self) -> u64 {
        (0..self.num_nodes()).fold(1u64, |acc, _| acc.saturating_mul(self.cycle_length as u64))
    }

    /// Largest achievable total delay, `Σ_a max h_a`.
    pub fn max_total_delay(&self) -> u64 {
        self.delays.iter().map(|d| d.max() as u64).sum()
    }

    /// True when every arc's delay depends only on the offset difference.
    pub fn is_shift_invariant(&self) -> bool {
        self.delays
            .iter()
            .all(|d| matches!(d, EdgeDelay::Periodic(_)))
    }

    fn check_assignment(&self, mu: &OffsetAssignment) -> Result<()> {
        if mu.0.len() != self.num_nodes() {
            return Err(Error::domain(format!(
                "assignment has {} offsets for {} nodes",
                mu.0.len(),
                self.num_nodes()
            )));
        }
        if let Some((i, m)) =
            mu.0.iter()
                .enumerate()
                .find(|(_, &m)| m as usize >= self.cycle_length)
        {
            return Err(Error::domain(format!(
                "offset μ_{i} = {m} outside [0, {})",
                self.cycle_length
            )));
        }
        Ok(())
    }

    /// Per-arc delays `h_a(μ_i − μ_j)` in arc order.
    pub fn arc_delays(&self, mu: &OffsetAssignment) -> Result<Vec<u32>> {
        self.check_assignment(mu)?;
        Ok(self.arc_delays_unchecked(&mu.0).collect())
    }

    fn arc_delays_unchecked<'a>(&'a self, mu: &'a [u32]) -> impl Iterator<Item = u32> + 'a {
        self.graph
            .arcs
            .iter()
            .zip(&self.delays)
            .map(move |(&(i, j), d)| d.delay(mu[i], mu[j]))
    }

    pub fn total_delay(&self, mu: &OffsetAssignment) -> Result<u64> {
        self.check_assignment(mu)?;
        Ok(self.arc_delays_unchecked(&mu.0).map(u64::from).sum())
    }

    /// Feasibility: 1 iff the total delay is at most `K`.
    pub fn kappa(&self, mu: &OffsetAssignment) -> Result<bool> {
        Ok(self.total_delay(mu)? <= self.threshold)
    }

    fn kappa_at(&self, index: u64, scratch: &mut Vec<u32>) -> bool {
        scratch.clear();
        let c = self.cycle_length as u64;
        let mut rest = index;
        for _ in 0..self.num_nodes() {
            scratch.push((rest % c) as u32);
            rest /= c;
        }
        let total: u64 = self.arc_delays_unchecked(scratch).map(u64::from).sum();
        total <= self.threshold
    }

    fn check_enumerable(&self) -> Result<u64> {
        let n = self.search_space();
        if n > ENUMERATION_CAP {
            return Err(Error::Capacity {
                backend: "exhaustive enumeration",
                required: n,
                limit: ENUMERATION_CAP,
            });
        }
        Ok(n)
    }

    /// κ for every index of the search space.
    pub fn kappa_table(&self) -> Result<Vec<bool>> {
        let n = self.check_enumerable()?;
        const CHUNK: usize = 1 << 14;
        let mut out = vec![false; n as usize];
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let mut scratch = Vec::with_capacity(self.num_nodes());
                let base = (c * CHUNK) as u64;
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = self.kappa_at(base + k as u64, &mut scratch);
                }
            });
        Ok(out)
    }

    /// Exhaustive enumeration of the feasible set.
    pub fn feasible_set(&self) -> Result<FeasibleSet> {
        let table = self.kappa_table()?;
        Ok(FeasibleSet {
            search_space: table.len() as u64,
            indices: table
                .iter()
                .enumerate()
                .filter(|(_, &k)| k)
                .map(|(i, _)| i as u64)
                .collect(),
        })
    }

    /// Exact robust decision: holds iff `|S| >= δ`.
    pub fn robust_decision_classical(&self, params: RobustParams) -> Result<RobustVerdict> {
        let set = self.feasible_set()?;
        let delta = params.delta(set.search_space)?;
        Ok(RobustVerdict {
            holds: set.count() >= delta,
            feasible_count: set.count(),
            delta,
        })
    }

    /// Draw uniform assignments until one is feasible.
    pub fn classical_random_sampling(&self, seed: u64, max_trials: u64) -> Result<SamplingResult> {
        if max_trials == 0 {
            return Err(Error::domain("max_trials must be at least 1"));
        }
        let n = self.search_space();
        let mut rng = seeded(seed);
        let mut scratch = Vec::with_capacity(self.num_nodes());
        for trial in 1..=max_trials {
            let index = rng.gen_range(0..n);
            if self.kappa_at(index, &mut scratch) {
                return Ok(SamplingResult::Found { trials: trial });
            }
        }
        Ok(SamplingResult::Exhausted { trials: max_trials })
    }
}
