//! Seeded random instances: `n` nodes, `n + 1` edges.
//!
//! The graph is a uniform random labeled tree decoded from a Prüfer
//! sequence, plus two extra edges drawn uniformly from the non-tree pairs.
//! Each undirected edge becomes the arc `(low, high)`.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;

use super::{EdgeDelay, Mode, NetworkGraph, NscInstance, PeriodicDelayTable};
use crate::rng::{seeded, SimRng};
use crate::{Error, Result};

/// How delay functions are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    /// `C = 2`; per arc `h(0), h(1)` are independent fair bits.
    Binary,
    /// `C = 2`; per arc one congestion cell `(a, b)` uniform over `{0,1}²`.
    Toffoli,
    /// Delays uniform in `0..=max_delay` for every difference.
    General { cycle_length: usize, max_delay: u32 },
}

/// Default threshold for generated instances.
pub const DEFAULT_THRESHOLD: u64 = 1;

pub(crate) fn prufer_tree(n: usize, rng: &mut SimRng) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = leaves.pop_first().expect("a Prüfer step always has a leaf");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}

pub fn random_instance(n: usize, seed: u64, mode: GenMode) -> Result<NscInstance> {
    if n < 4 {
        return Err(Error::domain(format!(
            "random instances need at least 4 nodes to hold n + 1 distinct edges, got {n}"
        )));
    }
    let mut rng = seeded(seed);
    let mut edges = prufer_tree(n, &mut rng);
    let present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|e| !present.contains(e))
        .collect();
    for _ in 0..2 {
        let pick = rng.gen_range(0..candidates.len());
        edges.push(candidates.swap_remove(pick));
    }
    edges.sort_unstable();

    let (cycle_length, inst_mode) = match mode {
        GenMode::Binary | GenMode::Toffoli => (2, Mode::Binary),
        GenMode::General { cycle_length, .. } => (cycle_length, Mode::General),
    };
    if cycle_length < 2 {
        return Err(Error::domain("cycle length must be at least 2"));
    }
    let delays = edges
        .iter()
        .map(|_| match mode {
            GenMode::Binary => {
                let values = vec![rng.gen_range(0..=1), rng.gen_range(0..=1)];
                EdgeDelay::Periodic(PeriodicDelayTable { values })
            }
            GenMode::Toffoli => EdgeDelay::Congestion {
                from: rng.gen_range(0..=1),
                to: rng.gen_range(0..=1),
            },
            GenMode::General { max_delay, .. } => {
                let values = (0..cycle_length)
                    .map(|_| rng.gen_range(0..=max_delay))
                    .collect();
                EdgeDelay::Periodic(PeriodicDelayTable { values })
            }
        })
        .collect();
    let graph = NetworkGraph::new(n, edges)?;
    Ok(
        NscInstance::new(graph, cycle_length, delays, DEFAULT_THRESHOLD, inst_mode)?
            .with_seed(Some(seed)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_nodes_five_edges() {
        let inst = random_instance(4, 0, GenMode::Binary).unwrap();
        assert_eq!(inst.num_nodes(), 4);
        assert_eq!(inst.num_arcs(), 5);
    }

    #[test]
    fn deterministic() {
        for mode in [
            GenMode::Binary,
            GenMode::Toffoli,
            GenMode::General {
                cycle_length: 4,
                max_delay: 3,
            },
        ] {
            assert_eq!(
                random_instance(7, 99, mode).unwrap(),
                random_instance(7, 99, mode).unwrap()
            );
        }
    }

    #[test]
    fn ten_nodes_connected_distinct() {
        for seed in 0..100 {
            let inst = random_instance(10, seed, GenMode::Binary).unwrap();
            let g = inst.graph();
            assert!(g.is_connected(), "seed {seed}");
            let distinct: HashSet<_> = g.arcs().iter().collect();
            assert_eq!(distinct.len(), 11);
            assert!(g.arcs().iter().all(|&(i, j)| i < j));
        }
    }

    #[test]
    fn too_small() {
        assert!(matches!(
            random_instance(3, 0, GenMode::Binary),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn prufer_trees_are_uniform_on_four_labels() {
        // Cayley: 4^2 = 16 labeled trees on 4 vertices, each with probability 1/16.
        let mut rng = seeded(5);
        let mut counts = std::collections::HashMap::new();
        let draws = 16_000;
        for _ in 0..draws {
            let mut t = prufer_tree(4, &mut rng);
            t.sort_unstable();
            *counts.entry(t).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 16);
        let sigma = (draws as f64 * (1.0 / 16.0) * (15.0 / 16.0)).sqrt();
        for c in counts.values() {
            assert!((*c as f64 - 1000.0).abs() < 5.0 * sigma);
        }
    }
}
