//! Parameter sweeps over generated instances.

use std::time::Instant;

use anyhow::{bail, Result};
use nsc_grover::complexity::optimal_iterations;
use nsc_grover::engine::{
    grover_search_fast, grover_search_gate_level, grover_search_noisy, Backend,
};
use nsc_grover::model::{random_instance, GenMode, NscInstance, ENUMERATION_CAP};
use nsc_grover::rng::derive_seed;
use nsc_grover::Error;
use rayon::prelude::*;
use serde::Serialize;

pub const CSV_HEADER: &str =
    "n,K,k,seed,N,M,k_paper,k_exact,success,baseline,ratio,backend,shots,noise_rate";

/// How one cell is simulated.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub backend: Backend,
    /// Sample this many shots in addition to the exact distribution.
    pub shots: Option<usize>,
    pub noise_rate: f64,
    pub trajectories: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            backend: Backend::Fast,
            shots: None,
            noise_rate: 0.0,
            trajectories: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub thresholds: Vec<u64>,
    pub iterations: Vec<usize>,
    pub seeds_per_size: usize,
    pub master_seed: u64,
    pub run: RunOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sizes: (4..=10).collect(),
            thresholds: vec![1, 2],
            iterations: vec![1, 2],
            seeds_per_size: 5,
            master_seed: 0,
            run: RunOptions::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.thresholds.is_empty() || self.iterations.is_empty() {
            bail!("node sizes, thresholds and iteration counts must all be non-empty");
        }
        if self.seeds_per_size == 0 {
            bail!("at least one seed per size is required");
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 4) {
            bail!("node size {n} is below the generator minimum of 4");
        }
        validate_run(&self.run)
    }

    pub fn cell_count(&self) -> usize {
        self.sizes.len() * self.thresholds.len() * self.iterations.len() * self.seeds_per_size
    }

    /// Instance seed for the `index`-th seed of size `n`; shared by every
    /// (K, k) cell so the curves compare the same graphs.
    pub fn instance_seed(&self, n: usize, index: usize) -> u64 {
        derive_seed(self.master_seed, (n as u64) << 32 | index as u64)
    }
}

pub fn validate_run(run: &RunOptions) -> Result<()> {
    if run.shots == Some(0) {
        bail!("shots must be at least 1");
    }
    if !(0.0..=1.0).contains(&run.noise_rate) {
        bail!("noise rate {} outside [0, 1]", run.noise_rate);
    }
    if run.noise_rate > 0.0 && run.backend != Backend::Noisy {
        bail!("a nonzero noise rate needs the noisy backend");
    }
    if run.backend == Backend::Noisy && run.trajectories == 0 {
        bail!("the noisy backend needs at least one trajectory");
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "K")]
    pub threshold: u64,
    pub k: usize,
    pub seed: u64,
    #[serde(rename = "N")]
    pub search_space: u64,
    #[serde(rename = "M")]
    pub marked: Option<u64>,
    pub k_paper: Option<usize>,
    pub k_exact: Option<usize>,
    pub success: Option<f64>,
    pub baseline: Option<f64>,
    pub ratio: Option<f64>,
    pub backend: String,
    pub shots: usize,
    pub noise_rate: f64,
    pub sampled_success: Option<f64>,
    pub wall_time_ms: f64,
}

/// Columns written to CSV: everything except timing and the sampled
/// estimate, so files are byte-stable.
#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    #[serde(rename = "K")]
    threshold: u64,
    k: usize,
    seed: u64,
    #[serde(rename = "N")]
    search_space: u64,
    #[serde(rename = "M")]
    marked: Option<u64>,
    k_paper: Option<usize>,
    k_exact: Option<usize>,
    success: Option<f64>,
    baseline: Option<f64>,
    ratio: Option<f64>,
    backend: &'a str,
    shots: usize,
    noise_rate: f64,
}

pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(CsvRow {
            n: r.n,
            threshold: r.threshold,
            k: r.k,
            seed: r.seed,
            search_space: r.search_space,
            marked: r.marked,
            k_paper: r.k_paper,
            k_exact: r.k_exact,
            success: r.success,
            baseline: r.baseline,
            ratio: r.ratio,
            backend: &r.backend,
            shots: r.shots,
            noise_rate: r.noise_rate,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Evaluate one instance at `k` iterations. Capacity failures become a
/// skipped row rather than an error.
pub fn evaluate(instance: &NscInstance, k: usize, run: &RunOptions, seed: u64) -> Result<SweepRow> {
    let start = Instant::now();
    let n_space = instance.search_space();
    let marked = if n_space <= ENUMERATION_CAP {
        Some(instance.feasible_set()?.count())
    } else {
        None
    };
    let (k_paper, k_exact) = match marked {
        Some(m) if m > 0 => {
            let ks = optimal_iterations(n_space, m)?;
            (Some(ks.k_paper), Some(ks.k_exact))
        }
        _ => (None, None),
    };
    let result = match run.backend {
        Backend::Gate => grover_search_gate_level(instance, k, run.shots, seed),
        Backend::Fast => grover_search_fast(instance, k, run.shots, seed),
        Backend::Noisy => grover_search_noisy(
            instance,
            k,
            run.noise_rate,
            run.trajectories,
            run.shots,
            seed,
        ),
    };
    let mut row = SweepRow {
        n: instance.num_nodes(),
        threshold: instance.threshold(),
        k,
        seed: instance.seed().unwrap_or(0),
        search_space: n_space,
        marked,
        k_paper,
        k_exact,
        success: None,
        baseline: None,
        ratio: None,
        backend: run.backend.to_string(),
        shots: run.shots.unwrap_or(0),
        noise_rate: run.noise_rate,
        sampled_success: None,
        wall_time_ms: 0.0,
    };
    match result {
        Ok(out) => {
            row.success = Some(out.success_probability);
            row.baseline = Some(out.baseline);
            row.ratio = out.ratio;
            row.sampled_success = out.sampled.map(|s| s.success);
        }
        Err(Error::Capacity { .. }) => row.backend = format!("{}/skipped:capacity", run.backend),
        Err(e) => return Err(e.into()),
    }
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(row)
}

/// Seed used for sampling and noise in one (instance, K, k) cell.
pub fn cell_seed(instance_seed: u64, threshold: u64, k: usize) -> u64 {
    derive_seed(instance_seed, threshold << 16 ^ k as u64)
}

/// One row per (n, K, k, seed) in that nesting order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut cells = Vec::with_capacity(config.cell_count());
    for &n in &config.sizes {
        for &threshold in &config.thresholds {
            for &k in &config.iterations {
                for s in 0..config.seeds_per_size {
                    cells.push((n, threshold, k, config.instance_seed(n, s)));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(n, threshold, k, seed)| {
            let inst = random_instance(n, seed, GenMode::Binary)?.with_threshold(threshold);
            evaluate(&inst, k, &config.run, cell_seed(seed, threshold, k))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            sizes: vec![4, 5],
            seeds_per_size: 3,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn header_and_cardinality() {
        let cfg = small();
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), cfg.cell_count());
        let csv = to_csv(&rows).unwrap();
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(csv.lines().count(), rows.len() + 1);
        assert_eq!(to_csv(&[]).unwrap().trim_end(), CSV_HEADER);
    }

    #[test]
    fn rows_are_consistent() {
        for r in run_sweep(&small()).unwrap() {
            let m = r.marked.unwrap();
            assert_eq!(r.baseline.unwrap(), m as f64 / r.search_space as f64);
            match r.ratio {
                Some(ratio) => {
                    assert!((ratio - r.success.unwrap() / r.baseline.unwrap()).abs() < 1e-12)
                }
                None => assert_eq!(m, 0),
            }
            assert_eq!(r.k_exact.is_none(), m == 0);
            let exact = nsc_grover::engine::analytic_success(r.search_space, m, r.k).unwrap();
            assert!((r.success.unwrap() - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn noise_lowers_the_mean_ratio() {
        let mean_ratio = |run: RunOptions| {
            let cfg = SweepConfig {
                sizes: vec![4],
                thresholds: vec![1],
                iterations: vec![1],
                seeds_per_size: 12,
                run,
                ..SweepConfig::default()
            };
            let ratios: Vec<f64> = run_sweep(&cfg)
                .unwrap()
                .iter()
                .filter_map(|r| r.ratio)
                .collect();
            ratios.iter().sum::<f64>() / ratios.len() as f64
        };
        let clean = mean_ratio(RunOptions::default());
        let noisy = mean_ratio(RunOptions {
            backend: Backend::Noisy,
            noise_rate: 0.02,
            trajectories: 50,
            ..RunOptions::default()
        });
        assert!(noisy < clean, "{noisy} vs {clean}");
    }

    #[test]
    fn oversized_gate_cells_are_skipped_rows() {
        let cfg = SweepConfig {
            sizes: vec![4, 8],
            thresholds: vec![1],
            iterations: vec![1],
            seeds_per_size: 1,
            run: RunOptions {
                backend: Backend::Gate,
                ..RunOptions::default()
            },
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows[0].backend, "gate");
        assert_eq!(rows[1].backend, "gate/skipped:capacity");
        assert!(rows[1].success.is_none());
        assert!(rows[1].marked.is_some());
    }

    #[test]
    fn instances_are_shared_across_threshold_and_iterations() {
        let rows = run_sweep(&small()).unwrap();
        let first: Vec<u64> = rows
            .iter()
            .filter(|r| r.threshold == 1 && r.k == 1)
            .map(|r| r.seed)
            .collect();
        let other: Vec<u64> = rows
            .iter()
            .filter(|r| r.threshold == 2 && r.k == 2)
            .map(|r| r.seed)
            .collect();
        assert_eq!(first, other);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig {
            sizes: vec![],
            ..SweepConfig::default()
        }
        .validate()
        .is_err());
        assert!(SweepConfig {
            sizes: vec![3],
            ..SweepConfig::default()
        }
        .validate()
        .is_err());
        let bad_shots = RunOptions {
            shots: Some(0),
            ..RunOptions::default()
        };
        assert!(validate_run(&bad_shots).is_err());
        let noisy_fast = RunOptions {
            noise_rate: 0.1,
            ..RunOptions::default()
        };
        assert!(validate_run(&noisy_fast).is_err());
    }
}
