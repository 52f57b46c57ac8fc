//! Command-line interface.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nsc_grover::complexity::{oracle_cost, ResourceEstimate};
use nsc_grover::engine::{quantum_count, robust_decision_quantum, Backend, CountVerdict};
use nsc_grover::model::{random_instance, GenMode, NscInstance, RobustParams};
use nsc_grover::verify::{
    backend_agreement, default_ensemble, oracle_equivalence, uncomputation_residual,
};
use nsc_grover::Error;
use serde_json::json;

use crate::svg;
use crate::sweep::{cell_seed, evaluate, run_sweep, to_csv, validate_run, RunOptions, SweepConfig};

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nsc-bench",
    version,
    about = "Grover search experiments for signal offset coordination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated instance as JSON.
    Generate(GenerateArgs),
    /// Search one instance and print a result row.
    Run(RunArgs),
    /// Run the (n, K, k, seed) grid.
    Sweep(SweepArgs),
    /// Estimate the feasible count by quantum counting.
    Count(CountArgs),
    /// Qubit budget and gate counts of the oracle circuit.
    Resources(ResourcesArgs),
    /// Oracle, uncomputation and backend checks on the built-in ensemble.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Gate,
    Fast,
    Noisy,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Gate => Backend::Gate,
            BackendArg::Fast => Backend::Fast,
            BackendArg::Noisy => Backend::Noisy,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Read the instance from a JSON file instead of generating one.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub nodes: usize,
    #[arg(long, default_value_t = 2)]
    pub cycle_length: usize,
    /// Largest delay-table entry; selects general (multi-bit) generation.
    #[arg(long)]
    pub max_delay: Option<u32>,
    /// Use the single-cell congestion pattern instead of delay tables (C = 2 only).
    #[arg(long)]
    pub pattern: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Total-delay threshold K (overrides the file value).
    #[arg(long)]
    pub threshold: Option<u64>,
}

impl InstanceArgs {
    pub fn resolve(&self) -> Result<NscInstance> {
        let inst = match &self.instance {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                NscInstance::from_json(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
            }
            None => {
                let mode = match (self.cycle_length, self.max_delay, self.pattern) {
                    (2, None, false) => GenMode::Binary,
                    (2, None, true) => GenMode::Toffoli,
                    (_, _, true) => bail!("--pattern needs cycle length 2 and no --max-delay"),
                    (c, h, false) => GenMode::General {
                        cycle_length: c,
                        max_delay: h.unwrap_or(c as u32 - 1),
                    },
                };
                random_instance(self.nodes, self.seed, mode)?
            }
        };
        Ok(match self.threshold {
            Some(k) => inst.with_threshold(k),
            None => inst,
        })
    }
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 1024)]
    pub shots: usize,
    /// Also sample `--shots` measurements (metrics default to exact values).
    #[arg(long)]
    pub sample: bool,
    #[arg(long, default_value_t = 0.0)]
    pub noise_rate: f64,
    /// Noise trajectories averaged by the noisy backend.
    #[arg(long, default_value_t = 100)]
    pub trajectories: usize,
}

impl SimArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            backend: self.backend.into(),
            shots: self.sample.then_some(self.shots),
            noise_rate: self.noise_rate,
            trajectories: self.trajectories,
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Grover iterations k.
    #[arg(long, default_value_t = 1)]
    pub iterations: usize,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Comma-separated values and inclusive ranges, e.g. `4..10` or `1,2,5..6`.
fn parse_list<T>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<T>()
                .map_err(|_| format!("bad number '{t}'"))
        };
        match part.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                let (a, b): (u64, u64) = (num(a)?.into(), num(b)?.into());
                if a > b {
                    return Err(format!("empty range '{part}'"));
                }
                for v in a..=b {
                    out.push(T::try_from(v).map_err(|_| format!("value {v} out of range"))?);
                }
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// A parsed `--nodes`/`--threshold`/`--iterations` list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List<T>(pub Vec<T>);

fn parse_sizes(s: &str) -> std::result::Result<List<usize>, String> {
    Ok(List(
        parse_list::<u32>(s)?
            .into_iter()
            .map(|v| v as usize)
            .collect(),
    ))
}

fn parse_u64s(s: &str) -> std::result::Result<List<u64>, String> {
    parse_list::<u64>(s).map(List)
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Node counts, e.g. `4..10`.
    #[arg(long, default_value = "4..10", value_parser = parse_sizes)]
    pub nodes: List<usize>,
    #[arg(long, default_value = "1,2", value_parser = parse_u64s)]
    pub threshold: List<u64>,
    #[arg(long, default_value = "1,2", value_parser = parse_sizes)]
    pub iterations: List<usize>,
    /// Instances per node count.
    #[arg(long, default_value_t = 5)]
    pub seeds: usize,
    /// Master seed for instance and sampling seeds.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Additionally write an SVG chart here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl SweepArgs {
    pub fn config(&self) -> SweepConfig {
        SweepConfig {
            sizes: self.nodes.0.clone(),
            thresholds: self.threshold.0.clone(),
            iterations: self.iterations.0.clone(),
            seeds_per_size: self.seeds,
            master_seed: self.seed,
            run: self.sim.options(),
        }
    }
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Counting qubits t.
    #[arg(long, default_value_t = 7)]
    pub counting_qubits: usize,
    /// Robustness fraction; decides |S| >= ceil(alpha * N).
    #[arg(long, conflicts_with = "delta")]
    pub alpha: Option<f64>,
    /// Absolute robustness count.
    #[arg(long)]
    pub delta: Option<u64>,
    #[arg(long, default_value_t = 1024)]
    pub shots: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ResourcesArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Only check ensemble instances with at most this many nodes.
    #[arg(long, default_value_t = 6)]
    pub max_nodes: usize,
    /// Iteration counts for the backend comparison.
    #[arg(long, default_value = "1,2", value_parser = parse_sizes)]
    pub iterations: List<usize>,
}

/// Capacity errors map to 3, verification failures are reported through
/// the `Ok` code, everything else is treated as bad input (2).
pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Capacity { .. }) => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    }
}

pub fn execute(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate(a) => {
            a.output.emit(&a.instance.resolve()?.to_json())?;
            Ok(0)
        }
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Count(a) => cmd_count(a),
        Command::Resources(a) => cmd_resources(a),
        Command::Verify(a) => {
            let (report, ok) = cmd_verify(a)?;
            print!("{report}");
            Ok(if ok { 0 } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn cmd_run(a: &RunArgs) -> Result<u8> {
    let run = a.sim.options();
    validate_run(&run)?;
    let inst = a.instance.resolve()?;
    let seed = cell_seed(
        inst.seed().unwrap_or(a.instance.seed),
        inst.threshold(),
        a.iterations,
    );
    let row = evaluate(&inst, a.iterations, &run, seed)?;
    if row.success.is_none() {
        return Err(Error::Capacity {
            backend: "gate-level backend",
            required: nsc_grover::gadgets::RegisterLayout::plan(&inst)?.total_qubits as u64,
            limit: nsc_grover::statevec::MAX_QUBITS as u64,
        }
        .into());
    }
    let text = match a.format {
        Format::Csv => to_csv(std::slice::from_ref(&row))?,
        Format::Json => serde_json::to_string_pretty(&row)? + "\n",
        Format::Svg => bail!("run output is csv or json"),
    };
    a.output.emit(&text)?;
    Ok(0)
}

fn cmd_sweep(a: &SweepArgs) -> Result<u8> {
    let rows = run_sweep(&a.config())?;
    let text = match a.format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Svg => svg::render(&rows),
    };
    a.output.emit(&text)?;
    if let Some(p) = &a.svg {
        std::fs::write(p, svg::render(&rows))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(0)
}

fn cmd_count(a: &CountArgs) -> Result<u8> {
    let inst = a.instance.resolve()?;
    let seed = a.instance.seed;
    let params = match (a.alpha, a.delta) {
        (Some(alpha), _) => Some(RobustParams::Alpha(alpha)),
        (None, Some(d)) => Some(RobustParams::Delta(d)),
        (None, None) => None,
    };
    let classical_m = inst.feasible_set()?.count();
    let (estimate, verdict) = match params {
        Some(p) => {
            let v = robust_decision_quantum(&inst, p, a.counting_qubits, a.shots, seed)?;
            let classical = inst.robust_decision_classical(p)?;
            (v.estimate.clone(), Some((v, classical.holds)))
        }
        None => (
            quantum_count(&inst, a.counting_qubits, a.shots, seed)?,
            None,
        ),
    };
    let verdict_name = |v: CountVerdict| match v {
        CountVerdict::Holds => "holds",
        CountVerdict::Fails => "fails",
        CountVerdict::Inconclusive => "inconclusive",
    };
    let text = match a.format {
        Format::Json => {
            let mut doc = json!({
                "search_space": estimate.search_space,
                "counting_qubits": estimate.counting_qubits,
                "outcome": estimate.outcome,
                "theta": estimate.theta,
                "m_hat": estimate.m_hat,
                "error_bound": estimate.error_bound,
                "shots": estimate.shots,
                "seed": estimate.seed,
                "classical_m": classical_m,
            });
            if let Some((v, classical)) = &verdict {
                doc["delta"] = json!(v.delta);
                doc["margin"] = json!(v.margin);
                doc["verdict"] = json!(verdict_name(v.verdict));
                doc["classical_holds"] = json!(classical);
            }
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("N,t,outcome,m_hat,error_bound,M,delta,verdict\n");
            let (d, v) = match &verdict {
                Some((v, _)) => (v.delta.to_string(), verdict_name(v.verdict).to_string()),
                None => (String::new(), String::new()),
            };
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                estimate.search_space,
                estimate.counting_qubits,
                estimate.outcome,
                estimate.m_hat,
                estimate.error_bound,
                classical_m,
                d,
                v
            )?;
            s
        }
        Format::Svg => bail!("count output is csv or json"),
    };
    a.output.emit(&text)?;
    Ok(0)
}

fn resources_csv(r: &ResourceEstimate) -> String {
    let q = &r.qubits;
    let mut s = String::from("item,value\n");
    for (k, v) in [
        ("total_qubits", q.total),
        ("node_qubits", q.node),
        ("delay_qubits", q.delay),
        ("sum_qubits", q.sum),
        ("pad_qubits", q.pad),
        ("carry_qubits", q.carry),
        ("flag_qubits", q.flag),
        ("comparator_ancilla_qubits", q.comparator_ancilla),
        ("oracle_gates", r.oracle.gates),
        ("oracle_multi_qubit_gates", r.oracle.multi_qubit),
        ("oracle_depth", r.oracle.depth),
        ("diffuser_depth", r.diffuser.depth),
        ("iteration_gates", r.iteration.gates),
        ("iteration_multi_qubit_gates", r.iteration.multi_qubit),
        ("iteration_depth", r.iteration.depth),
    ] {
        let _ = writeln!(s, "{k},{v}");
    }
    s
}

fn cmd_resources(a: &ResourcesArgs) -> Result<u8> {
    let r = oracle_cost(&a.instance.resolve()?)?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&r)? + "\n",
        Format::Csv => resources_csv(&r),
        Format::Svg => bail!("resources output is csv or json"),
    };
    a.output.emit(&text)?;
    Ok(0)
}

/// Runs the verification suite; returns the report and whether every check
/// passed.
pub fn cmd_verify(a: &VerifyArgs) -> Result<(String, bool)> {
    let start = Instant::now();
    let mut report = String::new();
    let mut all_ok = true;
    let mut line = |report: &mut String, ok: bool, what: String| {
        all_ok &= ok;
        let _ = writeln!(report, "{} {what}", if ok { "PASS" } else { "FAIL" });
    };
    for (i, inst) in default_ensemble()?
        .iter()
        .enumerate()
        .filter(|(_, i)| i.num_nodes() <= a.max_nodes)
    {
        let label = format!(
            "instance {i} (n={}, seed={})",
            inst.num_nodes(),
            inst.seed().unwrap_or(0)
        );
        let o = oracle_equivalence(inst)?;
        line(
            &mut report,
            o.passed(),
            format!("{label}: oracle probes over {} assignments", o.assignments),
        );
        let r = uncomputation_residual(inst)?;
        line(
            &mut report,
            r.leaked_mass < 1e-12 && r.phase_error < 1e-10,
            format!(
                "{label}: ancilla leakage {:.1e}, phase error {:.1e}",
                r.leaked_mass, r.phase_error
            ),
        );
        for &k in &a.iterations.0 {
            let d = backend_agreement(inst, k)?;
            line(
                &mut report,
                d < 1e-10,
                format!("{label}: gate/fast amplitude gap at k={k} {d:.1e}"),
            );
        }
    }
    let _ = writeln!(
        report,
        "{} in {:.1} s",
        if all_ok {
            "all checks passed"
        } else {
            "verification FAILED"
        },
        start.elapsed().as_secs_f64()
    );
    Ok((report, all_ok))
}
