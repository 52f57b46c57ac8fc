use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsc-bench"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2)
        .map(|i| dir.path().join(format!("g{i}.json")))
        .collect();
    for p in &paths {
        let o = bench(&[
            "generate",
            "--nodes",
            "4",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let inst = nsc_grover::model::NscInstance::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(inst.num_nodes(), 4);
}

#[test]
fn generated_file_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("i.json");
    assert!(bench(&[
        "generate",
        "--nodes",
        "5",
        "--seed",
        "3",
        "--out",
        p.to_str().unwrap()
    ])
    .status
    .success());
    let from_file = bench(&[
        "run",
        "--instance",
        p.to_str().unwrap(),
        "--backend",
        "gate",
    ]);
    let generated = bench(&["run", "--nodes", "5", "--seed", "3", "--backend", "gate"]);
    assert!(from_file.status.success());
    assert_eq!(stdout(&from_file), stdout(&generated));
}

#[test]
fn resources_report_worked_qubit_totals() {
    for (n, total) in [(4, 19), (6, 23), (10, 34)] {
        let o = bench(&["resources", "--nodes", &n.to_string(), "--seed", "1"]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["qubits"]["total"], total);
    }
}

#[test]
fn run_csv_has_the_fixed_header() {
    let o = bench(&[
        "run",
        "--nodes",
        "4",
        "--seed",
        "2",
        "--threshold",
        "2",
        "--iterations",
        "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), nsc_bench::sweep::CSV_HEADER);
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], &["4", "2", "2"]);
    assert_eq!(row[11], "fast");
}

#[test]
fn exit_codes() {
    assert_eq!(
        bench(&["run", "--nodes", "8", "--backend", "gate"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(bench(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(bench(&["run", "--nodes", "2"]).status.code(), Some(2));
    assert_eq!(
        bench(&["run", "--instance", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bench(&["count", "--nodes", "4", "--alpha", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn malformed_instance_reports_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"nodes\": 4,\n  \"cycle_length\": \"two\"\n}\n").unwrap();
    let o = bench(&["run", "--instance", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("line 3"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn count_agrees_with_classical_verdict() {
    let o = bench(&[
        "count",
        "--nodes",
        "5",
        "--seed",
        "3",
        "--delta",
        "1",
        "--counting-qubits",
        "8",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v["classical_m"].as_u64().unwrap();
    let m_hat = v["m_hat"].as_f64().unwrap();
    assert!((m_hat - m as f64).abs() <= v["error_bound"].as_f64().unwrap());
    if v["verdict"] != "inconclusive" {
        assert_eq!(
            v["verdict"] == "holds",
            v["classical_holds"].as_bool().unwrap()
        );
    }
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("s.svg");
    let o = bench(&[
        "sweep",
        "--nodes",
        "4..7",
        "--seeds",
        "2",
        "--backend",
        "gate",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    // 4 sizes × 2 K × 2 k × 2 seeds
    assert_eq!(text.lines().count(), 1 + 32);
    assert_eq!(
        text.lines()
            .filter(|l| l.contains("gate/skipped:capacity"))
            .count(),
        8
    );
    let chart = std::fs::read_to_string(&svg).unwrap();
    assert!(chart.starts_with("<svg") && chart.trim_end().ends_with("</svg>"));
    assert_eq!(chart.matches("<polyline").count(), 5);
}

#[test]
fn verify_passes_on_small_ensemble() {
    let o = bench(&["verify", "--max-nodes", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 40);
    assert!(!text.contains("FAIL"));
}
