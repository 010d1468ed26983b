use std::process::{Command, Output};

fn dqrrr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqrrr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_dqrrr_on_decreasing_table() {
    let o = dqrrr(&["run", "--workload", "t4.3", "--policy", "dqrrr"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("q_t         60,37,8"), "{out}");
    assert!(out.contains("CS          7"), "{out}");
    assert!(out.contains("a_wt        152.4"), "{out}");
    assert!(out.contains("a_tat       219.4"), "{out}");
}

#[test]
fn run_rr_on_increasing_table() {
    let o = dqrrr(&[
        "run",
        "--workload",
        "t4.1",
        "--policy",
        "rr",
        "--quantum",
        "25",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CS          13"));
}

#[test]
fn run_missing_file_is_data_error() {
    let o = dqrrr(&["run", "--workload", "missing.csv", "--policy", "rr"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("missing.csv"), "{err}");
}

#[test]
fn run_invalid_csv_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "pid,arrival,burst\n1,0,0\n").unwrap();
    let o = dqrrr(&[
        "run",
        "--workload",
        path.to_str().unwrap(),
        "--policy",
        "fcfs",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn run_usage_errors() {
    for args in [
        &["run", "--workload", "t4.1", "--policy", "lottery"][..],
        &[
            "run",
            "--workload",
            "t4.1",
            "--policy",
            "dqrrr",
            "--quantum",
            "5",
        ],
        &[
            "run",
            "--workload",
            "t4.1",
            "--policy",
            "rr",
            "--quantum",
            "0",
        ],
        &[
            "run",
            "--workload",
            "t4.1",
            "--policy",
            "rr",
            "--format",
            "json",
        ],
        &["run", "--workload", "t4.1"],
        &["bogus"],
    ] {
        assert_eq!(dqrrr(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn run_writes_exports_and_gantt() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let o = dqrrr(&[
        "run",
        "--workload",
        "t4.11",
        "--policy",
        "dqrrr",
        "--gantt",
        "ascii",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|P1 0..26|"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["avg_waiting"], "95.6");
    for key in [
        "workload",
        "policy",
        "convention",
        "quantum_sequence",
        "slices",
        "per_process",
        "avg_waiting",
        "avg_turnaround",
        "context_switches",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let csv = dir.path().join("out.csv");
    let o = dqrrr(&[
        "run",
        "--workload",
        "t4.1",
        "--policy",
        "sjf",
        "--gantt",
        "svg",
        "--out",
        csv.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("<rect").count(), 5);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("slice,")).count(), 5);
}

#[test]
fn run_standard_convention() {
    let o = dqrrr(&[
        "run",
        "--workload",
        "t4.7",
        "--policy",
        "dqrrr",
        "--convention",
        "standard",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("a_wt        107.8"));
}

#[test]
fn compare_rows() {
    let o = dqrrr(&["compare", "--workload", "t4.9", "--policies", "rr,dqrrr"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("algorithms  RR(q=25)  DQRRR"), "{out}");
    assert!(out.contains("80,57,11,4"));
    assert!(out.contains("a_wt        212.6     147.8"), "{out}");

    let o = dqrrr(&[
        "compare",
        "--workload",
        "t4.1",
        "--policies",
        "fcfs,sjf,rr,dqrrr",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let header = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(header.split_whitespace().count(), 5, "{header}");

    assert_eq!(
        dqrrr(&["compare", "--workload", "t4.1", "--policies", "rr"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn generate_is_deterministic() {
    let args = [
        "generate",
        "--order",
        "increasing",
        "--n",
        "5",
        "--burst",
        "1:100",
        "--seed",
        "7",
    ];
    let a = dqrrr(&args);
    let b = dqrrr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("pid,arrival,burst\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn generate_degenerate_range_and_errors() {
    let o = dqrrr(&[
        "generate",
        "--order",
        "decreasing",
        "--n",
        "3",
        "--burst",
        "10:10",
        "--seed",
        "1",
    ]);
    assert_eq!(stdout(&o), "pid,arrival,burst\n1,0,10\n2,0,10\n3,0,10\n");

    for args in [
        &[
            "generate", "--order", "random", "--n", "0", "--burst", "1:5",
        ][..],
        &[
            "generate", "--order", "random", "--n", "3", "--burst", "9:5",
        ],
        &["generate", "--order", "random", "--n", "3", "--burst", "x"],
        &[
            "generate", "--order", "sideways", "--n", "3", "--burst", "1:5",
        ],
        &[
            "generate",
            "--order",
            "random",
            "--n",
            "3",
            "--burst",
            "1:5",
            "--arrivals",
            "staggered:0",
        ],
    ] {
        assert_eq!(dqrrr(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn generated_file_feeds_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let o = dqrrr(&[
        "generate",
        "--order",
        "random",
        "--n",
        "6",
        "--burst",
        "5:50",
        "--arrivals",
        "staggered:3",
        "--seed",
        "42",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = dqrrr(&[
        "run",
        "--workload",
        path.to_str().unwrap(),
        "--policy",
        "dqrrr",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("file:"));
}

#[test]
fn reproduce_single_and_all() {
    let o = dqrrr(&["reproduce", "--table", "4.2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        !out.contains("erratum  ") && !out.contains("MISMATCH"),
        "{out}"
    );
    assert!(out.contains("0 erratum cell(s), 0 mismatch(es)"));

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("audit.json");
    let o = dqrrr(&[
        "reproduce",
        "--table",
        "all",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("Table 4.").count(), 6);
    assert!(out.contains("erratum"));
    assert!(!out.contains("MISMATCH"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);

    assert_eq!(
        dqrrr(&["reproduce", "--table", "9.9"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_byte_identical() {
    let a = dqrrr(&["reproduce"]);
    let b = dqrrr(&["reproduce"]);
    assert_eq!(a.stdout, b.stdout);
}
