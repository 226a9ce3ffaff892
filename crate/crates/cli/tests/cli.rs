use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlab"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn homology_of(record: &Value) -> String {
    record["homology"].to_string()
}

#[test]
fn homology_examples() {
    let out = qlab(&["homology", "--n", "4", "--p", "2", "--a", "1", "--k", "0"]);
    assert!(out.status.success());
    assert_eq!(
        homology_of(&lines(&out)[0]),
        r#"[{"betti":2,"k":0,"torsion":[]}]"#
    );

    let out = qlab(&["homology", "--n", "7", "--p", "2", "--a", "1", "--k", "1"]);
    assert_eq!(
        lines(&out)[0]["homology"][1],
        serde_json::json!({"k": 1, "betti": 0, "torsion": [3]})
    );

    let out = qlab(&["homology", "--n", "5", "--p", "2", "--a", "1", "--k", "1"]);
    assert_eq!(lines(&out)[0]["homology"][1]["betti"], 6);
}

#[test]
fn sweep_onsets() {
    let out = qlab(&[
        "sweep", "--n-min", "2", "--n-max", "8", "--p", "2", "--a", "1", "--k", "0",
    ]);
    let rows = lines(&out);
    let summary = rows.last().unwrap();
    assert_eq!(summary["onset"], 5);
    assert!(summary["summary"]
        .as_str()
        .unwrap()
        .contains("within computed range"));

    let out = qlab(&[
        "sweep", "--n-min", "5", "--n-max", "11", "--p", "2", "--a", "1", "--k", "1",
    ]);
    let rows = lines(&out);
    let h1 = |n: u64| rows.iter().find(|r| r["n"] == n).unwrap()["homology"][1].clone();
    assert_eq!(h1(5)["betti"], 6);
    assert_eq!(h1(7)["torsion"], serde_json::json!([3]));
    for n in 8..=11 {
        assert_eq!(
            h1(n),
            serde_json::json!({"k": 1, "betti": 0, "torsion": []})
        );
    }
    assert_eq!(rows.last().unwrap()["onset"], 8);

    let out = qlab(&[
        "sweep", "--n-min", "3", "--n-max", "9", "--p", "3", "--a", "1", "--k", "0",
    ]);
    assert_eq!(lines(&out).last().unwrap()["onset"], 7);
}

#[test]
fn sweep_csv() {
    let out = qlab(&[
        "sweep", "--n-min", "6", "--n-max", "7", "--p", "2", "--a", "1", "--k", "1", "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,k,betti,torsion,status\n"));
    assert!(text.contains("7,1,0,3,ok"));
    assert!(text.trim_end().ends_with("within computed range"));
}

#[test]
fn verify_examples() {
    let out = qlab(&["verify", "dimension", "--p", "2", "--a", "1", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let out = qlab(&[
        "verify",
        "kneser-acyclicity",
        "--p",
        "3",
        "--k",
        "0",
        "--n",
        "7",
        "--n-max",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = qlab(&[
        "verify", "snf", "--trials", "200", "--size", "5", "--seed", "42",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["cells"], 200);
    let out = qlab(&[
        "verify", "cone", "--p", "2", "--a", "1", "--n", "5", "--n-max", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failing_suite_lists_counterexample() {
    let out = qlab(&["verify", "dimension", "--p", "3", "--a", "1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let report = &lines(&out)[0];
    assert_eq!(report["passed"], false);
    assert_eq!(report["failures"][0]["label"], "p=3 a=1 n=3");
}

#[test]
fn exit_codes() {
    let out = qlab(&[
        "homology",
        "--n",
        "11",
        "--p",
        "2",
        "--a",
        "1",
        "--k",
        "1",
        "--budget-entries",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert_eq!(
        qlab(&["homology", "--n", "5", "--p", "4", "--a", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qlab(&[
            "homology",
            "--n",
            "5",
            "--p",
            "2",
            "--a",
            "1",
            "--k",
            "2",
            "--max-dim",
            "1"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        qlab(&["homology", "--n-min", "6", "--n-max", "5", "--p", "2", "--a", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(qlab(&["verify", "nonsense"]).status.code(), Some(3));
}

#[test]
fn environment_and_flag_precedence() {
    let out = Command::new(env!("CARGO_BIN_EXE_qlab"))
        .args(["homology", "--n", "5", "--k", "1"])
        .env("QLAB_P", "2")
        .env("QLAB_A", "1")
        .output()
        .unwrap();
    assert_eq!(lines(&out)[0]["homology"][1]["betti"], 6);
    let out = Command::new(env!("CARGO_BIN_EXE_qlab"))
        .args(["homology", "--n", "4", "--a", "1", "--p", "2"])
        .env("QLAB_P", "3")
        .output()
        .unwrap();
    assert_eq!(lines(&out)[0]["p"], 2);
}

#[test]
fn cache_warm_cold_and_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "homology",
        "--n",
        "7",
        "--p",
        "2",
        "--a",
        "1",
        "--k",
        "1",
        "--cache-dir",
        d,
    ];
    let cold = lines(&qlab(&args))[0].clone();
    let warm = lines(&qlab(&args))[0].clone();
    assert_eq!(cold["cache"]["hit"], false);
    assert_eq!(warm["cache"]["hit"], true);
    assert_eq!(homology_of(&cold), homology_of(&warm));

    let complex = dir.path().join("commuting-n7-p2-a1-d1-v1.complex");
    let mut text = fs::read_to_string(&complex).unwrap();
    text.push_str("1: 0 1\n");
    fs::write(&complex, text).unwrap();
    let out = qlab(&args);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignoring cache entry"));
    let rebuilt = lines(&out)[0].clone();
    assert_eq!(rebuilt["cache"]["hit"], false);
    assert_eq!(homology_of(&rebuilt), homology_of(&cold));

    let log = fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 3);
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = qlab(&[
            "--threads",
            threads,
            "sweep",
            "--n-min",
            "4",
            "--n-max",
            "8",
            "--p",
            "2",
            "--a",
            "2",
            "--k",
            "1",
        ]);
        lines(&out).iter().map(homology_of).collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn graph_and_complex() {
    let out = qlab(&["graph", "--n", "4", "--p", "2", "--a", "1"]);
    let g = &lines(&out)[0];
    assert_eq!(g["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(g["edges"].as_array().unwrap().len(), 3);

    let out = qlab(&[
        "complex",
        "--n",
        "6",
        "--p",
        "2",
        "--kneser",
        "--max-dim",
        "2",
    ]);
    assert_eq!(
        lines(&out)[0]["chain_ranks"],
        serde_json::json!([15, 45, 15, 0])
    );
    assert_eq!(
        qlab(&["complex", "--n", "6", "--p", "2", "--max-dim", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn reproduce_subset() {
    let out = qlab(&["reproduce", "--criteria", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    assert_eq!(rows.len(), 4);
    assert!(rows[..3].iter().all(|r| r["ok"] == true));
    assert_eq!(rows[3], serde_json::json!({"passed": 3, "total": 3}));
}
