use std::fs;
use std::process::{Command, Output};

use ewc_core::certify::CertificationReport;
use ewc_core::witness::bundle_from_json;

fn ewc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewc"))
        .args(args)
        .env_remove("EWC_SEED")
        .output()
        .expect("ewc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn certify_report(args: &[&str]) -> CertificationReport {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full = vec!["certify"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = ewc(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    CertificationReport::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn witness_files_carry_spa_constants_and_windows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = ewc(&[
        "witness",
        "--family",
        "bell2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let b = bundle_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((b.p - 0.5).abs() < 1e-12 && (b.q - 1.5).abs() < 1e-12);
    assert!((b.window.lower - 0.125).abs() < 1e-6 && (b.window.upper - 0.375).abs() < 1e-6);

    let o = ewc(&[
        "witness",
        "--family",
        "ghz3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let b = bundle_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((b.window.lower - 1.0 / 24.0).abs() < 1e-6);
    assert!((b.window.upper - 5.0 / 24.0).abs() < 1e-6);

    assert_eq!(ewc(&["witness", "--family", "nope"]).status.code(), Some(2));
}

#[test]
fn certify_examples() {
    let o = ewc(&[
        "certify",
        "--family",
        "bell2",
        "--prep",
        "catalog:2q/1",
        "--scheme",
        "1",
        "--shots",
        "8192",
        "--seed",
        "7",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ENTANGLED(lower)"));

    let r = certify_report(&["--family", "bell2", "--prep", "catalog:2q/4", "--seed", "7"]);
    assert_eq!(r.verdict.to_string(), "NOT-CERTIFIED");
    assert!((r.estimate - 0.25).abs() <= 5.0 * r.std);
}

#[test]
fn three_qubit_state_seven_violates_the_upper_bound() {
    // At 2000 shots the estimate sits at the ideal 1/4 but the 2ⁿ-scaled
    // standard deviation is too wide for a 5σ verdict.
    let r = certify_report(&[
        "--family",
        "ghz3",
        "--prep",
        "catalog:3q/7",
        "--scheme",
        "1",
        "--shots",
        "2000",
    ]);
    assert!((r.ideal - 0.25).abs() < 1e-10);
    assert!((r.estimate - 0.25).abs() <= 5.0 * r.std);
    assert!(r.estimate > r.window.upper);
    let r = certify_report(&[
        "--family",
        "ghz3",
        "--prep",
        "catalog:3q/7",
        "--shots",
        "100000",
    ]);
    assert_eq!(r.verdict.to_string(), "ENTANGLED(upper)");
}

#[test]
fn reports_are_byte_identical_for_equal_flags() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = ewc(&[
            "certify",
            "--family",
            "bell2",
            "--prep",
            "catalog:2q/3",
            "--seed",
            "11",
            "--noise-2q",
            "0.05",
            "--readout",
            "0.01",
            "--policy",
            "random",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_ewc"));
        c.args(["certify", "--family", "bell2", "--prep", "catalog:2q/4"])
            .args(extra);
        match env {
            Some(s) => c.env("EWC_SEED", s),
            None => c.env_remove("EWC_SEED"),
        };
        stdout(&c.output().unwrap())
    };
    assert_eq!(run(Some("42"), &[]), run(None, &["--seed", "42"]));
    assert_ne!(run(Some("42"), &[]), run(None, &["--seed", "43"]));
}

#[test]
fn circuit_files_and_parse_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("bell.txt");
    fs::write(&good, "qubits 2\nh 0\ncx 0 1\n").unwrap();
    let o = ewc(&[
        "certify",
        "--family",
        "bell2",
        "--prep",
        good.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ENTANGLED(lower)"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "qubits 2\nh 0\ncx 0 7\n").unwrap();
    let o = ewc(&[
        "certify",
        "--family",
        "bell2",
        "--prep",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 3:6"));

    let o = ewc(&[
        "certify",
        "--family",
        "bell2",
        "--prep",
        "catalog:2q/1",
        "--scheme",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = ewc(&["certify", "--prep", "catalog:2q/1"]);
    assert_eq!(o.status.code(), Some(2));
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["state_id", "ideal", "estimate", "std", "verdict"]
    );
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn reproduce_ideal_columns() {
    let fig4 = [0.0, 0.125, 0.1875, 0.25, 0.3125, 0.375, 0.5];
    let fig5 = [
        0.0,
        1.0 / 24.0,
        1.0 / 12.0,
        0.125,
        1.0 / 6.0,
        5.0 / 24.0,
        0.25,
    ];
    for (fig, want) in [("fig4", fig4), ("fig5-2q", fig4), ("fig5-3q", fig5)] {
        let o = ewc(&["reproduce", fig]);
        assert!(o.status.success());
        let rows = csv_rows(&stdout(&o));
        assert_eq!(rows.len(), 7);
        for (row, w) in rows.iter().zip(want) {
            let ideal: f64 = row[1].parse().unwrap();
            assert!((ideal - w).abs() < 1e-10, "{fig} state {}: {ideal}", row[0]);
        }
    }
    let rows = csv_rows(&stdout(&ewc(&["reproduce", "table-e"])));
    let e1: f64 = rows[0][1].parse().unwrap();
    assert!(e1 >= 0.25 - 1e-12);
}

#[test]
fn numbers_are_written_with_seventeen_digits() {
    let rows = csv_rows(&stdout(&ewc(&["reproduce", "fig4", "--seed", "3"])));
    for row in rows {
        for cell in &row[1..4] {
            let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{cell}");
        }
    }
}

#[test]
fn adversary_demo_reports_false_positive() {
    let o = ewc(&["adversary-demo", "--seed", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("split P&M false positive: yes"), "{text}");
    assert!(text.contains("permutations: unchanged"));
}

#[test]
fn random_allocation_keeps_the_ewc_verdict() {
    let verdicts: Vec<String> = (0..20)
        .map(|seed| {
            let s = seed.to_string();
            let o = ewc(&[
                "certify",
                "--family",
                "bell2",
                "--prep",
                "catalog:2q/1",
                "--policy",
                "random",
                "--seed",
                &s,
            ]);
            stdout(&o).split_whitespace().next().unwrap().to_string()
        })
        .collect();
    assert!(verdicts.iter().all(|v| v == "ENTANGLED(lower)"));
}

#[test]
fn homogeneous_device_split_and_ewc_agree() {
    for scheme in ["1", "split_pm"] {
        let r = certify_report(&[
            "--family",
            "bell2",
            "--prep",
            "catalog:2q/1",
            "--scheme",
            scheme,
        ]);
        assert_eq!(r.verdict.to_string(), "ENTANGLED(lower)", "{scheme}");
    }
}

#[test]
fn job_files_run() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    fs::write(
        &job,
        r#"{"circuit": "qubits 2\nh 0\ncx 0 1\n", "shots": 64, "seed": 5,
            "device": {"qubits": 3}, "policy": {"kind": "fixed_permutation", "perm": [2, 0, 1]}}"#,
    )
    .unwrap();
    let o = ewc(&["job", job.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let total: u64 = v["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(total, 64);
    assert_eq!(
        v["allocation"]["logical_to_physical"],
        serde_json::json!([2, 0])
    );
}

#[test]
fn sweep_drifts_toward_the_window() {
    let o = ewc(&[
        "sweep",
        "--family",
        "bell2",
        "--prep",
        "catalog:2q/1",
        "--grid",
        "0,0.5,1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "noise_2q,estimate,std,verdict");
    assert!(lines[1].ends_with("ENTANGLED(lower)"));
    assert!(lines[3].ends_with("NOT-CERTIFIED"));
}
