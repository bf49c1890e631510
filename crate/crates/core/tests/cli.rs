use std::f64::consts::FRAC_PI_4;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ctqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctqw"))
        .args(args)
        .env("CTQW_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = ctqw(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn average_of_k8() {
    let v = ok_json(&["average", "--family", "complete", "--n", "8"]);
    assert_eq!(v["schema"], "ctqw/1");
    let p = v["distribution"].as_array().unwrap();
    assert!((p[0].as_f64().unwrap() - 0.78125).abs() < 1e-12);
    for x in &p[1..] {
        assert!((x.as_f64().unwrap() - 1.0 / 32.0).abs() < 1e-12);
    }
    assert!((v["deviation_uniform"].as_f64().unwrap() - 1.3125).abs() < 1e-12);
}

#[test]
fn scan_finds_quarter_pi_on_q3() {
    let v = ok_json(&["scan", "--family", "hypercube", "--d", "3", "--eps", "1e-9"]);
    let times: Vec<f64> = v["minima"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["t"].as_f64().unwrap())
        .collect();
    assert!((times[0] - FRAC_PI_4).abs() < 1e-8, "{times:?}");
    // pi/4 + k pi/2 throughout the window
    for (k, t) in times.iter().enumerate() {
        assert!(
            (t - FRAC_PI_4 - k as f64 * 2.0 * FRAC_PI_4).abs() < 1e-8,
            "{times:?}"
        );
    }
}

#[test]
fn normalize_rescales_times_but_not_averages() {
    let v = ok_json(&[
        "scan",
        "--family",
        "hypercube",
        "--d",
        "3",
        "--normalize",
        "--t-max",
        "3",
    ]);
    let t = v["minima"][0]["t"].as_f64().unwrap();
    assert!((t - 3.0 * FRAC_PI_4).abs() < 1e-8);
    let raw = ok_json(&["average", "--family", "cycle", "--n", "7"]);
    let norm = ok_json(&["average", "--family", "cycle", "--n", "7", "--normalize"]);
    assert_eq!(raw["distribution"], norm["distribution"]);
    assert_eq!(
        ctqw(&["average", "--family", "path", "--n", "4", "--normalize"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn build_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["--family", "cycle", "--n", "9"],
        &["--family", "hypercube", "--d", "3"],
        &["--family", "bunkbed", "--base", "path", "--n", "5"],
        &[
            "--family",
            "circulant",
            "--factors",
            "2,2,2",
            "--support",
            "1,2,4,7",
        ],
        &["--family", "complete-bipartite", "--n", "3"],
    ];
    for (i, graph) in cases.iter().enumerate() {
        let file = dir.path().join(format!("g{i}.json"));
        let file = file.to_str().unwrap();
        let mut build = vec!["build"];
        build.extend_from_slice(graph);
        build.extend_from_slice(&["--format", "json", "--output", file]);
        assert_eq!(ctqw(&build).status.code(), Some(0));
        for cmd in [
            &["average"][..],
            &["spectrum", "--eigenvectors"],
            &["walk", "--t", "1.7", "--amplitudes"],
        ] {
            let mut direct: Vec<&str> = cmd.to_vec();
            direct.extend_from_slice(graph);
            let mut via_file: Vec<&str> = cmd.to_vec();
            via_file.extend_from_slice(&["--graph-file", file]);
            let a = ctqw(&direct);
            let b = ctqw(&via_file);
            assert_eq!(a.status.code(), Some(0));
            assert_eq!(a.stdout, b.stdout, "{graph:?} {cmd:?}");
        }
    }
}

#[test]
fn custom_graph_files_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("star.json");
    std::fs::write(
        &good,
        r#"{"schema":"ctqw/1","n":4,"family":"custom","adjacency_rows":["0111","1000","1000","1000"]}"#,
    )
    .unwrap();
    let v = ok_json(&["average", "--graph-file", good.to_str().unwrap()]);
    assert_eq!(v["distribution"].as_array().unwrap().len(), 4);

    let asym = dir.path().join("asym.json");
    std::fs::write(
        &asym,
        r#"{"n":3,"family":"custom","adjacency_rows":["011","000","100"]}"#,
    )
    .unwrap();
    assert_eq!(
        ctqw(&["average", "--graph-file", asym.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let split = dir.path().join("split.json");
    std::fs::write(
        &split,
        r#"{"n":4,"family":"custom","adjacency_rows":["0100","1000","0001","0010"]}"#,
    )
    .unwrap();
    assert_eq!(
        ctqw(&["spectrum", "--graph-file", split.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    assert_eq!(
        ctqw(&["average", "--graph-file", "/nonexistent/g.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn csv_and_table_output() {
    let out = ctqw(&[
        "walk", "--family", "cycle", "--n", "4", "--t", "0", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vertex,probability"));
    let probs: Vec<f64> = lines
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(probs.len(), 4);
    assert!((probs[0] - 1.0).abs() < 1e-15 && probs[1..].iter().all(|p| p.abs() < 1e-15));
    let out = ctqw(&[
        "spectrum", "--family", "complete", "--n", "3", "--format", "table",
    ]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("type 2"));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("avg.csv");
    let out = ctqw(&[
        "average",
        "--family",
        "path",
        "--n",
        "3",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("vertex,probability\n0,0.375"), "{text}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        ctqw(&["average", "--family", "cycle"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ctqw(&["average", "--family", "cycle", "--n", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ctqw(&["average", "--family", "moebius", "--n", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ctqw(&["walk", "--family", "cycle", "--n", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ctqw(&["walk", "--family", "cycle", "--n", "5", "--t", "1", "--start", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ctqw(&["average", "--family", "cycle", "--n", "5", "--tol", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(ctqw(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ctqw(&["--help"]).status.code(), Some(0));
    let err = String::from_utf8(ctqw(&["build", "--family", "cycle", "--n", "2"]).stderr).unwrap();
    assert!(err.contains("degenerate cycle"), "{err}");
}

#[test]
fn character_table_spectrum() {
    let table = data("s3.json");
    let v = ok_json(&[
        "spectrum",
        "--char-table",
        &table,
        "--class-symbol",
        "0,1,0",
    ]);
    let values: Vec<(f64, u64)> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["value"].as_f64().unwrap(),
                e["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(values, vec![(3.0, 1), (0.0, 4), (-3.0, 1)]);
    assert_eq!(v["type"], 3);
    assert_eq!(
        ctqw(&[
            "spectrum",
            "--char-table",
            &table,
            "--class-symbol",
            "0,0,1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        ctqw(&[
            "spectrum",
            "--char-table",
            &table,
            "--class-symbol",
            "1,1,0"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn ensemble_output() {
    let v = ok_json(&["ensemble", "--n", "4", "--exhaustive"]);
    assert_eq!(v["type_histogram"], serde_json::json!({"2": 1, "3": 1}));
    let a = ok_json(&["ensemble", "--n", "7", "--trials", "500", "--seed", "3"]);
    let b = ok_json(&["ensemble", "--n", "7", "--trials", "500", "--seed", "3"]);
    assert_eq!(a, b);
    assert_eq!(a["trials"], 500);
}

#[test]
fn verify_reports_discrepancies_and_exits_zero() {
    let out = ctqw(&[
        "verify", "--max-n", "6", "--trials", "300", "--cases", "20", "--format", "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "ctqw/1");
    let ids: Vec<&str> = v["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["id"].as_str().unwrap())
        .collect();
    assert!(
        ids.contains(&"even_cycles") && ids.contains(&"bunkbed_layers"),
        "{ids:?}"
    );
    assert!(v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["n"].as_u64().unwrap() <= 6));

    let table = ctqw(&[
        "verify",
        "--max-n",
        "4",
        "--checks",
        "complete,cycles",
        "--trials",
        "100",
    ]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(
        text.contains("PASS") && text.contains("complete_graphs"),
        "{text}"
    );
    assert!(!text.contains("abelian_gap"));
}
