//! End-to-end tests of the `dcsel` binary: exit codes, stream separation,
//! output determinism, and the documented report schemas.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dcsel")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn dcsel")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

fn demo_csv() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "x1,x2,x3,y\n\
         0.5,1.2,-0.3,1.8\n\
         1.1,0.4,0.9,1.4\n\
         -0.2,2.2,0.1,2.0\n\
         0.9,1.9,-1.2,2.7\n\
         1.5,0.1,0.4,1.7\n\
         -0.8,1.0,1.1,0.3\n\
         0.2,0.6,-0.7,0.9\n\
         1.9,1.4,0.2,3.2\n"
    )
    .unwrap();
    f.flush().unwrap();
    f
}

fn multi_response_csv() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "a,b,y1,y2\n\
         1.0,0.5,1.4,0.2\n\
         2.0,0.1,2.1,0.8\n\
         0.5,1.5,0.9,1.1\n\
         1.5,0.9,1.8,0.4\n\
         0.1,2.0,0.3,1.9\n\
         2.2,0.2,2.4,0.6\n"
    )
    .unwrap();
    f.flush().unwrap();
    f
}

fn wide_csv(features: usize) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let mut header: Vec<String> = (0..features).map(|j| format!("f{j}")).collect();
    header.push("y".to_owned());
    writeln!(f, "{}", header.join(",")).unwrap();
    for i in 0..4 {
        let row: Vec<String> = (0..=features)
            .map(|j| format!("{}", ((i * 7 + j * 3) % 11) as f64 + 0.25 * i as f64))
            .collect();
        writeln!(f, "{}", row.join(",")).unwrap();
    }
    f.flush().unwrap();
    f
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    for cmd in ["relevant", "diverse", "order"] {
        let args = vec![cmd, "--input", path, "--response", "y", "--omit-timing"];
        let first = run(&args);
        let second = run(&args);
        assert_eq!(code(&first), 0, "{cmd} failed: {}", stderr(&first));
        assert_eq!(first.stdout, second.stdout, "{cmd} output varies");
        assert!(!first.stdout.is_empty());
    }
}

#[test]
fn parallelism_does_not_change_output() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let serial = run(&[
        "order",
        "--input",
        path,
        "--response",
        "y",
        "--omit-timing",
        "--threads",
        "1",
    ]);
    let parallel = run(&[
        "order",
        "--input",
        path,
        "--response",
        "y",
        "--omit-timing",
        "--threads",
        "4",
    ]);
    assert_eq!(code(&serial), 0);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn timing_present_unless_omitted() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let with = run(&["relevant", "--input", path, "--response", "y"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&with)).unwrap();
    let timing = &v["timing"];
    assert!(timing["load_ms"].is_number());
    assert!(timing["compute_ms"].is_number());
    assert!(timing["total_ms"].is_number());

    let without = run(&[
        "relevant",
        "--input",
        path,
        "--response",
        "y",
        "--omit-timing",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&without)).unwrap();
    assert!(v.get("timing").is_none());
}

#[test]
fn report_names_come_from_the_header() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "select",
        "--input",
        path,
        "--response",
        "y",
        "--mode",
        "kww-then-diverse",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let header = ["x1", "x2", "x3", "y"];
    for stage in v["stages"].as_array().unwrap() {
        for name in stage["selected"].as_array().unwrap() {
            assert!(header.contains(&name.as_str().unwrap()));
        }
    }
    assert_eq!(v["command"], "select");
    assert_eq!(v["config"]["mode"], "kww_then_diverse");
    let names: Vec<&str> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, vec!["kww", "diverse", "final"]);
}

#[test]
fn usage_errors_exit_2_with_clean_stdout() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["relevant", "--input", path, "--response", "y", "--bogus"],
        vec!["relevant", "--response", "y"], // missing --input
        vec![
            "dcov",
            "--input",
            path,
            "--response",
            "y",
            "--exponent",
            "3.0",
        ],
        vec![
            "dcov",
            "--input",
            path,
            "--response",
            "y",
            "--exponent",
            "0",
        ],
        vec![
            "select",
            "--input",
            path,
            "--response",
            "y",
            "--mode",
            "controlled",
        ],
        vec![
            "select",
            "--input",
            path,
            "--response",
            "y",
            "--mode",
            "nonsense",
        ],
        vec![
            "select",
            "--input",
            path,
            "--response",
            "y",
            "--mode",
            "kww-then-diverse",
            "--alpha",
            "0.5",
        ],
        vec![
            "diverse",
            "--input",
            path,
            "--response",
            "y",
            "--format",
            "csv",
        ],
        vec![
            "select",
            "--input",
            path,
            "--response",
            "y",
            "--mode",
            "controlled",
            "--alpha",
            "-0.5",
        ],
        vec!["dcov", "--input", path], // no --response and no --a/--b
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 2, "args {args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty(), "args {args:?} wrote to stdout");
        assert!(!out.stderr.is_empty(), "args {args:?} gave no diagnostic");
    }
}

#[test]
fn data_errors_exit_3_with_clean_stdout() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let mut bad_cell = tempfile::NamedTempFile::new().unwrap();
    write!(bad_cell, "x,y\n1,2\n3,abc\n").unwrap();
    bad_cell.flush().unwrap();
    let bad_path = bad_cell.path().to_str().unwrap().to_owned();
    let mut one_row = tempfile::NamedTempFile::new().unwrap();
    write!(one_row, "x,y\n1,2\n").unwrap();
    one_row.flush().unwrap();
    let one_path = one_row.path().to_str().unwrap().to_owned();

    let cases: Vec<Vec<&str>> = vec![
        vec![
            "relevant",
            "--input",
            "/nonexistent/x.csv",
            "--response",
            "y",
        ],
        vec!["relevant", "--input", path, "--response", "zz"],
        vec!["relevant", "--input", &bad_path, "--response", "y"],
        vec!["order", "--input", &one_path, "--response", "y"],
        vec!["diverse", "--input", path, "--response", "x1,x2,x3,y"],
        // single feature left: diversity needs at least two
        vec!["diverse", "--input", path, "--response", "x1,x2,y"],
        // threshold above every marginal rho^2: empty stage is a data outcome
        vec![
            "select",
            "--input",
            path,
            "--response",
            "y",
            "--mode",
            "controlled",
            "--alpha",
            "2.5",
        ],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 3, "args {args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn size_guard_exits_4() {
    let f = wide_csv(21);
    let path = f.path().to_str().unwrap();
    for experiment in ["mpi", "scaling"] {
        let out = run(&[
            "enumerate",
            "--input",
            path,
            "--response",
            "y",
            "--experiment",
            experiment,
        ]);
        assert_eq!(code(&out), 4, "{}", stderr(&out));
        assert!(stderr(&out).contains("20"));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn error_message_names_cell_location() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "x,y\n1,2\n3,4\n5,oops\n").unwrap();
    f.flush().unwrap();
    let out = run(&[
        "relevant",
        "--input",
        f.path().to_str().unwrap(),
        "--response",
        "y",
    ]);
    assert_eq!(code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("line 4"), "got: {err}");
    assert!(err.contains("'y'"), "got: {err}");
    assert!(err.contains("oops"), "got: {err}");
}

#[test]
fn dcov_self_correlation_is_one() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "dcov",
        "--input",
        path,
        "--a",
        "x1",
        "--b",
        "x1",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let metrics = v["stages"][0]["metrics"].as_array().unwrap();
    assert_eq!(metrics[0]["name"], "nu2");
    assert_eq!(metrics[1]["name"], "rho2");
    assert!((metrics[1]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["config"]["a"][0], "x1");
    assert_eq!(v["config"]["b"][0], "x1");
}

#[test]
fn dcov_standardize_changes_nu2_but_not_single_column_rho2() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let raw = run(&[
        "dcov",
        "--input",
        path,
        "--response",
        "y",
        "--a",
        "x2",
        "--standardize=false",
        "--omit-timing",
    ]);
    let std = run(&[
        "dcov",
        "--input",
        path,
        "--response",
        "y",
        "--a",
        "x2",
        "--omit-timing",
    ]);
    let vr: serde_json::Value = serde_json::from_str(&stdout(&raw)).unwrap();
    let vs: serde_json::Value = serde_json::from_str(&stdout(&std)).unwrap();
    let nu_raw = vr["stages"][0]["metrics"][0]["value"].as_f64().unwrap();
    let nu_std = vs["stages"][0]["metrics"][0]["value"].as_f64().unwrap();
    let rho_raw = vr["stages"][0]["metrics"][1]["value"].as_f64().unwrap();
    let rho_std = vs["stages"][0]["metrics"][1]["value"].as_f64().unwrap();
    assert!(
        (nu_raw - nu_std).abs() > 1e-9,
        "standardization had no effect"
    );
    assert!(
        (rho_raw - rho_std).abs() < 1e-9,
        "single-column dcor must be scale-invariant: {rho_raw} vs {rho_std}"
    );
    assert_eq!(vr["config"]["standardize"], false);
    assert_eq!(vs["config"]["standardize"], true);
}

#[test]
fn relevant_csv_is_a_flat_ranking_table() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "relevant",
        "--input",
        path,
        "--response",
        "y",
        "--format",
        "csv",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "position,feature,rho2,selected,nu_trace"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1,"));
    // the top-ranked feature is always accepted
    assert!(rows[0].contains(",true,"));
}

#[test]
fn order_csv_partitions_the_features() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "order",
        "--input",
        path,
        "--response",
        "y",
        "--format",
        "csv",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut seen: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    seen.sort_unstable();
    assert_eq!(seen, vec!["x1", "x2", "x3"]);
}

#[test]
fn multi_response_is_supported() {
    let f = multi_response_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "relevant",
        "--input",
        path,
        "--response",
        "y1,y2",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["config"]["response"][0], "y1");
    assert_eq!(v["config"]["response"][1], "y2");
    let ranking = v["stages"][0]["ranking"].as_array().unwrap();
    assert_eq!(ranking.len(), 2);
}

#[test]
fn response_by_index_matches_response_by_name() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let by_name = run(&[
        "relevant",
        "--input",
        path,
        "--response",
        "y",
        "--omit-timing",
    ]);
    let by_index = run(&[
        "relevant",
        "--input",
        path,
        "--response",
        "3",
        "--omit-timing",
    ]);
    assert_eq!(by_name.stdout, by_index.stdout);
}

#[test]
fn enumerate_mpi_reports_verified_structure() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "enumerate",
        "--input",
        path,
        "--response",
        "y",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let stage = &v["stages"][0];
    assert_eq!(stage["name"], "enumerate_mpi");
    assert_eq!(stage["subsets_evaluated"], 6); // 2^3 - 2
    assert!(stage["maximizer_count"].as_u64().unwrap() >= 1);
    assert!(!stage["minimal_sets"].as_array().unwrap().is_empty());
    for check in stage["checks"].as_array().unwrap() {
        assert_eq!(check["passed"], true, "check {} failed", check["name"]);
    }
    assert_eq!(v["config"]["experiment"], "mpi");
}

#[test]
fn top_k_truncates_tiers() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "order",
        "--input",
        path,
        "--response",
        "y",
        "--top-k",
        "1",
        "--omit-timing",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["stages"][0]["tiers"].as_array().unwrap().len(), 1);
    assert_eq!(v["config"]["top_k"], 1);
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("dcov"));
    let version = run(&["--version"]);
    assert_eq!(code(&version), 0);
}

#[test]
fn scaling_experiment_reports_both_conventions() {
    let f = demo_csv();
    let path = f.path().to_str().unwrap();
    let out = run(&[
        "enumerate",
        "--input",
        path,
        "--response",
        "y",
        "--experiment",
        "scaling",
        "--omit-timing",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let metrics = v["stages"][0]["metrics"].as_array().unwrap();
    assert_eq!(metrics[0]["name"], "rho_raw");
    assert_eq!(metrics[1]["name"], "rho_standardized");
    for m in metrics {
        let val = m["value"].as_f64().unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&val));
    }
    assert_eq!(v["stages"][0]["subsets_evaluated"], 7); // 2^3 - 1, full set included
}
