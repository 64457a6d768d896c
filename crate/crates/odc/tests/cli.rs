use std::path::Path;
use std::process::{Command, Output};

fn odc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn run_emits_json_by_default() {
    let out = odc(&["run", "--fixture", "karate", "--delta", "0.2", "--runs", "10"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["graph"]["vertices"], 34);
    assert_eq!(doc["parameters"]["delta"], 0.2);
    assert_eq!(doc["parameters"]["rho"], 0.98);
    assert!(doc["partitions"].as_array().unwrap().len() >= 1);
    assert!(stderr(&out).contains("delta"), "summary table on stderr");
}

#[test]
fn run_emits_csv_with_header() {
    let out = odc(&[
        "run", "--fixture", "karate", "--delta", "0.3", "--runs", "10", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "delta,classes,occurrences,min_mu2,modularity,problem1"
    );
    assert!(lines.next().unwrap().starts_with("0.3,"));
}

#[test]
fn run_emits_dot_for_the_modal_partition() {
    let out = odc(&[
        "run", "--fixture", "karate", "--delta", "0.2", "--runs", "5", "--format", "dot",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph communities {"));
    assert_eq!(text.matches("fillcolor=").count(), 34);
}

#[test]
fn run_writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = odc(&[
        "run", "--fixture", "karate", "--delta", "0.2", "--runs", "5",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["parameters"]["runs"], 5);
}

#[test]
fn run_accepts_a_plain_edge_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.edges");
    std::fs::write(&path, "a b\nb c\nc d\nd a\n").unwrap();
    let out = odc(&[
        "run", "--graph", path.to_str().unwrap(), "--delta", "0.5", "--runs", "5",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().count() >= 2);
}

#[test]
fn run_repeats_byte_identically() {
    let args = [
        "run", "--fixture", "karate", "--delta", "0.4", "--runs", "10", "--seed", "11",
        "--stability-times", "0.5,5,50",
    ];
    let first = odc(&args);
    let second = odc(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sweep_emits_one_report_per_threshold() {
    let out = odc(&[
        "sweep", "--fixture", "karate", "--deltas", "0.1,0.2", "--runs", "10",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["parameters"]["delta"], 0.1);
    assert_eq!(reports[1]["parameters"]["delta"], 0.2);
    let summary = stderr(&out);
    assert!(summary.contains("classes"), "header line: {summary}");
    assert!(summary.lines().count() >= 3);
}

#[test]
fn sweep_csv_has_a_single_header() {
    let out = odc(&[
        "sweep", "--fixture", "karate", "--deltas", "0.2,0.4", "--runs", "5",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("delta,classes").count(), 1);
    assert!(text.lines().count() >= 3);
}

#[test]
fn missing_graph_and_fixture_fails() {
    let out = odc(&["run", "--delta", "0.2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error:"));
    assert!(stderr(&out).contains("--fixture"));
}

#[test]
fn out_of_range_delta_fails() {
    let out = odc(&["run", "--fixture", "karate", "--delta", "1.5"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn unknown_fixture_fails() {
    let out = odc(&["run", "--fixture", "lattice", "--delta", "0.2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("lattice"));
}

#[test]
fn builtin_without_bundled_data_explains_itself() {
    let out = odc(&["run", "--fixture", "books", "--delta", "0.2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("edge-list"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_format_is_rejected_by_the_parser() {
    let out = odc(&[
        "run", "--fixture", "karate", "--delta", "0.2", "--format", "yaml",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("yaml"));
}

#[test]
fn metropolis_mode_runs_end_to_end() {
    let out = odc(&[
        "run", "--fixture", "karate", "--delta", "0.2", "--runs", "5",
        "--weight-mode", "metropolis", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().count() >= 2);
}

#[test]
fn named_fixture_with_explicit_path_validates_vertex_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.edges");
    std::fs::write(&path, "a b\n").unwrap();
    let out = odc(&[
        "run", "--fixture", "books", "--graph", path.to_str().unwrap(), "--delta", "0.2",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("105"), "stderr: {}", stderr(&out));
}

#[test]
fn help_lists_both_subcommands() {
    let out = odc(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("run"));
    assert!(text.contains("sweep"));
    assert!(Path::new(env!("CARGO_BIN_EXE_odc")).exists());
}
