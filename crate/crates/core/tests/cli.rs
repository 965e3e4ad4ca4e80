use std::path::Path;

use matroid_lab::cli::run;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("matroid-lab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn inspect_u24_text() {
    let (code, out, _) = cli(&["inspect", "uniform:2,4"]);
    assert_eq!(code, 0);
    assert!(out.contains("3-connected: yes"), "{out}");
    assert!(out.contains("segments: {0,1,2,3}"), "{out}");
}

#[test]
fn inspect_k5e_reports_the_four_circuit() {
    let (code, out, _) = cli(&["inspect", "k5e"]);
    assert_eq!(code, 0);
    let line = out.lines().find(|l| l.starts_with("circuits")).unwrap();
    assert!(line.contains("{a,b,c,d}"), "{out}");
}

#[test]
fn json_output_parses() {
    let (code, out, _) = cli(&["--format", "json", "inspect", "wheel:3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["inspect", "/no/such/file.json"]).0, 2);
    assert_eq!(cli(&["build", "uniform:5,3"]).0, 2);
}

#[test]
fn non_matroid_names_the_exchange_pair() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"n": 4, "labels": ["a","b","c","d"], "bases": [[0,1],[2,3]]}"#).unwrap();
    let (code, _, err) = cli(&["inspect", path_str(&file)]);
    assert_eq!(code, 2);
    assert!(err.contains("basis exchange fails"), "{err}");
}

#[test]
fn build_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k5e.json");
    let (code, _, _) = cli(&["build", "k5e", "--dual", "-o", path_str(&file)]);
    assert_eq!(code, 0);
    let (code, out, _) = cli(&["--format", "json", "inspect", path_str(&file)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object());
}

#[test]
fn classify_outcome_and_failure() {
    let (code, out, _) = cli(&["classify", "k5e", "--set", "a,b,c,d", "--form", "dual"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("statements: (ii)"), "{out}");
    // {a,b,c,d} is not a cocircuit of M(K5\e)
    let (code, _, err) = cli(&["classify", "k5e", "--set", "a,b,c,d"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verify_paper_fig2() {
    let (code, out, _) = cli(&["verify-paper", "--only", "fig2"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn corrupted_fig1_fails_on_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.graph");
    let mut g = matroid_lab::constructions::fig1_graph();
    g.add_edge(1, 3, "bd").unwrap();
    std::fs::write(&file, g.to_text()).unwrap();
    let (code, out, _) = cli(&["verify-paper", "--only", "fig1", "--fig1", path_str(&file)]);
    assert_eq!(code, 1);
    assert!(out.contains("transcription_checksum"), "{out}");
}

#[test]
fn binary_exit_code() {
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_matroid-lab")).args(["build", "nonsense"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
