use std::path::{Path, PathBuf};

use regional_sensors::boundary::QuadratureRule;
use regional_sensors::cli::scenario::parse_scenario;
use regional_sensors::cli::{run, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["regional-sensors"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scenario(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn bundled(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

const SQUARE_NO_SENSORS: &str = r#"{"domain": {"rectangle": {"a1": 1, "a2": 1}}, "sensors": []}"#;

#[test]
fn analyze_without_sensors_is_invalid_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "s.json", SQUARE_NO_SENSORS);
    let out = dir.path().join("report.json");
    let (code, _, err) = cli(&["analyze", "--scenario", &s, "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID, "{err}");
    assert!(!out.exists());
}

#[test]
fn sensor_outside_domain_names_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "s.json",
        r#"{"domain": {"rectangle": {"a1": 1, "a2": 1}},
            "sensors": [{"kind": "internal_pointwise", "id": "b", "location": {"x": 1.5, "y": 0.5}}]}"#,
    );
    let out = dir.path().join("r.json");
    let (code, _, err) = cli(&["analyze", "--scenario", &s, "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("outside"), "{err}");
}

#[test]
fn malformed_and_unknown_fields_are_rejected_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let broken = scenario(dir.path(), "broken.json", "{\n  \"domain\": \n}");
    let (code, _, err) = cli(&[
        "analyze",
        "--scenario",
        &broken,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 3"), "{err}");

    let unknown = scenario(
        dir.path(),
        "unknown.json",
        r#"{"domain": {"rectangle": {"a1": 1, "a2": 1}}, "colour": 3}"#,
    );
    let (code, _, err) = cli(&[
        "analyze",
        "--scenario",
        &unknown,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("colour"), "{err}");
    assert_eq!(listing(dir.path()), ["broken.json", "unknown.json"]);
}

#[test]
fn unreadable_scenario_is_invalid_and_unwritable_output_is_io_failure() {
    let (code, _, _) = cli(&[
        "analyze",
        "--scenario",
        "/nonexistent/s.json",
        "--out",
        "never-written.json",
    ]);
    assert_eq!(code, EXIT_INVALID);
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = blocker.join("r.json");
    let (code, _, err) = cli(&[
        "analyze",
        "--scenario",
        &bundled("disc_pair.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_NUMERICAL, "{err}");
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&["frobnicate"]).0, EXIT_INVALID);
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
    assert_eq!(
        cli(&["sweep", "--scenario", "x", "--grid", "5by5", "--out", "y"]).0,
        EXIT_INVALID
    );
}

#[test]
fn modes_table_lists_the_degenerate_pair() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "s.json",
        r#"{"domain": {"rectangle": {"a1": 1, "a2": 1}}, "truncation": {"cutoff": {"rect": {"max_i": 2, "max_j": 2}}}}"#,
    );
    let (code, text, _) = cli(&["modes", "--scenario", &s]);
    assert_eq!(code, EXIT_OK);
    let line = text
        .lines()
        .find(|l| l.contains("-5.000000"))
        .expect("group with lambda = -5 pi^2");
    assert!(line.contains("(1,2) (2,1)"), "{line}");
    assert_eq!(line.split_whitespace().nth(3), Some("2"));

    let out = dir.path().join("modes.json");
    assert_eq!(
        cli(&["modes", "--scenario", &s, "--out", out.to_str().unwrap()]).0,
        EXIT_OK
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let groups = json["result"]["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 6);
}

#[test]
fn counterexample_prints_fail_pass_and_writes_trace_profile() {
    let (code, text, _) = cli(&["counterexample"]);
    assert_eq!(code, EXIT_OK);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["result"]["verdict_omega"]["pass"], false);
    assert_eq!(json["result"]["verdict_gamma"]["pass"], true);
    assert!(json.get("timings").is_none());

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ce.json");
    let plots = dir.path().join("plots");
    let (code, _, _) = cli(&[
        "counterexample",
        "--out",
        out.to_str().unwrap(),
        "--plots",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let trace = std::fs::read_to_string(plots.join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("arc,true,estimated"));
    let nodes = QuadratureRule::default().nodes_per_interval();
    assert_eq!(lines.count(), nodes);
}

#[test]
fn timings_only_when_requested() {
    let (code, text, _) = cli(&["counterexample", "--timings"]);
    assert_eq!(code, EXIT_OK);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(json["timings"]["wall_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn sweep_table_has_one_row_per_location() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.json");
    let plots = dir.path().join("plots");
    let (code, _, err) = cli(&[
        "sweep",
        "--scenario",
        &bundled("internal_point.json"),
        "--grid",
        "4x3",
        "--out",
        out.to_str().unwrap(),
        "--plots",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let csv = std::fs::read_to_string(plots.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y,sigma_min"));
    assert_eq!(csv.lines().count(), 1 + 12);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(json["result"]["rows"].as_array().unwrap().len(), 12);
    assert!(json["result"]["disagreements"].is_array());
}

#[test]
fn reconstruct_report_echo_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let plots = dir.path().join("plots");
    let (code, _, err) = cli(&[
        "reconstruct",
        "--scenario",
        &bundled("reconstruct.json"),
        "--out",
        out.to_str().unwrap(),
        "--plots",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let echo = serde_json::to_string(&json["scenario"]).unwrap();
    let reparsed = parse_scenario(&echo).expect("echo re-parses");
    assert_eq!(
        serde_json::to_value(&reparsed.scenario).unwrap(),
        json["scenario"]
    );
    let outputs = std::fs::read_to_string(plots.join("outputs.csv")).unwrap();
    assert_eq!(outputs.lines().next(), Some("time,p,q"));
}

#[test]
fn failed_plot_write_leaves_no_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    // A regular file where the plot directory should go.
    let blocker = dir.path().join("plots");
    std::fs::write(&blocker, "occupied").unwrap();
    let (code, _, _) = cli(&[
        "reconstruct",
        "--scenario",
        &bundled("reconstruct.json"),
        "--out",
        out.to_str().unwrap(),
        "--plots",
        blocker.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_NUMERICAL);
    assert_eq!(listing(dir.path()), ["plots"]);
}

#[test]
fn reconstruct_requires_an_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "s.json",
        r#"{"domain": {"rectangle": {"a1": 1, "a2": 1}},
            "sensors": [{"kind": "internal_pointwise", "id": "b", "location": {"x": 0.3, "y": 0.2}}]}"#,
    );
    let out = dir.path().join("r.json");
    assert_eq!(
        cli(&[
            "reconstruct",
            "--scenario",
            &s,
            "--out",
            out.to_str().unwrap()
        ])
        .0,
        EXIT_INVALID
    );
    assert!(!out.exists());
}
