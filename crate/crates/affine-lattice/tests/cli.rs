//! End-to-end tests of the binary: golden outputs and the exit-status
//! contract (0 success/PASS, 1 verification FAIL, 2 input error).

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affine-lattice"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to run binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

const UNIT_SQUARE: &str =
    r#"{"dim": 2, "vertices": [["0","0"], ["1","0"], ["0","1"], ["1","1"]]}"#;
const SEGMENT: &str = r#"{"dim": 1, "vertices": [["0"], ["1"]]}"#;
const HALF_SEGMENT: &str = r#"{"dim": 1, "vertices": [["0"], ["1/2"]]}"#;
const SIMPLEX: &str = r#"{"dim": 2, "vertices": [["0","0"], ["1","0"], ["0","1"]]}"#;

#[test]
fn count_golden_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let square = write_file(dir.path(), "square.json", UNIT_SQUARE);
    let simplex = write_file(dir.path(), "simplex.json", SIMPLEX);

    let out = run(&["count", &square, "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "9\n");

    let out = run(&["count", &simplex, "--m", "1"]);
    assert_eq!(stdout(&out), "3\n");

    let out = run(&["count", &simplex, "--m", "1", "--points"]);
    assert_eq!(stdout(&out), "3\n(0, 0)\n(0, 1)\n(1, 0)\n");
}

#[test]
fn count_structured_output() {
    let dir = tempfile::tempdir().unwrap();
    let square = write_file(dir.path(), "square.json", UNIT_SQUARE);
    let out = run(&["count", &square, "--m", "2", "--format", "structured"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["m"], 2);
    assert_eq!(value["count"], 9);
}

#[test]
fn malformed_rational_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(
        dir.path(),
        "bad.json",
        r#"{"dim": 1, "vertices": [["0"], ["1/0"]]}"#,
    );
    let out = run(&["count", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("vertices[1][0]"), "stderr: {stderr}");
    assert!(stderr.contains("denominator"), "stderr: {stderr}");
}

#[test]
fn ehrhart_golden_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let segment = write_file(dir.path(), "segment.json", SEGMENT);
    let half = write_file(dir.path(), "half.json", HALF_SEGMENT);
    let square = write_file(dir.path(), "square.json", UNIT_SQUARE);

    let out = run(&["ehrhart", &segment]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("L(m) = m + 1\n"), "got: {}", stdout(&out));

    let out = run(&["ehrhart", &square]);
    assert!(stdout(&out).starts_with("L(m) = m^2 + 2m + 1\n"));

    let out = run(&["ehrhart", &half]);
    let text = stdout(&out);
    assert!(text.contains("m ≡ 0 (mod 2): L(m) = 1/2 m + 1"), "got: {text}");
    assert!(text.contains("m ≡ 1 (mod 2): L(m) = 1/2 m + 1/2"), "got: {text}");
}

#[test]
fn volume_golden_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let simplex = write_file(dir.path(), "simplex.json", SIMPLEX);
    let out = run(&["volume", &simplex]);
    assert_eq!(stdout(&out), "1/2\n");
}

#[test]
fn verify_builtin_exit_codes() {
    let out = run(&["verify", "builtin:torus:1,1", "--m-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS"), "got: {text}");

    let out = run(&["verify", "builtin:klein_bottle", "--m-max", "10"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify", "builtin:nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_broken_complex_exits_1() {
    // A torus missing one gluing: counts 2 at m = 1 against volume 1.
    let broken = r#"{
      "dim": 1,
      "mode": "facet-glued",
      "charts": [[["0"], ["1"]]],
      "gluings": []
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "broken.json", broken);
    let out = run(&["verify", &path, "--m-max", "12"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"), "got: {text}");
}

#[test]
fn complex_count_builtin() {
    let out = run(&["complex-count", "builtin:torus:2,1", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "8\n");
}

#[test]
fn builtin_list_and_show() {
    let out = run(&["builtin", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["torus", "klein_bottle", "circle_two_arcs", "unit_square"] {
        assert!(text.contains(name), "missing {name} in: {text}");
    }

    // A builtin printed as a file can be fed back in.
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["builtin", "show", "torus:2,1"]);
    assert!(out.status.success());
    let path = write_file(dir.path(), "torus.json", &stdout(&out));
    let out = run(&["verify", &path, "--m-max", "12"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn structured_verify_round_trips() {
    let out = run(&["verify", "builtin:torus:1,1", "--m-max", "10", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["passed"], true);
    assert_eq!(value["volume"], "1");
    // Parsing the emitted report into its schema type and re-rendering it
    // reproduces the bytes exactly.
    let reparsed: affine_lattice::io::VerificationFile = serde_json::from_str(&text).unwrap();
    let rerendered = serde_json::to_string_pretty(&reparsed).unwrap();
    assert_eq!(format!("{rerendered}\n"), text);
}

#[test]
fn poisson_table_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.dat");
    let out = run(&[
        "poisson",
        "--dim",
        "1",
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tail decay : |e(m)| non-increasing (consistent)"), "got: {text}");

    let data = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(data.lines().count(), 4);
    assert!(data.lines().next().unwrap().starts_with("4 "));

    let out = run(&["poisson", "--radius", "-1"]);
    assert_eq!(out.status.code(), Some(2));

    // Amplitude 0: all-zero error column.
    let out = run(&["poisson", "--amplitude", "0", "--format", "structured"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for row in value["rows"].as_array().unwrap() {
        assert_eq!(row["error"], 0.0);
    }
}

#[test]
fn env_overrides_mirror_flags() {
    let dir = tempfile::tempdir().unwrap();
    let square = write_file(dir.path(), "square.json", UNIT_SQUARE);
    let out = bin()
        .args(["count", &square])
        .env("AL_M", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "9\n");
}
