use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperorbit"))
}

fn example_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/ayadi2.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().expect("spawn");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("wait")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperorbit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_example_file() {
    let o = run(&["check", example_file().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "HYPERCYCLIC");
    assert_eq!(v["witness"], serde_json::json!([0, 1]));
    assert_eq!(v["backend"], "exact");
    assert_eq!(v["certificate"]["type"], "ExactRankProof");
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("C x C*")));
}

#[test]
fn numeric_backend_agrees() {
    let o = run(&["check", "--backend", "numeric", example_file().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "HYPERCYCLIC");
    assert_eq!(v["backend"], "numeric");
}

#[test]
fn example_subcommand_matches_the_shipped_file() {
    let o = run(&["example"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), std::fs::read_to_string(example_file()).unwrap());
}

#[test]
fn output_is_deterministic() {
    let path = example_file();
    let a = run(&["check", path.to_str().unwrap()]);
    let b = run(&["check", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["check", "--backend", "numeric", "--prec", "256", path.to_str().unwrap()]);
    let b = run(&["check", "--backend", "numeric", "--prec", "256", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn too_few_generators_short_circuit() {
    let input = r#"{"n": 2, "generators": [{"A": [["1", "0"], ["0", "1"]], "a": ["1", "0"]}]}"#;
    let o = run_stdin(&["check", "-"], input);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "NOT_HYPERCYCLIC");
    assert_eq!(v["certificate"]["type"], "CountShortfall");
    assert_eq!(v["certificate"]["data"]["required"], 5);
}

#[test]
fn malformed_input_exits_2() {
    let o = run_stdin(&["check", "-"], "{\"n\": 2,");
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "ParseError");

    let singular = r#"{"n": 1, "generators": [{"A": [["0"]], "a": ["1"]}]}"#;
    let o = run_stdin(&["validate", "-"], singular);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["error"].is_object());

    let o = run(&["check", "/nonexistent/input.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn forced_exact_on_numeric_input_fails() {
    let numeric = run(&["example", "--numeric"]);
    let o = run_stdin(&["check", "--backend", "exact", "-"], &String::from_utf8(numeric.stdout).unwrap());
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(json(&o)["error"]["stage"], "instance");
}

#[test]
fn stage_subcommands() {
    let path = example_file();
    let p = path.to_str().unwrap();
    for cmd in ["validate", "normalize", "logs", "density"] {
        let o = run(&[cmd, p]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        json(&o);
    }
    let v = json(&run(&["density", p]));
    assert_eq!(v["status"], "DENSE");
    assert!(v["witness_w0"].is_array());
}

#[test]
fn batch_check_reports_each_input() {
    let good = example_file();
    let bad = scratch("bad.json");
    std::fs::write(&bad, "not json").unwrap();
    let o = run(&["check", good.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 2);
    assert_eq!(items[0]["exit_code"], 0);
    assert_eq!(items[0]["result"]["status"], "HYPERCYCLIC");
    assert_eq!(items[1]["exit_code"], 2);
}

#[test]
fn orbit_writes_csv() {
    let csv = scratch("points.csv");
    let hist = scratch("hist.csv");
    let o = run(&[
        "orbit",
        example_file().to_str().unwrap(),
        "--exponent-bound",
        "2",
        "--budget",
        "1000",
        "--csv-out",
        csv.to_str().unwrap(),
        "--histogram-out",
        hist.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["points"].as_u64().unwrap() + v["overflowed"].as_u64().unwrap(), 625);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("e1,e2,e3,e4,re1,im1,re2,im2"));
    assert_eq!(text.lines().count() as u64, v["points"].as_u64().unwrap() + 1);
    assert!(std::fs::read_to_string(&hist).unwrap().lines().count() >= 1);

    let streamed = json(&run(&["orbit", example_file().to_str().unwrap(), "--exponent-bound", "2", "--budget", "1000"]));
    assert_eq!(streamed["coverage"], v["coverage"]);
    assert_eq!(streamed["points"], v["points"]);
}
