use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qcc_lab::protocol::{fixtures, PartitionedInput, ProtocolProgram};
use qcc_lab::reductions::and_distribution;
use serde_json::Value;

fn protocols() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("protocols")
}

fn proto(name: &str) -> String {
    protocols().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn loss_of_and_fixture() {
    let r = report(&["loss", "--protocol", &proto("and2.proto"), "--dist", "and"]);
    assert!((r["total"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    let terms = r["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!((terms[0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);

    let dist = proto("and.dist");
    let r = report(&["loss", "--protocol", &proto("and2.proto"), "--dist", &dist]);
    assert!((r["total"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn sensitivity_of_empty_indicator() {
    let r = report(&["sensitivity", "--table", "0x8000"]);
    assert_eq!(r["n"], 4);
    assert_eq!(r["sensitivity"], 4);
    assert_eq!(r["witness"], 0);
}

#[test]
fn simulate_and_on_one_one() {
    let r = report(&[
        "simulate",
        "--protocol",
        &proto("and2.proto"),
        "--input",
        "a_in0=1,b_in0=1",
    ]);
    let d = r["answer_distribution"].as_array().unwrap();
    assert!((d[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["rounds"], 2);
}

#[test]
fn audit_reduce_and_paradox_reports() {
    let a = report(&["audit", "--protocol", &proto("and2.proto")]);
    assert!((a["delta_final"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(a["delta0"].as_f64().unwrap(), 0.0);
    assert_eq!(a["links_hold"], true);

    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("derived.proto");
    let r = report(&[
        "reduce",
        "--protocol",
        &proto("disj2_n2.proto"),
        "--coordinate",
        "1",
        "--write",
        &out.display().to_string(),
    ]);
    assert_eq!(r["upper_bound"].as_f64().unwrap(), 6.0);
    assert!(r["derived_error"].as_f64().unwrap().abs() < 1e-12);
    let derived = ProtocolProgram::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(derived.inputs_of("A").len(), 1);

    let p = report(&["paradox"]);
    assert_eq!(p["classical_error"], "0");
    assert_eq!(p["classical_il"].as_f64().unwrap(), 0.0);
    assert!(p["quantum_il"].as_f64().unwrap() > 0.01);
}

#[test]
fn metrics_on_operator_files() {
    let zero = scratch("zero.json", "[[[1,0],[0,0]],[[0,0],[0,0]]]");
    let half = scratch("half.json", "[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]");
    let r = report(&["metrics", "--functional", "trace-distance", "--rho", &zero, "--sigma", &half]);
    assert!((r["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let r = report(&["metrics", "--functional", "relative-entropy", "--rho", &half, "--sigma", &zero]);
    assert_eq!(r["infinite"], true);
    assert!(r["value"].is_null());

    let bell = scratch(
        "bell.json",
        r#"{"matrix": [[[0.5,0],[0,0],[0,0],[0.5,0]],
                       [[0,0],[0,0],[0,0],[0,0]],
                       [[0,0],[0,0],[0,0],[0,0]],
                       [[0.5,0],[0,0],[0,0],[0.5,0]]],
            "registers": [{"name": "x", "width": 1, "owner": "A", "role": "work"},
                          {"name": "y", "width": 1, "owner": "B", "role": "work"}]}"#,
    );
    let r = report(&["metrics", "--functional", "mutual-information", "--rho", &bell, "--cut", "x"]);
    assert!((r["value"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn csv_output() {
    let out = run(&["--out", "csv", "sensitivity", "--table", "0x8000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("sensitivity,4"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let garbage = scratch("garbage.proto", "{ not json");
    assert_eq!(run(&["loss", "--protocol", &garbage]).status.code(), Some(2));
    assert_eq!(run(&["loss", "--protocol", "/nonexistent/x.proto"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--protocol", &proto("and2.proto"), "--input", "a_in0"]).status.code(),
        Some(2)
    );

    let mut bad = fixtures::and2();
    bad.rounds[0].transfer = vec!["a_in0".into()];
    let bad = scratch("sends_input.proto", &bad.to_json());
    assert_eq!(run(&["loss", "--protocol", &bad]).status.code(), Some(3));
    assert_eq!(
        run(&["simulate", "--protocol", &proto("and2.proto"), "--input", "a_in0=2,b_in0=0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["loss", "--protocol", &proto("promise3_n2.proto")]).status.code(),
        Some(3)
    );
}

#[test]
fn shipped_files_match_fixtures() {
    let expected = [
        ("and2.proto", fixtures::and2()),
        ("disj1_n2.proto", fixtures::disj(2, 1)),
        ("disj2_n2.proto", fixtures::disj(2, 2)),
        ("disj1_n3.proto", fixtures::disj(3, 1)),
        ("disj2_n3.proto", fixtures::disj(3, 2)),
        ("paradox.proto", fixtures::paradox()),
        ("promise3_n2.proto", fixtures::promise3(2)),
        ("noisy_and.proto", fixtures::noisy_and(0.6)),
        ("zero_round.proto", fixtures::zero_round()),
    ];
    for (name, p) in expected {
        let text = std::fs::read_to_string(protocols().join(name)).unwrap();
        let parsed = ProtocolProgram::from_json(&text).unwrap();
        assert!(parsed.validate().is_ok(), "{name}");
        assert_eq!(parsed.to_json(), text, "{name} does not round-trip");
        assert_eq!(text, p.to_json(), "{name} is stale");
    }
    let text = std::fs::read_to_string(protocols().join("and.dist")).unwrap();
    assert_eq!(PartitionedInput::from_json(&text).unwrap(), and_distribution());
}
