use std::io::Write;
use std::process::{Command, Output, Stdio};

use ccring::json;
use ccring::{AmbientParams, FactorData, FieldCtx};
use serde_json::Value;

fn ccring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccring"))
        .args(args)
        .env_remove("CCRING_SEED")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = ccring(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn published_counts() {
    assert_eq!(
        stdout(&["count", "--p", "5", "--s", "1", "--n", "6", "--lambda", "4"]),
        "62190883161\n"
    );
    assert_eq!(
        stdout(&["count", "--p", "5", "--s", "1", "--n", "6", "--lambda", "-1"]),
        "62190883161\n"
    );
    assert_eq!(
        stdout(&[
            "selfdual",
            "--p",
            "5",
            "--s",
            "1",
            "--n",
            "6",
            "--count-only"
        ]),
        "249381\n"
    );
    assert_eq!(
        stdout(&["count", "--p", "5", "--m", "1", "--s", "1", "--n", "4", "--lambda", "3"]),
        "1176261\n"
    );
}

#[test]
fn extension_field_lambda_and_modulus() {
    let a = stdout(&[
        "count", "--p", "3", "--m", "2", "--s", "1", "--n", "2", "--lambda", "[0,1]",
    ]);
    let b = stdout(&[
        "count",
        "--p",
        "3",
        "--m",
        "2",
        "--s",
        "1",
        "--n",
        "2",
        "--lambda",
        "[0,1]",
        "--modulus",
        "[2,2,1]",
    ]);
    assert!(a.trim().parse::<u128>().is_ok());
    assert!(b.trim().parse::<u128>().is_ok());
    let out = ccring(&[
        "count",
        "--p",
        "3",
        "--m",
        "2",
        "--s",
        "1",
        "--n",
        "2",
        "--lambda",
        "[0,1]",
        "--modulus",
        "[2,0,1]",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["count", "--p", "5", "--s", "0", "--n", "6", "--lambda", "4"][..],
        &[
            "count", "--p", "5", "--s", "1", "--n", "10", "--lambda", "4",
        ],
        &["count", "--p", "5", "--s", "1", "--n", "6", "--lambda", "0"],
        &["count", "--p", "6", "--s", "1", "--n", "5", "--lambda", "1"],
        &["count", "--p", "5", "--s", "1", "--n", "6", "--lambda", "7"],
        &[
            "selfdual",
            "--p",
            "5",
            "--s",
            "1",
            "--n",
            "4",
            "--lambda",
            "3",
            "--count-only",
        ],
        &["count", "--p", "5", "--s", "1", "--n", "6"],
        &["count", "--bogus"],
    ] {
        let out = ccring(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "enumerate",
        "--p",
        "3",
        "--s",
        "1",
        "--n",
        "2",
        "--lambda",
        "1",
        "--limit",
        "100",
    ];
    let a = ccring(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_ccring"))
        .args(args)
        .env("CCRING_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let info = ["info", "--p", "5", "--s", "1", "--n", "6", "--lambda", "-1"];
    assert_eq!(
        stdout(&info),
        stdout(&[&info[..], &["--seed", "99"]].concat())
    );
}

#[test]
fn ndjson_round_trips() {
    let text = stdout(&[
        "enumerate",
        "--p",
        "3",
        "--s",
        "1",
        "--n",
        "2",
        "--lambda",
        "1",
    ]);
    let k = FieldCtx::prime(3).unwrap();
    let fd = FactorData::build(&AmbientParams::new(k.clone(), 1, 2, k.one()).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 256);
    for line in lines {
        let v: Value = serde_json::from_str(line).unwrap();
        let code = json::code_from_json(&fd, &v).unwrap();
        assert_eq!(json::code_to_json(&fd, &code).to_string(), line);
    }
    let limited = stdout(&[
        "enumerate",
        "--p",
        "3",
        "--s",
        "1",
        "--n",
        "2",
        "--lambda",
        "1",
        "--limit",
        "5",
    ]);
    assert_eq!(limited.lines().count(), 5);
}

#[test]
fn dual_reads_stdin_and_files() {
    let k = FieldCtx::prime(5).unwrap();
    let fd =
        FactorData::build(&AmbientParams::new(k.clone(), 1, 4, k.from_int(3)).unwrap()).unwrap();
    let text = stdout(&[
        "enumerate",
        "--p",
        "5",
        "--s",
        "1",
        "--n",
        "4",
        "--lambda",
        "3",
        "--limit",
        "3",
    ]);
    for line in text.lines() {
        let mut child = Command::new(env!("CARGO_BIN_EXE_ccring"))
            .arg("dual")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child
            .stdin
            .take()
            .unwrap()
            .write_all(line.as_bytes())
            .unwrap();
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success());
        let got: Value = serde_json::from_slice(&out.stdout).unwrap();
        let code = json::code_from_json(&fd, &serde_json::from_str(line).unwrap()).unwrap();
        let want = json::dual_to_json(&ccring::dual_code(&fd, &code).unwrap()).unwrap();
        assert_eq!(got, want);
        assert_eq!(got["params"]["lambda"], Value::from(2));
    }
    let dir = std::env::temp_dir().join(format!("ccring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("code.json");
    let output = dir.join("dual.json");
    std::fs::write(&input, text.lines().next().unwrap()).unwrap();
    let out = ccring(&[
        "dual",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["components"][0]["case"], Value::from("I"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selfdual_stream_and_same_ring_dual() {
    let text = stdout(&[
        "selfdual", "--p", "5", "--s", "1", "--n", "6", "--limit", "3",
    ]);
    assert_eq!(text.lines().count(), 3);
    let k = FieldCtx::prime(5).unwrap();
    let fd =
        FactorData::build(&AmbientParams::new(k.clone(), 1, 6, k.from_int(-1)).unwrap()).unwrap();
    for line in text.lines() {
        let code = json::code_from_json(&fd, &serde_json::from_str(line).unwrap()).unwrap();
        assert!(ccring::is_self_dual(&fd, &code).unwrap());
        let mut child = Command::new(env!("CARGO_BIN_EXE_ccring"))
            .args(["dual", "--same-ring"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child
            .stdin
            .take()
            .unwrap()
            .write_all(line.as_bytes())
            .unwrap();
        let out = child.wait_with_output().unwrap();
        let back: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(back, serde_json::from_str::<Value>(line).unwrap());
    }
}

#[test]
fn info_and_idempotents() {
    let v: Value = serde_json::from_str(&stdout(&[
        "info", "--p", "5", "--s", "1", "--n", "6", "--lambda", "-1",
    ]))
    .unwrap();
    assert_eq!(v["total"], Value::from("62190883161"));
    assert_eq!(v["delta"], serde_json::json!([3, 4, 2, 4]));
    let e: Value = serde_json::from_str(&stdout(&[
        "idempotents",
        "--p",
        "5",
        "--s",
        "1",
        "--n",
        "6",
        "--lambda",
        "-1",
    ]))
    .unwrap();
    assert_eq!(e, v["idempotents"]);
    let none: Value = serde_json::from_str(&stdout(&[
        "info", "--p", "5", "--s", "1", "--n", "4", "--lambda", "3",
    ]))
    .unwrap();
    assert!(none["tau"].is_null());
}

#[test]
fn verify_quick_passes() {
    let text = stdout(&["verify", "--level", "quick"]);
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
    assert!(text.contains("checks passed"));
}
