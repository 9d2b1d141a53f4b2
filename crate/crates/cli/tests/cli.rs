use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_liouville-fock"));
    cmd.env_remove("LIOUVILLE_FOCK_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path.display().to_string()
}

fn two_bath(plus: f64, minus: f64) -> Value {
    json!({
        "statistics": "fermionic",
        "n_modes": 1,
        "H_hop": [[[0.3, 0.0]]],
        "lindblad_ops": [
            {"u": [[minus.sqrt(), 0.0]], "v": [[0.0, 0.0]]},
            {"u": [[0.0, 0.0]], "v": [[plus.sqrt(), 0.0]]}
        ]
    })
}

fn pure_decay(cutoff: usize, gamma: f64) -> Value {
    json!({
        "statistics": "bosonic",
        "n_modes": 1,
        "cutoff": cutoff,
        "H_hop": [[[0.0, 0.0]]],
        "lindblad_ops": [{"u": [[gamma.sqrt(), 0.0]], "v": [[0.0, 0.0]]}]
    })
}

#[test]
fn verify_algebra_fermionic() {
    let out = run(&["verify-algebra", "--statistics", "fermionic", "--n", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "verify-algebra");
    assert_eq!(report["result"]["passed"], true);
    assert!(report["result"]["max_residual"].as_f64().unwrap() <= 1e-13);
    assert!(report["result"]["gram_deviation"].as_f64().unwrap() <= 1e-13);
    assert_eq!(report["result"]["basis_size"], 64);
}

#[test]
fn verify_algebra_bosonic_interior() {
    let out = run(&[
        "verify-algebra",
        "--statistics",
        "bosonic",
        "--n",
        "1",
        "--cutoff",
        "4",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let result = &stdout_json(&out)["result"];
    assert_eq!(result["algebra"]["interior_restricted"], true);
    assert!(result["max_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn input_errors_exit_two() {
    let out = run(&["verify-algebra", "--statistics", "fermionic", "--n", "0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n_modes must be ≥ 1"));

    let out = run(&["verify-algebra", "--statistics", "bosonic", "--n", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cutoff"));

    let out = run(&["verify-algebra", "--statistics", "anyonic", "--n", "1"]);
    assert_eq!(code(&out), 2);

    let out = bin()
        .args(["verify-algebra", "--statistics", "fermionic", "--n", "1"])
        .env("LIOUVILLE_FOCK_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("LIOUVILLE_FOCK_THREADS"));
}

#[test]
fn thread_cap_is_honoured() {
    let out = bin()
        .args(["verify-algebra", "--statistics", "fermionic", "--n", "2"])
        .env("LIOUVILLE_FOCK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

fn max_identity_deviation(gram: &Value) -> f64 {
    let rows = gram.as_array().unwrap();
    let mut worst = 0.0f64;
    for (r, row) in rows.iter().enumerate() {
        for (c, z) in row.as_array().unwrap().iter().enumerate() {
            let (re, im) = complex(z);
            let want = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((re - want).hypot(im));
        }
    }
    worst
}

#[test]
fn basis_export_fermionic_single_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("basis");
    let out = run(&[
        "basis",
        "--statistics",
        "fermionic",
        "--n",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout_json(&out)["result"]["size"], 4);
    let read = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(out_dir.join(name)).unwrap()).unwrap()
    };
    let gram = read("gram.json");
    assert_eq!(gram.as_array().unwrap().len(), 4);
    assert_eq!(max_identity_deviation(&gram), 0.0);
    let kets = read("kets.json");
    assert_eq!(kets.as_array().unwrap().len(), 4);
    assert_eq!(kets[0].as_array().unwrap().len(), 4);
    // First ket is the vacuum |0><0|.
    assert_eq!(complex(&kets[0][0]), (1.0, 0.0));
    let indices = read("indices.json");
    assert_eq!(indices[0]["index"], json!([0, 0]));
    assert_eq!(read("bras.json").as_array().unwrap().len(), 4);
}

#[test]
fn basis_export_bosonic() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "basis",
        "--statistics",
        "bosonic",
        "--n",
        "1",
        "--cutoff",
        "6",
        "--max-index",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let gram: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("gram.json")).unwrap())
            .unwrap();
    assert_eq!(gram.as_array().unwrap().len(), 9);
    assert!(max_identity_deviation(&gram) <= 1e-10);
}

#[test]
fn basis_index_beyond_margin_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "basis",
        "--statistics",
        "bosonic",
        "--n",
        "1",
        "--cutoff",
        "6",
        "--max-index",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let msg = stderr(&out);
    assert!(msg.contains("cutoff - 2"), "{msg}");
    assert!(!dir.path().join("kets.json").exists());
}

#[test]
fn ness_two_bath_occupation() {
    let dir = tempfile::tempdir().unwrap();
    let (plus, minus) = (0.3, 0.9);
    let model = write(dir.path(), "model.json", &two_bath(plus, minus));
    let out = run(&["ness", &model]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let result = &stdout_json(&out)["result"];
    let (occ, im) = complex(&result["occupations"][0]);
    assert!((occ - plus / (plus + minus)).abs() <= 1e-10);
    assert!(im.abs() <= 1e-12);
    assert_eq!(result["null_dim"], 1);
    let rho = &result["rho_ness"];
    assert!((complex(&rho[0][0]).0 - minus / (plus + minus)).abs() <= 1e-10);
}

#[test]
fn ness_pure_decay_is_vacuum() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "model.json", &pure_decay(4, 0.6));
    let out = run(&["ness", &model]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let result = &stdout_json(&out)["result"];
    let rho = result["rho_ness"].as_array().unwrap();
    assert_eq!(rho.len(), 5);
    for (r, row) in rho.iter().enumerate() {
        for (c, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if (r, c) == (0, 0) { 1.0 } else { 0.0 };
            let (re, im) = complex(z);
            assert!((re - want).hypot(im) <= 1e-9);
        }
    }
    assert!((result["spectral_gap"].as_f64().unwrap() - 0.6).abs() <= 1e-9);
}

#[test]
fn ness_observables() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "model.json", &two_bath(0.5, 0.5));
    let obs = write(
        dir.path(),
        "obs.json",
        &json!([
            {"kind": "identity", "name": "one"},
            {"kind": "number", "name": "n1", "mode": 1},
            {"kind": "parity", "name": "P"},
            {"kind": "bilinear", "name": "twice n", "matrix": [[[2.0, 0.0]]]},
            {"kind": "matrix", "name": "sigma_x", "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
        ]),
    );
    let out = run(&["ness", &model, "--observables", &obs]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let values: Vec<(String, f64)> = stdout_json(&out)["result"]["expectations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["name"].as_str().unwrap().to_owned(),
                complex(&e["value"]).0,
            )
        })
        .collect();
    let expect = [
        ("one", 1.0),
        ("n1", 0.5),
        ("P", 0.0),
        ("twice n", 1.0),
        ("sigma_x", 0.0),
    ];
    for ((name, got), (want_name, want)) in values.iter().zip(expect) {
        assert_eq!(name, want_name);
        assert!((got - want).abs() <= 1e-10, "{name}: {got}");
    }

    let bad = write(
        dir.path(),
        "bad.json",
        &json!([{"kind": "number", "name": "n9", "mode": 9}]),
    );
    let out = run(&["ness", &model, "--observables", &bad]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n9"));
}

#[test]
fn ness_degenerate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "model.json",
        &json!({
            "statistics": "fermionic", "n_modes": 1,
            "H_hop": [[[1.0, 0.0]]], "lindblad_ops": []
        }),
    );
    let out = run(&["ness", &model]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("null_dim = 2"));
    let result = &stdout_json(&out)["result"];
    assert_eq!(result["degenerate"], true);
    assert_eq!(result["null_basis"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_and_invalid_models() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        "{\n  \"statistics\": \"fermionic\",\n  \"n_modes\": 1,,\n}",
    )
    .unwrap();
    let out = run(&["ness", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let mut model = two_bath(0.2, 0.4);
    model["H_hop"] = json!([[[0.0, 1.0]]]);
    let out = run(&["ness", &write(dir.path(), "nonherm.json", &model)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("H_hop"), "{}", stderr(&out));

    let mut model = two_bath(0.2, 0.4);
    model["lindblad_ops"][1]["v"] = json!([1.0]);
    let out = run(&["ness", &write(dir.path(), "badop.json", &model)]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("lindblad_ops[1].v"),
        "{}",
        stderr(&out)
    );

    let mut model = two_bath(0.2, 0.4);
    model["gamma"] = json!(1.0);
    let out = run(&["ness", &write(dir.path(), "extra.json", &model)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("gamma"), "{}", stderr(&out));

    let out = run(&["ness", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

fn result_section(text: &str) -> &str {
    let at = text.find("\n  \"result\":").expect("result section");
    &text[at..]
}

#[test]
fn report_reingest_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let model = json!({
        "statistics": "bosonic", "n_modes": 2, "cutoff": 3,
        "H_hop": [[[0.7, 0.0], [0.1, 0.2]], [[0.1, -0.2], [-0.4, 0.0]]],
        "H_pair": [[[0.05, 0.0], [0.02, 0.01]], [[0.02, 0.01], [0.0, 0.0]]],
        "lindblad_ops": [
            {"u": [[0.8, 0.0], [0.0, 0.0]], "v": [[0.0, 0.0], [0.1, 0.0]]},
            {"u": [[0.0, 0.0], [0.6, 0.1]], "v": [[0.0, 0.0], [0.0, 0.0]]}
        ]
    });
    let model = write(dir.path(), "model.json", &model);
    for cmd in ["ness", "spectrum"] {
        let first = dir.path().join(format!("{cmd}-1.json"));
        let second = dir.path().join(format!("{cmd}-2.json"));
        let out = run(&[cmd, &model, "--out", first.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let out = run(&[
            cmd,
            first.to_str().unwrap(),
            "--out",
            second.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let a = std::fs::read_to_string(&first).unwrap();
        let b = std::fs::read_to_string(&second).unwrap();
        assert_eq!(result_section(&a), result_section(&b));
        let (ra, rb): (Value, Value) = (
            serde_json::from_str(&a).unwrap(),
            serde_json::from_str(&b).unwrap(),
        );
        assert_eq!(ra["model"], rb["model"]);
    }
}

#[test]
fn spectrum_of_two_bath_fermion() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = 0.8;
    let mut model = two_bath(gamma / 2.0, gamma / 2.0);
    model["H_hop"] = json!([[[0.0, 0.0]]]);
    let model = write(dir.path(), "model.json", &model);
    let out = run(&["spectrum", &model]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let result = &stdout_json(&out)["result"];
    let mut re: Vec<f64> = result["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| complex(z).0)
        .collect();
    re.sort_by(f64::total_cmp);
    let want = [-2.0 * gamma, -gamma, -gamma, 0.0];
    for (g, w) in re.iter().zip(want) {
        assert!((g - w).abs() <= 1e-10, "{re:?}");
    }
    assert_eq!(result["zero_modes"], 1);
    assert_eq!(result["dissipative"], true);
}
