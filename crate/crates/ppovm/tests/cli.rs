use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn ppovm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppovm"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = ppovm(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn gen(dir: &Path, args: &[&str], file: &str) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", file]);
    let out = ppovm(dir, &full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    dir.join(file)
}

fn write(dir: &Path, file: &str, v: &Value) {
    std::fs::write(dir.join(file), serde_json::to_string(v).unwrap()).unwrap();
}

fn matrix(rows: usize, cols: usize, real: &[f64]) -> Value {
    json!({"rows": rows, "cols": cols, "data": real.iter().map(|x| [*x, 0.0]).collect::<Vec<_>>()})
}

fn entries(m: &Value) -> Vec<[f64; 2]> {
    serde_json::from_value(m["data"].clone()).unwrap()
}

#[test]
fn pauli_probe_validates_with_half_identity() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    let report = ok(dir.path(), &["validate", "pp.json", "--kind", "ppovm"]);
    assert_eq!(report["valid"], true);
    let rho = entries(&report["norm_state"]);
    let expected = [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]];
    for (a, b) in rho.iter().zip(expected) {
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }
}

#[test]
fn incomplete_povm_fails_with_residual() {
    let dir = TempDir::new().unwrap();
    let povm = json!({"effects": [{"label": "0", "matrix": matrix(2, 2, &[1.0, 0.0, 0.0, 0.0])}]});
    write(dir.path(), "povm.json", &povm);
    let out = ppovm(
        dir.path(),
        &[
            "validate",
            "povm.json",
            "--kind",
            "povm",
            "--format",
            "table",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("completeness residual"));
}

#[test]
fn malformed_and_missing_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"rows\": 2").unwrap();
    assert_eq!(
        ppovm(dir.path(), &["validate", "bad.json", "--kind", "state"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ppovm(dir.path(), &["validate", "nope.json", "--kind", "state"])
            .status
            .code(),
        Some(2)
    );
    write(
        dir.path(),
        "short.json",
        &json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]}),
    );
    assert_eq!(
        ppovm(dir.path(), &["validate", "short.json", "--kind", "state"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn state_validation() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "good.json",
        &matrix(2, 2, &[0.25, 0.0, 0.0, 0.75]),
    );
    write(
        dir.path(),
        "bad.json",
        &matrix(2, 2, &[1.25, 0.0, 0.0, -0.25]),
    );
    assert_eq!(
        ok(dir.path(), &["validate", "good.json", "--kind", "state"])["valid"],
        true
    );
    assert_eq!(
        ppovm(dir.path(), &["validate", "bad.json", "--kind", "state"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn convert_identity_and_contraction() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["identity"], "id.json");
    let choi = ok(
        dir.path(),
        &["convert", "id.json", "--direction", "kraus2choi"],
    );
    assert_eq!(choi["kind"], "choi");
    let psi_plus = [
        1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0,
    ];
    for (a, b) in entries(&choi["matrix"]).iter().zip(psi_plus) {
        assert!((a[0] - b).abs() < 1e-15 && a[1].abs() < 1e-15);
    }

    // ω₀ = I ⊗ |0⟩⟨0|
    let omega0 = json!({"kind": "choi", "d": 2, "matrix": matrix(4, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 0.0,
    ])});
    write(dir.path(), "omega0.json", &omega0);
    let kraus = ok(
        dir.path(),
        &["convert", "omega0.json", "--direction", "choi2kraus"],
    );
    assert_eq!(kraus["kind"], "kraus");
    assert_eq!(kraus["ops"].as_array().unwrap().len(), 2);
}

#[test]
fn convert_warns_on_non_trace_preserving_input() {
    let dir = TempDir::new().unwrap();
    let half = json!({"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": [matrix(2, 2, &[0.5, 0.0, 0.0, 0.5])]});
    write(dir.path(), "half.json", &half);
    let out = ppovm(
        dir.path(),
        &["convert", "half.json", "--direction", "kraus2choi"],
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not trace preserving"));
}

#[test]
fn identity_vs_contraction_probabilities() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["identity-vs-contraction"], "ivc.json");
    gen(dir.path(), &["identity"], "id.json");
    gen(dir.path(), &["contraction"], "a0.json");
    let p = ok(dir.path(), &["probs", "ivc.json", "id.json"]);
    assert_eq!(p["probabilities"][0]["label"], "identity");
    assert_eq!(p["probabilities"][0]["probability"], 1.0);
    assert_eq!(p["probabilities"][1]["probability"], 0.0);
    let p = ok(dir.path(), &["probs", "ivc.json", "a0.json"]);
    assert_eq!(p["probabilities"][0]["probability"], 0.0);
    assert_eq!(p["probabilities"][1]["probability"], 1.0);
}

#[test]
fn pauli_probe_probabilities_sum_to_one() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    gen(
        dir.path(),
        &["random-channel", "--kraus", "3", "--seed", "4"],
        "ch.json",
    );
    let p = ok(dir.path(), &["probs", "pp.json", "ch.json"]);
    assert_eq!(p["probabilities"].as_array().unwrap().len(), 36);
    assert!((p["sum"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn probs_dimension_mismatch_exits_one() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    gen(dir.path(), &["identity", "--d", "3"], "id3.json");
    assert_eq!(
        ppovm(dir.path(), &["probs", "pp.json", "id3.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn tomography_from_exact_probabilities() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    gen(dir.path(), &["identity"], "id.json");
    let r = ok(
        dir.path(),
        &[
            "tomo",
            "pp.json",
            "--channel",
            "id.json",
            "--truth",
            "id.json",
        ],
    );
    assert!(r["hs_error"].as_f64().unwrap() < 1e-7);
    assert_eq!(r["ic"]["complete"], true);

    gen(dir.path(), &["identity-vs-contraction"], "ivc.json");
    let out = ppovm(
        dir.path(),
        &[
            "tomo",
            "ivc.json",
            "--channel",
            "id.json",
            "--format",
            "table",
        ],
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("deficiency = 11"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("deficiency = 11"));
}

#[test]
fn simulation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    gen(dir.path(), &["depolarizing", "--p", "0.3"], "dep.json");
    let a = ppovm(
        dir.path(),
        &[
            "simulate", "dep.json", "pp.json", "--shots", "5000", "--seed", "9",
        ],
    );
    let b = ppovm(
        dir.path(),
        &[
            "simulate", "dep.json", "pp.json", "--shots", "5000", "--seed", "9",
        ],
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let counts: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(counts["shots"], 5000);
    assert_eq!(counts["seed"], 9);
    let total: u64 = counts["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(total, 5000);
    assert_eq!(
        ppovm(
            dir.path(),
            &["simulate", "dep.json", "pp.json", "--shots", "0"]
        )
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn zero_error_simulation() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["identity-vs-contraction"], "ivc.json");
    gen(dir.path(), &["identity"], "id.json");
    let counts = ok(
        dir.path(),
        &["simulate", "id.json", "ivc.json", "--shots", "2000"],
    );
    assert_eq!(counts["counts"]["identity"], 2000);
    assert_eq!(counts["counts"]["contraction"], 0);
}

#[test]
fn tomography_from_simulated_counts() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    gen(dir.path(), &["random-channel", "--seed", "1"], "ch.json");
    let out = ppovm(
        dir.path(),
        &[
            "simulate",
            "ch.json",
            "pp.json",
            "--shots",
            "1000000",
            "--seed",
            "3",
            "--out",
            "counts.json",
        ],
    );
    assert!(out.status.success());
    let r = ok(
        dir.path(),
        &[
            "tomo",
            "pp.json",
            "--counts",
            "counts.json",
            "--truth",
            "ch.json",
        ],
    );
    assert!(r["hs_error"].as_f64().unwrap() < 0.02);
}

#[test]
fn discriminate_identity_and_sigma_z() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["unitary", "--phases", "0,0"], "i.json");
    gen(
        dir.path(),
        &["unitary", "--phases", "0,3.141592653589793"],
        "z.json",
    );
    let r = ok(dir.path(), &["discriminate", "i.json", "z.json"]);
    assert_eq!(r["zero_in_hull"], true);
    assert_eq!(r["necessary"], true);
    assert!(r["overlap"].as_f64().unwrap() < 1e-12);
    let rates = r["plan"]["error_rates"].as_array().unwrap();
    assert!(rates.iter().all(|x| x.as_f64().unwrap().abs() < 1e-9));
    assert_eq!(r["plan"]["perfect"], true);
}

#[test]
fn discriminate_needs_five_copies() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["unitary", "--phases", "0,0"], "i.json");
    gen(
        dir.path(),
        &["unitary", "--phases", "0,0.6283185307179586"],
        "p.json",
    );
    let r = ok(
        dir.path(),
        &["discriminate", "i.json", "p.json", "--copies", "10"],
    );
    assert_eq!(r["zero_in_hull"], false);
    assert_eq!(r["min_copies"], 5);
    assert!(r["plan"].is_null());
}

#[test]
fn discriminate_identical_unitaries_fails() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["unitary", "--phases", "0,0"], "i.json");
    let out = ppovm(dir.path(), &["discriminate", "i.json", "i.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("identical"));
}

#[test]
fn discriminate_rejects_non_unitary() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "m.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 0.5]));
    gen(dir.path(), &["unitary", "--phases", "0,0"], "i.json");
    assert_eq!(
        ppovm(dir.path(), &["discriminate", "i.json", "m.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn couples_files_are_accepted_wherever_ppovms_are() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["six-state", "--couples"], "six.json");
    gen(dir.path(), &["identity"], "id.json");
    let couples: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("six.json")).unwrap())
            .unwrap();
    assert_eq!(couples["couples"].as_array().unwrap().len(), 6);
    assert_eq!(
        ok(dir.path(), &["validate", "six.json", "--kind", "ppovm"])["valid"],
        true
    );
    let p = ok(dir.path(), &["probs", "six.json", "id.json"]);
    assert!((p["sum"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), &["pauli-probe"], "pp.json");
    gen(dir.path(), &["depolarizing"], "dep.json");
    let a = ppovm(dir.path(), &["tomo", "pp.json", "--channel", "dep.json"]);
    let b = ppovm(dir.path(), &["tomo", "pp.json", "--channel", "dep.json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
