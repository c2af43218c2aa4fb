use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mspace")).args(args).env_remove("MSPACE_DEFAULT_TOL").output().expect("run mspace")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = mspace(args);
    let report = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}; stderr {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), report)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    (f(v) - x).abs() < tol
}

#[test]
fn map_plus_on_z() {
    let (code, r) = json(&["map", "--state", "plus", "--measurements", "z-projectors"]);
    assert_eq!(code, 0);
    for row in r["results"].as_array().unwrap() {
        assert!(close(&row["amplitude"], 0.5f64.sqrt(), 1e-12));
    }
}

#[test]
fn map_zero_on_noisy_pair() {
    let (code, r) = json(&["map", "--state", "zero", "--measurements", "noisy:0.9"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"][0]["amplitude"], 0.9f64.sqrt(), 1e-12));
    assert!(close(&r["results"][1]["amplitude"], 0.1f64.sqrt(), 1e-12));
}

#[test]
fn map_local_carries_structure() {
    let (_, r) = json(&["map", "--state", "bell", "--alice", "noisy:0.9", "--bob", "noisy:0.9"]);
    assert_eq!(r["summary"]["structure"], serde_json::json!([2, 2]));
    assert_eq!(r["results"][1]["label"], "(0,1)");
    assert!(close(&r["results"][0]["probability"], 0.41, 1e-12));
}

#[test]
fn entanglement_examples() {
    let (_, r) = json(&["entanglement", "--state", "bell"]);
    assert!(close(&r["results"][0]["e_state"], 1.0, 1e-12));
    let (_, r) = json(&[
        "entanglement",
        "--state",
        "bell",
        "--alice",
        "noisy:0.9",
        "--bob",
        "noisy:0.9",
        "--measure",
        "concurrence",
    ]);
    assert!(close(&r["results"][0]["e_state"], 1.0, 1e-12));
    assert!(close(&r["results"][0]["e_mspace"], 0.64, 1e-12));
    let (code, r) = json(&["entanglement", "--state", "product0", "--alice", "random:3:1", "--bob", "random:4:2"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"][0]["e_mspace"], 0.0, 1e-10));
}

#[test]
fn entanglement_split_regroups() {
    // |0⟩|φ⁺⟩ on three qubits grouped as 4×2 carries one ebit
    let dir = tempfile::tempdir().unwrap();
    let h = 0.5f64.sqrt();
    let path = dir.path().join("s.json");
    let amps: Vec<[f64; 2]> = (0..8).map(|i| if i == 0 || i == 3 { [h, 0.0] } else { [0.0, 0.0] }).collect();
    std::fs::write(&path, serde_json::json!({"dims": [2, 2, 2], "amplitudes": amps}).to_string()).unwrap();
    let p = path.to_str().unwrap();
    let (_, r) = json(&["entanglement", "--state", p, "--split", "4,2"]);
    assert!(close(&r["results"][0]["e_state"], 1.0, 1e-12));
    let (_, r) = json(&["entanglement", "--state", p, "--split", "2,4"]);
    assert!(close(&r["results"][0]["e_state"], 0.0, 1e-12));
    assert_eq!(mspace(&["entanglement", "--state", p]).status.code(), Some(2));
}

#[test]
fn theorem1_examples() {
    let (code, r) = json(&["theorem1", "--protocol", "noisy-alice:0.9"]);
    assert_eq!(code, 0);
    assert!(close(&r["results"][0]["p_original"], 0.9, 1e-12));
    assert!(close(&r["results"][0]["p_mspace"], 0.9, 1e-12));
    let (_, r) = json(&["theorem1", "--protocol", "always-succeed"]);
    assert!(close(&r["results"][0]["p_mspace"], 1.0, 1e-12));
    let (code, r) = json(&["theorem1", "--random", "--trials", "200", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"].as_array().unwrap().len(), 200);
    assert_eq!(r["seed"], 7);
}

#[test]
fn theorem1_protocol_file() {
    let dir = tempfile::tempdir().unwrap();
    let one = [1.0, 0.0];
    let zero = [0.0, 0.0];
    let id = serde_json::json!([[one, zero], [zero, one]]);
    let p0 = serde_json::json!([[one, zero], [zero, zero]]);
    let p1 = serde_json::json!([[zero, zero], [zero, one]]);
    std::fs::write(
        dir.path().join("state.json"),
        r#"{"dims": [2, 2], "amplitudes": [[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]}"#,
    )
    .unwrap();
    let protocol = serde_json::json!({
        "state": "state.json",
        "alice": {"dim": 2, "operators": [{"label": "0", "matrix": p0}, {"label": "1", "matrix": p1}]},
        "bob_unitaries": [id, id],
        "verify": [{"success": p0, "failure": p1}, {"success": p1, "failure": p0}],
    });
    let path = dir.path().join("protocol.json");
    std::fs::write(&path, protocol.to_string()).unwrap();
    let (code, r) = json(&["theorem1", "--protocol", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(close(&r["results"][0]["p_original"], 1.0, 1e-12));
}

#[test]
fn locc_examples() {
    let (code, r) = json(&["locc", "--state", "bell", "--alice", "z", "--bob", "z"]);
    assert_eq!(code, 0);
    assert!(close(&r["summary"]["fidelity"], 1.0, 1e-12));
    assert_eq!(r["summary"]["monotone"], true);
    let (_, r) = json(&["locc", "--state", "bell", "--alice", "trivial", "--bob", "trivial"]);
    assert!(close(&r["summary"]["fidelity"], 1.0, 1e-12));
    assert_eq!(r["summary"]["ancilla_diagonal"].as_array().unwrap().len(), 1);
    let (code, r) = json(&["locc", "--state", "bell", "--alice", "noisy:0.9", "--bob", "noisy:0.9"]);
    assert_eq!(code, 0);
    for (d, x) in r["summary"]["ancilla_diagonal"].as_array().unwrap().iter().zip([0.41, 0.09, 0.09, 0.41]) {
        assert!(close(d, x, 1e-9));
    }
    assert!(f(&r["summary"]["ancilla_concurrence"]) <= 1.0 + 1e-9);
    let (code, r) =
        json(&["locc", "--state", "bell", "--alice", "noisy:0.9", "--bob", "noisy:0.9", "--outcome", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"].as_array().unwrap().len(), 1);
    assert_eq!(
        mspace(&["locc", "--state", "bell", "--alice", "z", "--bob", "z", "--outcome", "2,0"]).status.code(),
        Some(2)
    );
}

#[test]
fn konrad_examples() {
    let (code, r) = json(&["konrad", "--trials", "5", "--channel", "identity"]);
    assert_eq!(code, 0);
    assert!(f(&r["max_deviation"]) < 1e-12);
    let (code, r) = json(&["konrad", "--trials", "200", "--seed", "3"]);
    assert_eq!(code, 0);
    assert!(f(&r["max_deviation"]) < 1e-8);
    let (code, r) = json(&["konrad", "--two-sided", "--trials", "200"]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["violations"], 0);
}

#[test]
fn modes_examples() {
    let (_, r) = json(&["modes", "--n", "1", "--m", "2"]);
    let row = &r["results"][0];
    assert_eq!((row["compositions"].as_u64(), row["prime"].as_bool()), (Some(2), Some(true)));
    assert_eq!(f(&row["bound_bits"]), 0.0);
    let (_, r) = json(&["modes", "--n", "2", "--m", "2"]);
    assert_eq!(r["results"][0]["compositions"], 3);
    assert_eq!(f(&r["results"][0]["bound_bits"]), 0.0);
    let (code, r) = json(&["modes", "--n-max", "6", "--m-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"].as_array().unwrap().len(), 12);
}

#[test]
fn sweep_examples() {
    let (code, r) = json(&["sweep", "--eta-start", "0.5", "--eta-end", "1.0", "--steps", "6", "--state", "bell"]);
    assert_eq!(code, 0);
    let rows = r["results"].as_array().unwrap();
    assert!(close(&rows[0]["em_concurrence"], 0.0, 1e-12));
    assert!(close(&rows[4]["em_concurrence"], 0.64, 1e-12));
    assert!(close(&rows[5]["em_concurrence"], 1.0, 1e-12));
}

#[test]
fn same_seed_same_bytes_across_thread_counts() {
    for args in [
        vec!["theorem1", "--random", "--trials", "40", "--seed", "11"],
        vec!["konrad", "--trials", "40", "--seed", "5", "--two-sided"],
    ] {
        let run = |threads: &str| {
            Command::new(env!("CARGO_BIN_EXE_mspace"))
                .args(&args)
                .env("RAYON_NUM_THREADS", threads)
                .output()
                .unwrap()
                .stdout
        };
        let one = run("1");
        assert!(!one.is_empty());
        assert_eq!(one, run("4"), "{args:?}");
        assert_eq!(one, run("4"), "{args:?}");
    }
}

#[test]
fn tsv_carries_seed() {
    let out = mspace(&["konrad", "--trials", "3", "--seed", "9", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "# seed\t9"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn modes_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/modes_3x3.json");
    let out = mspace(&["modes", "--n-max", "3", "--m-max", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), std::fs::read_to_string(golden).unwrap());
}

#[test]
fn tolerance_from_environment() {
    // a set off by 1e-6 passes only under a looser tolerance
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let a = (1.0f64 - 2e-6).sqrt();
    std::fs::write(
        &path,
        serde_json::json!({"dim": 1, "operators": [{"label": "only", "matrix": [[[a, 0.0]]]}]}).to_string(),
    )
    .unwrap();
    std::fs::write(dir.path().join("s.json"), r#"{"dims": [1], "amplitudes": [[1, 0]]}"#).unwrap();
    let s = dir.path().join("s.json");
    let args = ["map", "--state", s.to_str().unwrap(), "--measurements", path.to_str().unwrap()];
    assert_eq!(mspace(&args).status.code(), Some(2));
    let loose =
        Command::new(env!("CARGO_BIN_EXE_mspace")).args(args).env("MSPACE_DEFAULT_TOL", "1e-5").output().unwrap();
    assert_eq!(loose.status.code(), Some(0), "{}", String::from_utf8_lossy(&loose.stderr));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["map", "--state", "bell"],
        vec!["modes", "--n", "0", "--m", "2"],
        vec!["sweep", "--eta-start", "1.5"],
        vec!["konrad", "--channel", "bogus"],
        vec!["entanglement", "--state", "bell", "--measure", "negativity"],
    ] {
        assert_eq!(mspace(&args).status.code(), Some(2), "{args:?}");
    }
}
