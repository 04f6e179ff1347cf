//! End-to-end runs of the `rephom` binary.

use std::process::Command;

use serde_json::Value;

fn rephom(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rephom")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = rephom(args);
    assert!(code != 2, "input error: {err}");
    (code, serde_json::from_str(&out).expect("json report"))
}

#[test]
fn compute_cp2_sl2() {
    let (code, v) = json(&["compute", "--space", "cp:2", "--group", "sl2", "--max-degree", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "rephom/1");
    assert_eq!(v["invariant_series"]["text"], "1 + z^5 + z^7 + z^12");
    let dims = v["invariant_homology_dims"].as_object().unwrap();
    let keys: Vec<&String> = dims.keys().collect();
    let want: Vec<String> = (0..=12).map(|k| k.to_string()).collect();
    assert_eq!(keys, want.iter().collect::<Vec<_>>());
    let nonzero: Vec<&str> = dims.iter().filter(|(_, d)| d != &&Value::from(0)).map(|(k, _)| k.as_str()).collect();
    assert_eq!(nonzero, ["0", "5", "7", "12"]);
    assert!(v["conventions"]["rep_differential"].is_string());
}

#[test]
fn macdonald_a1_verdict() {
    let (code, v) = json(&["macdonald", "--type", "A1", "--r", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["chi_ct_q"]["text"], "1 - q^3");
    assert_eq!(v["chi_product_q"]["text"], "1 - q^3");
    let (code, v) = json(&["macdonald", "--type", "A2", "--qt", "--nq", "4", "--nt", "3"]);
    assert_eq!(code, 0);
    assert!(v["first_mismatch"].is_null());
}

#[test]
fn validate_rejects_nonzero_square() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("badmodel.json");
    std::fs::write(
        &p,
        r#"{"type":"quillen","generators":[{"name":"u","degree":1},{"name":"w","degree":2},{"name":"x","degree":4}],
            "diff":{"w":[{"term":"u"}],"x":[{"term":["b","u","w"]}]}}"#,
    )
    .unwrap();
    let (code, _, err) = rephom(&["validate", "--model", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("d² ≠ 0") && err.contains("residue"), "{err}");
}

#[test]
fn model_file_round_trip_and_compute() {
    let dir = tempfile::tempdir().unwrap();
    let (_, cat) = json(&["catalog"]);
    let cp3 = cat["spaces"].as_array().unwrap().iter().find(|s| s["name"] == "cp(3)").unwrap();
    let p = dir.path().join("cp3.json");
    std::fs::write(&p, serde_json::to_string(&cp3["quillen"]).unwrap()).unwrap();
    let (code, v) = json(&["validate", "--model", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["model"]["parsed"], cp3["quillen"]);
    let (_, a) = json(&["compute", "--model", p.to_str().unwrap(), "--max-degree", "11"]);
    let (_, b) = json(&["compute", "--space", "cp:3", "--max-degree", "11"]);
    assert_eq!(a["homology_dims"], b["homology_dims"]);
}

#[test]
fn sullivan_file_for_truncated_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a2.json");
    std::fs::write(
        &p,
        r#"{"type":"sullivan","generators":[{"name":"z","degree":2,"weight":1},{"name":"s","degree":5,"weight":3}],
            "diff":{"s":[{"coeff":"1","term":{"z":3}}]}}"#,
    )
    .unwrap();
    let (code, v) = json(&["validate", "--model", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["model"]["type"], "sullivan");
    let (code, v) = json(&["hodge", "--model", p.to_str().unwrap(), "--max-degree", "12", "--form-degree", "1"]);
    assert_eq!(code, 0);
    let dims: Vec<&String> = v["pieces"]["1"]["loop_dims"].as_object().unwrap().keys().collect();
    assert_eq!(dims, ["5", "7"]);
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["compute", "--space", "klein:2"],
        vec!["compute", "--space", "cp:2", "--group", "e8"],
        vec!["compute", "--space", "cp:2", "--max-degree", "0"],
        vec!["macdonald", "--type", "F4"],
        vec!["validate", "--model", "/nonexistent/model.json"],
        vec!["bogus"],
    ] {
        let (code, _, _) = rephom(&args);
        assert_eq!(code, 2, "{args:?}");
    }
}

#[test]
fn insufficient_cutoff_names_bound() {
    let (code, _, err) = rephom(&["hodge", "--space", "cp:2", "--max-degree", "12", "--weight-cutoff", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("need at least 13"), "{err}");
}

#[test]
fn reports_are_byte_stable_across_thread_counts() {
    let args = ["drinfeld-check", "--space", "cp:2", "--group", "sl2", "--max-degree", "12"];
    let one = Command::new(env!("CARGO_BIN_EXE_rephom")).args(args).env("REPHOM_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_rephom")).args(args).env("REPHOM_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let (code, _, _) = {
        let o = Command::new(env!("CARGO_BIN_EXE_rephom")).args(args).env("REPHOM_THREADS", "zero").output().unwrap();
        (o.status.code().unwrap(), (), ())
    };
    assert_eq!(code, 2);
}

#[test]
fn ce_check_and_formats() {
    let (code, v) = json(&["ce-check", "--space", "sphere:2", "--max-degree", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PASS");
    let (code, out, _) = rephom(&["series", "--degrees", "4,6", "--max-degree", "12", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("path,value\n"));
    assert!(out.contains("series.coeffs.12,2"));
    let (code, out, _) = rephom(&["acceptance", "--only", "macdonald-q", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS  8"), "{out}");
    assert_eq!(out.lines().count(), 1);
}
