use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn detblow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detblow")).args(args).output().expect("binary runs")
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

fn json_ok(args: &[&str], schema_name: &str) -> Value {
    let out = detblow(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    let compiled = schema(schema_name);
    if let Err(errors) = compiled.validate(&value) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{schema_name} schema violations: {msgs:?}");
    }
    value
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn analyze_minimal_genus_template() {
    let v = json_ok(&["analyze", "--bminimal", "7", "--seed", "1", "--json"], "analyze");
    assert_eq!(v["variety"]["degree"], 7);
    assert_eq!(v["variety"]["genus"], 5);
    assert_eq!(v["variety"]["sigma"], 4);
}

#[test]
fn analyze_linear_template() {
    let v = json_ok(&["analyze", "--linear", "4", "--n", "3", "--seed", "1", "--json"], "analyze");
    assert_eq!(v["variety"]["degree"], 10);
    assert_eq!(v["variety"]["genus"], 11);
    assert_eq!(v["variety"]["sigma"], 4);
}

#[test]
fn secant_points_and_threshold() {
    let v = json_ok(&["secants", "--n", "3", "--sigma", "4", "--seed", "1", "--witness", "--json"], "secants");
    assert_eq!(v["secants"]["dimension"], 0);
    assert_eq!(v["secants"]["degree"], 20);
    if !v["witness"].is_null() {
        assert_eq!(v["witness"]["length"], 4);
        assert_eq!(v["witness"]["verified"], true);
    }
    let v = json_ok(&["secants", "--n", "3", "--sigma", "5", "--seed", "1", "--json"], "secants");
    assert_eq!(v["secants"]["status"], "Empty");
}

#[test]
fn four_secant_of_a_sampled_octic() {
    let sample = detblow(&["sample", "--degrees", "1,2,2;1,2,2", "--seed", "3"]);
    assert_eq!(sample.status.code(), Some(0));
    let text = String::from_utf8(sample.stdout).unwrap();
    let matrix: Value = serde_json::from_str(&text).unwrap();
    assert!(schema("matrix").is_valid(&matrix));

    // The kernel of the two linear entries of the first column spans the line.
    let p = matrix["p"].as_u64().unwrap() as u128;
    let coeffs = |row: usize| -> Vec<u128> {
        let mut c = vec![0u128; 4];
        for term in matrix["entries"][row][0].as_array().unwrap() {
            let k = term["monomial"].as_array().unwrap().iter().position(|e| e == 1).unwrap();
            c[k] = term["coeff"].as_i64().unwrap().rem_euclid(p as i64) as u128;
        }
        c
    };
    let (a, b) = (coeffs(0), coeffs(1));
    // Points with w2 = 1, w3 = 0 and w2 = 0, w3 = 1 solving a.w = b.w = 0.
    let inv = |x: u128| -> u128 {
        let (mut base, mut e, mut r) = (x % p, p - 2, 1u128);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    };
    let det = (a[0] * b[1] % p + p - a[1] * b[0] % p) % p;
    let solve = |k: usize| -> Vec<u128> {
        // a0 w0 + a1 w1 = -a_k, b0 w0 + b1 w1 = -b_k
        let (ra, rb) = ((p - a[k]) % p, (p - b[k]) % p);
        let w0 = (ra * b[1] % p + p - a[1] * rb % p) % p * inv(det) % p;
        let w1 = (a[0] * rb % p + p - ra * b[0] % p) % p * inv(det) % p;
        let mut w = vec![w0, w1, 0, 0];
        w[k] = 1;
        w
    };
    let fmt = |w: Vec<u128>| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let line = format!("{};{}", fmt(solve(2)), fmt(solve(3)));
    let path = scratch("octic.json", &text);
    let v = json_ok(&["secants", "--matrix-file", path.to_str().unwrap(), "--line", &line, "--json"], "secants");
    assert_eq!(v["line_check"]["length"], 4);
}

#[test]
fn blowup_of_the_septic() {
    let v = json_ok(&["blowup", "--degrees", "2,2,2;1,1,1", "--seed", "1", "--json"], "blowup");
    assert_eq!((v["n_embed"].as_u64(), v["degree"].as_u64(), v["sectional_genus"].as_i64()), (Some(10), Some(16), Some(9)));
    assert_eq!(v["counts"]["x_minors"], 18);
    assert_eq!(v["counts"]["bx_entries"], 3);
    assert_eq!(v["counts"]["linear"], 1);
    assert_eq!(v["psi_failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["variables"][0], "x_0_1");
}

#[test]
fn blowup_of_the_sextic_in_the_next_degree() {
    let v = json_ok(&["blowup", "--linear", "3", "--mode", "sigma-plus-one", "--json"], "blowup");
    assert_eq!((v["n_embed"].as_u64(), v["degree"].as_u64(), v["sectional_genus"].as_i64()), (Some(12), Some(20), Some(11)));
    assert_eq!(v["counts"]["x_minors"], 36);
}

#[test]
fn blowup_of_a_linear_quintic_matches_eagon_northcott() {
    let v = json_ok(&["blowup", "--linear", "5", "--n", "3", "--json"], "blowup");
    assert_eq!(v["betti_consistent"], true);
    assert_eq!(v["betti_table"], serde_json::json!([[1, 4, 5], [2, 5, 4]]));
}

#[test]
fn phase_scan_csv() {
    let out = detblow(&["phase-scan", "--n-range", "3", "--sigma-range", "4..6", "--seeds", "1", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let secants: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(7).unwrap()).collect();
    assert_eq!(secants, ["true", "false", "false"]);
    let v = json_ok(&["phase-scan", "--n-range", "3", "--sigma-range", "4", "--seeds", "2", "--json"], "phase_scan");
    assert_eq!(v["rows"][0]["secants"]["nonempty"], true);
}

#[test]
fn phase_scan_marks_cells_over_budget() {
    let out = detblow(&["phase-scan", "--n-range", "4", "--sigma-range", "8", "--seeds", "1", "--max-columns", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("TIMEOUT"), "{text}");
}

#[test]
fn examples_validate_against_schema() {
    let v = json_ok(&["examples", "ex1", "remark34", "--json"], "examples");
    assert_eq!(v["pass"], true);
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.json", "{\"p\": 101,\n \"n\": ");
    let out = detblow(&["analyze", "--matrix-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let shape = scratch(
        "shape.json",
        r#"{"p": 101, "n": 2, "rows": 1, "cols": 2, "degree_matrix": [[1, 1]],
            "entries": [[[{"monomial": [1, 0, 0], "coeff": 1}], [{"monomial": [1, 1, 0], "coeff": 1}]]]}"#,
    );
    let out = detblow(&["analyze", "--matrix-file", shape.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entry (0, 1)"));

    let zero = scratch(
        "zero.json",
        r#"{"p": 101, "n": 2, "rows": 1, "cols": 2, "degree_matrix": [[1, 1]],
            "entries": [[[{"monomial": [1, 0, 0], "coeff": 1}], []]]}"#,
    );
    let out = detblow(&["analyze", "--matrix-file", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = detblow(&["analyze", "--degrees", "2,2,2;1,1,1", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(3));

    let wrong = scratch(
        "wrong.toml",
        r#"[[example]]
id = "ex1"
title = "wrong degree"
[[example.parts]]
label = "C"
n = 3
degrees = "2,2,2;1,1,1"
curve = { dimension = 1, degree = 8 }
"#,
    );
    let out = detblow(&["examples", "--expectations", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("MISMATCH"));

    assert_eq!(detblow(&["analyze", "--prime", "100", "--linear", "2"]).status.code(), Some(1));
    assert_eq!(detblow(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn sample_round_trips_through_analyze() {
    let out = detblow(&["sample", "--linear", "3", "--seed", "9"]);
    let path = scratch("cubic.json", &String::from_utf8(out.stdout).unwrap());
    let v = json_ok(&["analyze", "--matrix-file", path.to_str().unwrap(), "--json"], "analyze");
    assert_eq!(v["variety"]["degree"], 6);
    assert_eq!(v["source"]["seed"], 9);
}
