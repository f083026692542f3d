//! End-to-end tests of the binary: exit codes, report shapes, and the
//! determinism contract, with fixtures built through the core crate.

use serde_json::{json, Value};
use sharpflat_core::ring::IwasawaElem;
use sharpflat_core::scalar::{PAdicScalar, PadicCtx};
use sharpflat_core::sprung::generate_seq;
use std::process::{Command, Output};

type Elem = IwasawaElem<PAdicScalar>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sharpflat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_tmp(name: &str, content: &Value) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("sharpflat-test-{}-{name}", std::process::id()));
    std::fs::write(&path, serde_json::to_string(content).unwrap()).unwrap();
    path
}

fn render(e: &Elem) -> Vec<String> {
    e.poly().coeffs().iter().map(|c| c.value().to_string()).collect()
}

#[test]
fn ring_phi_example() {
    let out = run(&["ring", "--phi", "--m", "1", "--p", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["display"], "X^2+3X+3");
    assert_eq!(v["coeffs"], json!(["3", "3", "1"]));
}

#[test]
fn malformed_json_exits_with_schema_code() {
    let path = std::env::temp_dir().join(format!("sharpflat-bad-{}.json", std::process::id()));
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"]["kind"], "schema");
}

#[test]
fn decompose_base_case() {
    let input = json!({
        "p": 5, "n": 2, "ap": "0",
        "terms": [["1"], ["0", "1"]],
    });
    let path = write_tmp("base.json", &input);
    let out = run(&["decompose", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["sharp"], json!(["1"]));
    assert_eq!(v["flat"], json!(["0", "1"]));
    assert_eq!(v["checks"]["oracle_agreement"], "ok");
}

#[test]
fn decompose_rejects_norm_violation() {
    let input = json!({
        "p": 3, "n": 2, "ap": "0",
        "terms": [["1"], ["1"], ["1"]],
    });
    let path = write_tmp("broken.json", &input);
    let out = run(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "math-contract");
}

#[test]
fn logmatrix_reports_and_precision_exhaustion() {
    let out = run(&["logmatrix", "--p", "3", "--ap", "3", "--m", "1", "--N", "5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["denom_exp"], 2);
    assert_eq!(v["convergence_defect_zero"], true);
    assert_eq!(v["det_contract"], true);
    // N too small for the tracked denominators
    let out = run(&["logmatrix", "--p", "3", "--ap", "3", "--m", "2", "--N", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn selftest_deterministic_and_green() {
    let a = run(&["selftest", "--seed", "11", "--p", "3", "--n", "2", "--M", "2"]);
    let b = run(&["selftest", "--seed", "11", "--p", "3", "--n", "2", "--M", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical for a fixed seed");
    let v = stdout_json(&a);
    assert_eq!(v["all_passed"], true);
}

#[test]
fn eigen_table_feeds_admissible_scan() {
    let table = run(&[
        "eigen-table", "--curve", "0,-1,1,-10,-20", "--n0", "11", "--bound", "50",
    ]);
    assert!(table.status.success());
    let tjson = stdout_json(&table);
    assert_eq!(tjson["entries"]["13"], 4);
    let path = write_tmp("table.json", &tjson);
    let out = run(&[
        "admissible", "--p", "5", "--n", "1", "--dk", "-8", "--bound", "50", "--table",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let ells: Vec<u64> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["ell"].as_u64().unwrap())
        .collect();
    assert_eq!(ells, vec![7, 13, 23, 37, 47]);
    let thirteen = &v["reports"][1];
    assert_eq!(thirteen["epsilons"], json!([-1]));
    assert_eq!(thirteen["frobenius"][0]["unit_eig"], "4");
}

#[test]
fn pstab_round_trip() {
    let c = PadicCtx::new(3, 6).unwrap();
    let s = Elem::from_residues(c, 2, &[1, 2, 0, 4, 1, 0, 1, 0, 1]).unwrap();
    let f = Elem::from_residues(c, 2, &[2, 0, 1, 1, 0, 5, 0, 3, 0]).unwrap();
    let seq = generate_seq(&s, &f, c.zero()).unwrap();
    let input = json!({
        "p": 3, "n": 6, "ap": "0",
        "terms": seq.terms().iter().map(render).collect::<Vec<_>>(),
    });
    let path = write_tmp("pstab.json", &input);
    let out = run(&["pstab", "--input", path.to_str().unwrap(), "--lambda", "alpha"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["projection_compatible"], true);
    assert_eq!(v["stab_identity_per_level"], json!([true, true]));
    assert_eq!(v["terms"][2]["denom_exp"], 4);
    // a sequence too shallow in precision for the requested digits
    let out = run(&[
        "pstab", "--input", path.to_str().unwrap(), "--lambda", "alpha", "--target-n", "4",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn theta_assembly_and_factorization() {
    // build tables whose assembled elements reproduce a generated sequence
    let c = PadicCtx::new(3, 2).unwrap();
    let s = Elem::from_residues(c, 2, &[1, 2, 0, 1, 1, 0, 2, 0, 1]).unwrap();
    let f = Elem::from_residues(c, 2, &[0, 1, 1, 2, 0, 1, 0, 1, 0]).unwrap();
    let seq = generate_seq(&s, &f, c.zero()).unwrap();
    let tables: Vec<Value> = seq
        .terms()
        .iter()
        .enumerate()
        .map(|(m, t)| {
            let g = t.gamma_coeffs().unwrap();
            let d = g.len();
            let entries: Vec<Value> = (0..d)
                .map(|k| {
                    json!({
                        "label": [0, (d - k) % d],
                        "value": g[k].value().to_string(),
                    })
                })
                .collect();
            json!({"p": 3, "n": 2, "m": m, "delta_order": 1, "entries": entries})
        })
        .collect();
    let input = json!({"p": 3, "n": 2, "ap": "0", "tables": tables});
    let path = write_tmp("theta.json", &input);
    let out = run(&["theta", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["norm_relation"], "ok");
    assert_eq!(v["assembled"][2], json!(render(seq.term(2))));
    assert!(v["factorization"]["sharp"].is_array());
}

#[test]
fn mock_pipeline() {
    let c = PadicCtx::new(3, 2).unwrap();
    let mk = |r: &[u64]| Elem::from_residues(c, 2, r).unwrap();
    let seq_a = generate_seq(&mk(&[1, 2, 1]), &mk(&[2, 0, 1]), c.zero()).unwrap();
    let seq_b = generate_seq(&mk(&[0, 1, 1]), &mk(&[1, 1, 0]), c.zero()).unwrap();
    let rows: Vec<Value> = (0..=2u32)
        .map(|m| json!([render(seq_a.term(m)), render(seq_b.term(m))]))
        .collect();
    let wit = |x: &Elem| x.poly().coeff(0).value().to_string();
    let input = json!({
        "p": 3, "n": 2, "ap": "0", "horizon": 2,
        "rows": rows,
        "witnesses": {
            "d0": [wit(seq_a.term(0)), wit(seq_b.term(0))],
            "d1_minus_ap_d0": [
                seq_a.term(1).project(0).unwrap().poly().coeff(0).value().to_string(),
                seq_b.term(1).project(0).unwrap().poly().coeff(0).value().to_string(),
            ],
        },
    });
    let path = write_tmp("mock.json", &input);
    let out = run(&["mock", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["qsystem_check"]["status"], "ok");
    assert_eq!(v["surjective"]["sharp"], true);
    assert_eq!(v["mod_x_identities"], true);
}

#[test]
fn ring_element_operations() {
    let input = json!({"p": 3, "n": 2, "m": 2, "coeffs": ["1", "1"]});
    let path = write_tmp("elem.json", &input);
    // project gamma to level 0: gamma = 1
    let out = run(&[
        "ring", "--p", "3", "--n", "2", "--project", "0", "--input", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["coeffs"], json!(["1"]));
    // involute gamma at level 2: gamma^8 = (1+X)^8 reduced
    let out = run(&[
        "ring", "--p", "3", "--n", "2", "--involute", "--input", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
}

#[test]
fn mock_reports_violations_diagnostically() {
    // a model whose witnesses are dead: the report carries the violated
    // axiom, exit code stays 0 (diagnostic return)
    let c = PadicCtx::new(3, 1).unwrap();
    let mk = |r: &[u64]| Elem::from_residues(c, 1, r).unwrap();
    let seq_a = generate_seq(&mk(&[0, 1]), &mk(&[1, 1]), c.zero()).unwrap();
    let seq_b = generate_seq(&mk(&[0, 2]), &mk(&[2, 0]), c.zero()).unwrap();
    let rows: Vec<Value> = (0..=1u32)
        .map(|m| json!([render(seq_a.term(m)), render(seq_b.term(m))]))
        .collect();
    let input = json!({
        "p": 3, "n": 1, "ap": "0", "horizon": 1,
        "rows": rows,
        "witnesses": {
            "d0": ["0", "0"],
            "d1_minus_ap_d0": ["1", "2"],
        },
    });
    let path = write_tmp("mock-bad.json", &input);
    let out = run(&["mock", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["qsystem_check"]["status"], "violated");
    assert_eq!(v["qsystem_check"]["axiom"], "PrimitiveD0");
}

#[test]
fn euler_rec1_solve_mode() {
    let c = PadicCtx::new(3, 2).unwrap();
    let mk = |r: &[u64]| Elem::from_residues(c, 2, r).unwrap();
    // unit * L-pair as a rank-1 coordinate, functional row (1)
    let unit = mk(&[2, 1, 0, 1]);
    let ls = mk(&[1, 0, 2, 1, 1]);
    let lf = mk(&[2, 1, 0, 0, 1]);
    let seq = generate_seq(&unit.mul(&ls), &unit.mul(&lf), c.zero()).unwrap();
    let levels: Vec<Value> = seq.terms().iter().map(|t| json!([render(t)])).collect();
    let input = json!({
        "coords": {"p": 3, "n": 2, "ap": "0", "levels": levels, "basis_compatible": true},
        "functional": {"kind": "boundary", "p": 3, "n": 2, "m": 2, "row": [["1"]]},
        "lp": {"sharp": render(&ls), "flat": render(&lf)},
    });
    let path = write_tmp("rec1.json", &input);
    let out = run(&["euler", "check-rec1", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["mode"], "solve");
    assert_eq!(v["ok"], true);
    // verify mode with the known unit
    let mut with_unit = input.clone();
    with_unit["unit"] = json!(render(&unit));
    let path = write_tmp("rec1b.json", &with_unit);
    let out = run(&["euler", "check-rec1", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["ok"], true);
}
