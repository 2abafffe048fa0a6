use std::process::{Command, Output};

use serde_json::Value;

fn kk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kk")).args(args).output().expect("kk runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn conic_decide_example() {
    let out = kk(&["conic", "decide", "--a", "-1", "--b", "-1", "--x", "2"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(recs[0]["member"], true);
    assert_eq!(recs.last().unwrap()["record"], "summary");

    let out = kk(&["conic", "decide", "--a", "-1", "--b", "-1", "--x", "-2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn conic_witness_verifies() {
    let out = kk(&["conic", "witness", "--a", "-1", "--b", "-1", "--x", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(records(&out)[0]["verified"], true);
    let out = kk(&["conic", "witness", "--a", "-1", "--b", "-1", "--x", "-3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn ramification_check_on_x2_minus_t() {
    let out = kk(&["milnor", "ramif-check", "--input", &fixture("ramif_x2_minus_t.json")]);
    assert_eq!(code(&out), 0);
    let rec = &records(&out)[0];
    assert_eq!(rec["verdict"], "certified");
    assert_eq!(rec["level"], 1);
    let alias = kk(&["ramif-check", "--d", "2", "--coeffs", "1;none"]);
    assert_eq!(code(&alias), 0);
    assert_eq!(records(&alias)[0]["class"], rec["class"]);
}

#[test]
fn norm_witness_and_infeasible() {
    let out = kk(&["milnor", "witness", "--d", "2", "--u", "1,0;0,1", "--c", "0,0;1,0;0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(records(&out)[0]["verified"], true);
    let out = kk(&["witness", "--d", "3", "--u", "1,0", "--c", "0,0;0,1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_3() {
    let out = kk(&["lift", "--system", &fixture("malformed.json"), "--point", &fixture("point_one.json")]);
    assert_eq!(code(&out), 3);
    assert_eq!(code(&kk(&["selftest", "nonexistent"])), 3);
    assert_eq!(code(&kk(&["conic", "decide", "--a", "0", "--b", "1", "--x", "1"])), 3);
    assert_eq!(code(&kk(&["--no-such-flag"])), 3);
    assert_eq!(code(&kk(&["lift", "--system", "/no/such/file", "--point", "/no/such/file"])), 3);
}

#[test]
fn lift_square_root() {
    let out = kk(&["lift", "--system", &fixture("sqrt_one_plus_t.json"), "--point", &fixture("point_one.json"), "--precision", "8"]);
    assert_eq!(code(&out), 0);
    let rec = &records(&out)[0];
    assert_eq!(rec["residual"]["at_least"], "8");
    assert_eq!(rec["point"][0]["terms"][2][1], "-1/8");
}

#[test]
fn hypersurface_and_ramified_system() {
    let out = kk(&["solve-hypersurface", "--form", &fixture("conic_f5.json")]);
    assert_eq!(code(&out), 0);
    let rec = &records(&out)[0];
    assert_eq!(rec["verdict"], "solved");
    assert_eq!(rec["point"]["coords"][1]["terms"][0][1], "2");

    let capped = kk(&["solve-hypersurface", "--form", &fixture("cusp.json"), "--q-cap", "1", "--nu-max", "8"]);
    assert_eq!(code(&capped), 1);
    let out = kk(&["solve-hypersurface", "--form", &fixture("cusp.json"), "--q-cap", "2", "--nu-max", "8"]);
    assert_eq!(code(&out), 0);
    assert_eq!(records(&out)[0]["q"], 2);
}

#[test]
fn certification_is_reproducible() {
    let args = ["certify-triple", "--system", &fixture("cusp.json"), "--n", "1", "--c", "1", "--s", "0", "--samples", "8", "--seed", "5"];
    let a = kk(&args);
    assert_eq!(code(&a), 1);
    let mut one = args.to_vec();
    one.extend(["--workers", "1"]);
    let b = kk(&one);
    assert_eq!(a.stdout, b.stdout);
    let pass = kk(&["certify-triple", "--system", &fixture("sqrt_one_plus_t.json"), "--n", "1", "--c", "1", "--s", "0", "--samples", "8"]);
    assert_eq!(code(&pass), 0);
}

#[test]
fn selftest_module_scope() {
    let out = kk(&["selftest", "milnor"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let ids: Vec<i64> = recs.iter().filter(|r| r["record"] == "criterion").map(|r| r["id"].as_i64().unwrap()).collect();
    assert_eq!(ids, vec![7, 8, 9]);
    assert!(recs.iter().filter(|r| r["record"] == "criterion").all(|r| r["passed"] == true));
}
