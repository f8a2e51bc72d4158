use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kahan-aromas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kahan-aromas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn lv_divfree_file() -> PathBuf {
    let out = run(&["corpus", "field", "lv_divfree"]);
    assert!(out.status.success());
    scratch("lv_divfree.json", std::str::from_utf8(&out.stdout).unwrap())
}

#[test]
fn enumerate_order_three() {
    let out = run(&["aromas", "enumerate", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["count"], 4);
    let encs: Vec<&str> = v["items"].as_array().unwrap().iter().map(|i| i["encoding"].as_str().unwrap()).collect();
    assert_eq!(encs, ["C1([[]])", "C1([][])", "C2(;[])", "C3(;;)"]);
}

#[test]
fn sigma_of_the_three_cycle() {
    let v = json_of(&run(&["aromas", "sigma", "C3(;;)"]));
    assert_eq!(v["sigma"], 3);
    assert_eq!(run(&["aromas", "sigma", "C3(;"]).status.code(), Some(2));
}

#[test]
fn q_table_rows() {
    let v = json_of(&run(&["hopf", "q-table", "--order", "3"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let row = |m: &str| rows.iter().find(|r| r["multiset"] == m).unwrap()["coefficients"].clone();
    assert_eq!(row("C2(;[])"), serde_json::json!({"1": "1/4", "C2(;)": "1"}));
    assert_eq!(row("1"), serde_json::json!({}));
}

#[test]
fn solve_reports_the_divergence_free_density_and_round_trips() {
    let field = lv_divfree_file();
    let f = field.to_str().unwrap();
    let out = run(&["darboux", "solve", "--field", f, "--order", "4", "--parity", "even"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["solutions"][0]["series"], "1 - (1/8) h^2 F(C2(;))");
    assert_eq!(v["solutions"][0]["verified"], true);
    let again = run(&["darboux", "solve", "--field", f, "--order", "4", "--parity", "even"]);
    assert_eq!(out.stdout, again.stdout);

    let report = scratch("report.json", std::str::from_utf8(&out.stdout).unwrap());
    let verify = run(&["darboux", "verify", "--field", f, "--density", report.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(json_of(&verify)["verified"], true);

    let bad = scratch("bad.json", r#"[[[1,0,0,0],"1"]]"#);
    assert_eq!(run(&["darboux", "verify", "--field", f, "--density", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn augmenter_recovers_the_linear_integral() {
    let field = lv_divfree_file();
    let aug = scratch("aug.json", r#"[{"label": "I0", "polynomial": [[[1,0,0],"1"],[[0,1,0],"1"],[[0,0,1],"1"]]}]"#);
    let out = run(&[
        "--format", "text", "darboux", "solve", "--field", field.to_str().unwrap(), "--order", "4", "--augment",
        aug.to_str().unwrap(),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("integral: x + y + z"), "{text}");
}

#[test]
fn empty_result_exits_with_one() {
    // a generic field has no density in the span
    let field = scratch("generic.json", r#"{"dim": 2, "quadratic": [[1,1,1,"1"],[2,1,2,"3"]], "linear": [[2,2,"1"]]}"#);
    let out = run(&["darboux", "solve", "--field", field.to_str().unwrap(), "--order", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let malformed = scratch("malformed.json", r#"{"dim": 2"#);
    assert_eq!(run(&["darboux", "solve", "--field", malformed.to_str().unwrap(), "--order", "2"]).status.code(), Some(2));
    assert_eq!(run(&["aromas", "enumerate", "--order", "7"]).status.code(), Some(2));
    assert_eq!(run(&["corpus", "run", "nope"]).status.code(), Some(2));
    let field = lv_divfree_file();
    let f = field.to_str().unwrap();
    assert_eq!(run(&["darboux", "solve", "--field", f, "--system", "lv", "--order", "2"]).status.code(), Some(2));
    assert_eq!(run(&["check", "conjecture", "--system", "lv_special"]).status.code(), Some(2));
}

#[test]
fn order_cap_can_be_lifted() {
    let out = run(&["--allow-high-order", "aromas", "enumerate", "--order", "7"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn corpus_commands() {
    let list = json_of(&run(&["corpus", "list"]));
    assert!(list.as_array().unwrap().iter().any(|s| s["name"] == "ishii"));
    let out = run(&["corpus", "run", "lv_special"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn conditions_and_conjecture() {
    let c = json_of(&run(&["check", "conditions", "--system", "lv_divfree"]));
    assert_eq!(c["div_free"], true);
    assert_eq!(c["cond1"]["alpha"], "0");
    let out = run(&["check", "conjecture", "--system", "lv_divfree"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["outcome"], "confirmed");
}

#[test]
fn kahan_subcommands() {
    let det = json_of(&run(&["kahan", "det", "--system", "ishii", "--seed", "2"]));
    assert_eq!(det["text"], "1");
    let series = json_of(&run(&["kahan", "series", "--system", "lv_divfree", "--order", "2"]));
    assert_eq!(series["coefficients"].as_array().unwrap().len(), 3);
    let map = json_of(&run(&["kahan", "map", "--system", "lv_divfree"]));
    assert_eq!(map["numerators"].as_array().unwrap().len(), 3);
    let newton = run(&["--format", "text", "hopf", "newton", "--dim", "1", "--order", "2"]);
    assert_eq!(
        String::from_utf8(newton.stdout).unwrap().trim(),
        "1 + h u F(C1()) + (1/2) h^2 u^2 F(C1()*C1()) - (1/2) h^2 u^2 F(C2(;))"
    );
}
