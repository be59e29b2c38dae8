use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oscsat"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oscsat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn sample() -> PathBuf {
    scratch("sample.cnf", oscsat::SAMPLE_CNF)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_bundled_instance() {
    let cnf = sample();
    let out = run(&["solve", cnf.to_str().unwrap(), "--restarts", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("status: solved"));
    assert!(text.contains("sat_count: 10/10"));
}

#[test]
fn json_report_is_revalidated_and_reproducible() {
    let cnf = sample();
    let args = ["solve", cnf.to_str().unwrap(), "--restarts", "3", "--seed", "11", "--json"];
    let a: Value = serde_json::from_str(&stdout(&run(&args))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&run(&args))).unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time");
        v
    };
    assert_eq!(strip(a.clone()), strip(b));
    let bits: Vec<bool> = a["best_assignment"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_bool().unwrap())
        .collect();
    let f = oscsat::parse_dimacs(oscsat::SAMPLE_CNF).unwrap();
    let s = oscsat::eval_assignment(&f, &oscsat::Assignment::new(bits)).unwrap();
    assert_eq!(a["best_value"].as_u64().unwrap() as usize, s.sat_count);
    assert_eq!(a["integrator"]["rng_seed"], 11);
}

#[test]
fn exhausted_budget_is_best_effort() {
    let cnf = scratch("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = run(&["solve", cnf.to_str().unwrap(), "--restarts", "2", "--periods", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("status: best_effort"));
}

#[test]
fn max_sat_with_oracle_solves_unsat_formula() {
    let cnf = scratch("unsat2.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = run(&["solve", cnf.to_str().unwrap(), "--objective", "max_sat", "--periods", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let bad = scratch("bad.cnf", "p cnf 2 1\n1 3 0\n");
    assert_eq!(run(&["solve", bad.to_str().unwrap()]).status.code(), Some(2));
    let cnf = sample();
    let c = cnf.to_str().unwrap();
    assert_eq!(run(&["solve", c, "--params", "A=abc"]).status.code(), Some(2));
    assert_eq!(run(&["solve", c, "--params", "dt=0.5"]).status.code(), Some(2));
    assert_eq!(run(&["solve", c, "--system", "three"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", c, "--objective", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let mixed = scratch("mixed.cnf", "p cnf 2 1\n1 -2 0\n");
    let out = run(&["solve", mixed.to_str().unwrap(), "--system", "two", "--mode", "printed"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_errors_exit_3() {
    assert_eq!(run(&["solve", "/nonexistent/x.cnf"]).status.code(), Some(3));
    let cnf = sample();
    let out = run(&[
        "solve",
        cnf.to_str().unwrap(),
        "--restarts",
        "1",
        "--trace",
        "/nonexistent/dir/trace.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["gen", "--vars", "5", "--clauses", "3", "-o", "/nonexistent/dir/x.cnf"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn trace_files() {
    let cnf = sample();
    let csv = cnf.with_file_name("trace.csv");
    let out = run(&[
        "solve",
        cnf.to_str().unwrap(),
        "--restarts",
        "1",
        "--trace",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.code().unwrap() <= 1);
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "step,t,energy,sat_count,nae_count,alpha_1,alpha_2,alpha_3,alpha_4,alpha_5,alpha_6,x_1,x_2,x_3,x_4,x_5,x_6"
    );
    assert!(text.lines().count() > 1);

    let json = cnf.with_file_name("trace.json");
    run(&[
        "solve",
        cnf.to_str().unwrap(),
        "--system",
        "two",
        "--restarts",
        "1",
        "--periods",
        "1",
        "--trace",
        json.to_str().unwrap(),
        "--trace-format",
        "json",
    ]);
    let t = oscsat::trace::trace_from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(t.meta.num_vars, 6);
    assert_eq!(t.rows.len(), 11);
}

#[test]
fn config_file_precedence() {
    let cnf = sample();
    let conf = scratch("run.conf", "# settings\nseed = 5\nA = 2.0\nrestarts = 4\n");
    let report = cnf.with_file_name("report.json");
    let out = run(&[
        "solve",
        cnf.to_str().unwrap(),
        "--config",
        conf.to_str().unwrap(),
        "--params",
        "A=1.5,an=0.001",
        "--restarts",
        "1",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.code().unwrap() <= 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["params"]["a"], 1.5);
    assert_eq!(v["integrator"]["a_n"], 0.001);
    assert_eq!(v["integrator"]["rng_seed"], 5);
    assert_eq!(v["restarts_used"], 1);
}

#[test]
fn oracle_command() {
    let cnf = sample();
    let out = run(&["oracle", cnf.to_str().unwrap(), "--objective", "max_nae", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["best_value"], 10);
    assert_eq!(v["optimal_count"], 2);
}

#[test]
fn gen_round_trips() {
    let out = run(&["gen", "--vars", "10", "--clauses", "42", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let f = oscsat::parse_dimacs(&stdout(&out)).unwrap();
    assert_eq!(f, oscsat::generate_random_3sat(10, 42, 3).unwrap());
}

#[test]
fn table_command() {
    let out = run(&["table", "--A", "1", "--As", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 65);
    assert!(text.starts_with("signs,corner,energy,a_coeff,as_coeff,nae_satisfied\n"));
}

#[test]
fn gradcheck_command() {
    let out = run(&["gradcheck", "--instances", "5", "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let err: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("grad_v max_rel_error: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err < 1e-6);
    assert!(text.contains("averaged_gradient max_rel_error"));
}
