use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn fibercalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibercalc"))
        .args(args)
        .env("FIBERCALC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn emit(key: &str, dir: &Path) -> String {
    let path = dir.join(format!("{}.fib", key.replace('/', "_")));
    let p = path.to_str().unwrap().to_string();
    let o = fibercalc(&["catalog", "emit", key, "-o", &p]);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

#[test]
fn kodaira_ii_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("kodaira/II", dir.path());
    let o = fibercalc(&["invariants", &f]);
    assert!(o.status.success());
    let out = stdout(&o);
    for line in ["c1sq_min = 0", "c2_min = 2", "chi = 1/6"] {
        assert!(out.lines().any(|l| l == line), "missing {line} in\n{out}");
    }
}

#[test]
fn entry9_duality_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("thm1.3/9", dir.path());
    let o = fibercalc(&["duality", &f]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "chi = 3/2, chi_dual = 1/2, N_bar = 2, ok = true");
}

#[test]
fn catalog_verify_exits_zero() {
    let o = fibercalc(&["catalog", "verify"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn stdin_and_json_agree_with_human_mode() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("thm1.3/21", dir.path());
    let human = stdout(&fibercalc(&["invariants", &f]));
    let mut child = Command::new(env!("CARGO_BIN_EXE_fibercalc"))
        .args(["--json", "invariants", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(std::fs::read(&f).unwrap().as_slice())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), human.lines().count());
    for line in human.lines() {
        let (k, val) = line.split_once(" = ").unwrap();
        let j = &obj[k];
        let rendered = j.as_str().map(str::to_string).unwrap_or_else(|| j.to_string());
        assert_eq!(rendered, val, "{k}");
    }
    assert_eq!(obj["c1sq_min"], "13/5");
}

#[test]
fn output_is_byte_stable() {
    let a = fibercalc(&["search", "--genus", "2", "--max-vertices", "6", "--max-mult", "6"]);
    let b = fibercalc(&["search", "--genus", "2", "--max-vertices", "6", "--max-mult", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stderr(&a).starts_with("stats:"));
}

#[test]
fn check_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let ok = emit("thm1.4/case2", dir.path());
    let o = fibercalc(&["check", &ok]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("c2 >= 11/6: 11/6 >= 11/6 (equality"));

    // a·F = -1 here, so Zariski fails.
    let bad = dir.path().join("bad.fib");
    std::fs::write(
        &bad,
        "fiber \"bad\"\ncomponent a mult=1 self=-1\ncomponent b mult=1 self=-2\nnode a b\n",
    )
    .unwrap();
    let o = fibercalc(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).lines().any(|l| l.starts_with("violation:")));
    let o = fibercalc(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fibercalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fibercalc(&["invariants", "x", "--bogus"]).status.code(), Some(2));
    assert_eq!(fibercalc(&["dedekind", "3"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let o = fibercalc(&["hj", "6", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
    let o = fibercalc(&["catalog", "emit", "thm1.3/23"]);
    assert_eq!(o.status.code(), Some(1));
    let o = fibercalc(&["search", "--genus", "2", "--where", "c1sq_min >"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn arithmetic_subcommands() {
    let o = fibercalc(&["dedekind", "3", "7"]);
    assert_eq!(stdout(&o), "dedekind_sum = -1/14\nchi_pair = -1/63\n");
    let o = fibercalc(&["hj", "7", "3"]);
    assert_eq!(stdout(&o), "es = 3 2 2\nmus = 1 3 5 7\nq_prime = 5\nbeta = 3/7\n");
    let o = fibercalc(&["--decimal", "4", "dedekind", "3", "7"]);
    assert!(stdout(&o).starts_with("dedekind_sum = -0.0714"));
    assert!(stderr(&o).starts_with("warning:"));
}

#[test]
fn dual_then_minimize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("kodaira/II", dir.path());
    let out = dir.path().join("dual.fib");
    let o = fibercalc(&["dual", &f, "--n", "5", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = fibercalc(&["classify", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("kodaira = kodaira/II*"), "{}", stdout(&o));
}

#[test]
fn search_emit_dir_and_theorem13() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("out");
    let o = fibercalc(&[
        "--json",
        "search",
        "--genus",
        "2",
        "--max-vertices",
        "7",
        "--max-mult",
        "8",
        "--where",
        "c1sq_min > 4*g - 11/2",
        "--emit-dir",
        d.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let n = v["fibers"].as_array().unwrap().len();
    assert!(n > 0);
    assert_eq!(std::fs::read_dir(&d).unwrap().count(), n);
    for e in std::fs::read_dir(&d).unwrap() {
        let p = e.unwrap().path();
        let o = fibercalc(&["classify", p.to_str().unwrap()]);
        assert!(stdout(&o).contains("above_line = true"), "{}", p.display());
        assert!(!stdout(&o).contains("thm1.3 = -"), "{}", p.display());
    }

    let o = fibercalc(&["search", "--genus", "2", "--max-vertices", "7", "--max-mult", "8", "--verify-theorem13"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("diff: empty"));
}
