use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn sumlab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumlab"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("SUMLAB_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_slice(&std::fs::read(&path).unwrap_or_else(|_| panic!("missing {}", path.display()))).unwrap()
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn graph_file() -> String {
    format!("{}/../../graphs/path4.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn enumerate_small_census_and_curve() {
    let dir = TempDir::new().unwrap();
    let o = sumlab(dir.path(), &["enumerate", "--n", "6", "--k", "3", "--lambda", "2", "--emit-curve", "--members"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("total 20"));

    let art = read_json(dir.path().join("enumerate.json"));
    assert_eq!(text(&art["result"]["ledger"]["total"]), "20");
    assert_eq!(art["config"]["params"]["lambda"], "2");
    assert!(art["config"]["constants"].is_null(), "constants only echoed for lambda > 2");
    assert_eq!(art["config_hash"].as_str().unwrap().len(), 64);

    let hist = std::fs::read_to_string(dir.path().join("ell_histogram.csv")).unwrap();
    assert_eq!(hist, "ell,count\n3,6\n4,6\n5,4\n6,4\n");
    let curve = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 5);
    assert!(curve.lines().last().unwrap().starts_with("3,1,1,"));
    let members = std::fs::read_to_string(dir.path().join("members.jsonl")).unwrap();
    assert_eq!(members.lines().count(), 20);
    assert_eq!(members.lines().next(), Some("[1,2,3]"));

    let run = read_json(dir.path().join("enumerate.run.json"));
    assert_eq!(run["cache"], "off");
    assert_eq!(run["config_hash"], art["config_hash"]);
}

#[test]
fn constants_echoed_above_two() {
    let dir = TempDir::new().unwrap();
    let o = sumlab(dir.path(), &["enumerate", "--n", "10", "--k", "4", "--lambda", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let art = read_json(dir.path().join("enumerate.json"));
    assert!(art["config"]["constants"].is_object());
}

#[test]
fn worker_count_does_not_change_result_or_hash() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["enumerate", "--n", "14", "--k", "5", "--lambda", "3", "--floor-mode"];
    let one = sumlab(a.path(), &[&["--workers", "1"], &args[..]].concat());
    let four = sumlab(b.path(), &[&["--workers", "4"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(four.status.code(), Some(0));
    let (ja, jb) = (read_json(a.path().join("enumerate.json")), read_json(b.path().join("enumerate.json")));
    assert_eq!(ja["result"], jb["result"]);
    assert_eq!(ja["config_hash"], jb["config_hash"]);
}

#[test]
fn cache_hit_on_second_run() {
    let out = TempDir::new().unwrap();
    let cache = TempDir::new().unwrap();
    let c = cache.path().to_str().unwrap();
    let args = ["--cache-dir", c, "construct", "ap-family", "--n", "12", "--k", "3", "--lambda", "2"];
    let first = sumlab(out.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(read_json(out.path().join("construct-ap-family.run.json"))["cache"], "miss");
    let before = read_json(out.path().join("construct-ap-family.json"));
    let second = sumlab(out.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(read_json(out.path().join("construct-ap-family.run.json"))["cache"], "hit");
    assert_eq!(read_json(out.path().join("construct-ap-family.json")), before);
    assert_eq!(stdout(&first), stdout(&second));

    let bypass = sumlab(out.path(), &[&["--no-cache"], &args[..]].concat());
    assert_eq!(bypass.status.code(), Some(0));
    assert_eq!(read_json(out.path().join("construct-ap-family.run.json"))["cache"], "off");
}

#[test]
fn ap_family_report() {
    let dir = TempDir::new().unwrap();
    let o = sumlab(dir.path(), &["construct", "ap-family", "--n", "12", "--k", "3", "--lambda", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let art = read_json(dir.path().join("construct-ap-family.json"));
    assert_eq!(text(&art["result"]["family_size"]), "30");
    assert_eq!(art["result"]["violation_count"], 0);
    assert_eq!(art["passed"], true);
}

#[test]
fn fkg_on_shipped_graph() {
    let dir = TempDir::new().unwrap();
    let o = sumlab(dir.path(), &["construct", "fkg", "--graph", &graph_file(), "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let art = read_json(dir.path().join("construct-fkg.json"));
    assert_eq!(art["result"]["exact"]["num"], "5");
    assert_eq!(art["result"]["exact"]["den"], "6");
    // the graph itself, not its path, is part of the config
    assert_eq!(art["config"]["graph"]["vertex_count"], 4);
}

#[test]
fn verify_writes_summary_line() {
    let dir = TempDir::new().unwrap();
    let o = sumlab(dir.path(), &["verify", "injection", "--max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("injection: 0 violations / 511 applicable (511 checked)"));
    let o = sumlab(dir.path(), &["verify", "tails", "--n", "8", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("verify-tails.csv")).unwrap();
    assert!(csv.starts_with("event,n,k,m_or_M,exact_num,exact_den,bound,holds\n"));
    let o = sumlab(dir.path(), &["verify", "covering", "--max", "5", "--rows"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = std::fs::read_to_string(dir.path().join("verify-covering.csv")).unwrap();
    assert_eq!(rows.lines().count() as u64, 1 + 63 * 63);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let usage = sumlab(dir.path(), &["enumerate", "--n", "6"]);
    assert_eq!(usage.status.code(), Some(1));
    let bad_lambda = sumlab(dir.path(), &["enumerate", "--n", "6", "--k", "3", "--lambda", "x/y"]);
    assert_eq!(bad_lambda.status.code(), Some(1));
    let precondition = sumlab(dir.path(), &["construct", "ap-family", "--n", "10", "--k", "4", "--lambda", "3"]);
    assert_eq!(precondition.status.code(), Some(1));
    let missing = sumlab(dir.path(), &["construct", "two-point", "--k", "20"]);
    assert_eq!(missing.status.code(), Some(1));
    let budget = sumlab(dir.path(), &["enumerate", "--n", "30", "--k", "8", "--lambda", "3", "--max-nodes", "100"]);
    assert_eq!(budget.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget"));
    let help = sumlab(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
