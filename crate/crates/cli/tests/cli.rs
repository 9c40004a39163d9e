use std::path::PathBuf;
use std::process::{Command, Output};

fn scl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scl-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_eis(dir: &PathBuf, file: &str, args: &[&str]) -> String {
    let path = dir.join(file);
    let path_s = path.to_str().unwrap().to_string();
    let mut full = vec!["eis"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path_s]);
    let o = scl(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path_s
}

#[test]
fn split_json_is_exact() {
    let o = scl(&["split", "--p", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim_end(), r#"{"p":5,"roots":[2,3]}"#);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(scl(&["split"]).status.code(), Some(1));
    assert_eq!(scl(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(scl(&["split", "--p", "five"]).status.code(), Some(1));
    assert_eq!(scl(&["split", "--p", "9"]).status.code(), Some(1));
    assert_eq!(scl(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let dir = scratch("verify");
    let e1 = write_eis(&dir, "e1.json", &["--kind", "e1psi", "--p", "5", "--branch", "2", "--bound", "30"]);
    let same = scl(&["verify", "--f1", &e1, "--f2", &e1, "--branch", "2", "--k1", "1", "--k2", "1", "--alpha1", "1", "--alpha2", "1"]);
    assert_eq!(same.status.code(), Some(0));

    let one = dir.join("one.json");
    std::fs::write(&one, r#"{"format":"qexp-v1","p":5,"degree":1,"bound":30,"coeffs":[{"twiceT":[[0]],"num":[1],"den":1}]}"#).unwrap();
    let one = one.to_str().unwrap();
    let base = ["verify", "--f1", &e1, "--f2", one, "--k1", "1", "--k2", "0", "--alpha1", "1", "--alpha2", "0"];
    let at = |d: &str| {
        let mut v = base.to_vec();
        v.extend_from_slice(&["--branch", d]);
        scl(&v).status.code()
    };
    assert_eq!(at("2"), Some(0));
    // E_{1,ψ} is not congruent to 1 at the other prime
    assert_eq!(at("3"), Some(2));

    let e4 = write_eis(&dir, "e4.json", &["--kind", "level1", "--p", "5", "--k", "4", "--bound", "30"]);
    let wrong = scl(&["verify", "--f1", &e4, "--f2", one, "--branch", "2", "--k1", "2", "--k2", "0", "--alpha1", "0", "--alpha2", "0"]);
    assert_eq!(wrong.status.code(), Some(3));
    let right = scl(&["--json", "verify", "--f1", &e4, "--f2", one, "--branch", "2", "--k1", "4", "--k2", "0", "--alpha1", "0", "--alpha2", "0", "--corollary"]);
    assert_eq!(right.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&right)).unwrap();
    assert_eq!(report["verdict"], "holds");
    assert_eq!(report["corollary"]["twist"], 0);
}

#[test]
fn qexp_output_round_trips() {
    let o = scl(&["eis", "--kind", "chi", "--p", "7", "--branch", "3", "--k", "3", "--alpha", "1", "--bound", "12"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let f = scl_core::FourierExpansion::from_json_str(&text).unwrap();
    assert_eq!(f.to_json_string(), text.trim_end());
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = scratch("det");
    let gram = dir.join("gram.json");
    std::fs::write(&gram, r#"{"m":2,"twoS":[[4,0],[0,4]]}"#).unwrap();
    let g = gram.to_str().unwrap();
    let one = scl(&["--threads", "1", "theta", "--gram", g, "--degree", "2", "--bound", "6"]);
    let four = scl(&["--threads", "4", "theta", "--gram", g, "--degree", "2", "--bound", "6"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let a = scl(&["--json", "limit", "--p", "5", "--l", "2", "--delta", "0", "--alpha", "2", "--steps", "2"]);
    let b = scl(&["--json", "limit", "--p", "5", "--l", "2", "--delta", "0", "--alpha", "2", "--steps", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn limit_table_increases() {
    let o = scl(&["--json", "limit", "--p", "5", "--l", "2", "--delta", "0", "--alpha", "2", "--steps", "3"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let vals: Vec<i64> = rows.iter().map(|r| r["valuation_of_difference"].as_i64().unwrap()).collect();
    assert_eq!(vals.len(), 3);
    assert!(vals.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn limit_series_reports_parity_failure() {
    let o = scl(&["limit", "--p", "5", "--l", "1", "--delta", "0", "--alpha", "1", "--steps", "2", "--series"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn precision_cap_env() {
    let args = ["limit", "--p", "5", "--l", "2", "--delta", "0", "--alpha", "1", "--steps", "3"];
    let capped = Command::new(env!("CARGO_BIN_EXE_scl")).args(args).env("SCL_PRECISION_CAP", "2").output().unwrap();
    assert_eq!(capped.status.code(), Some(1));
    let free = Command::new(env!("CARGO_BIN_EXE_scl")).args(args).env("SCL_PRECISION_CAP", "64").output().unwrap();
    assert_eq!(free.status.code(), Some(0));
}

#[test]
fn sieve_specialize_profile() {
    let dir = scratch("sieve");
    let gram = dir.join("gram.json");
    std::fs::write(&gram, r#"{"m":2,"twoS":[[4,0],[0,4]]}"#).unwrap();
    let th = dir.join("theta2.json");
    let th_s = th.to_str().unwrap();
    let o = scl(&["theta", "--gram", gram.to_str().unwrap(), "--degree", "2", "--bound", "4", "--out", th_s]);
    assert!(o.status.success());
    let sieved = scl(&["sieve", "--input", th_s, "--r", "1", "--t0", "[[0,0],[0,0]]"]);
    assert_eq!(stdout(&sieved).trim_end(), std::fs::read_to_string(&th).unwrap().trim_end());
    let spec = scl(&["specialize", "--input", th_s, "--s0", "[[2,0],[0,2]]"]);
    let f = scl_core::FourierExpansion::from_json_str(&stdout(&spec)).unwrap();
    assert_eq!(f.degree(), 1);
    assert_eq!(f.coeff1(0), f.field().one());
    let prof = scl(&["--json", "profile", "--input", th_s, "--branch", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&prof)).unwrap();
    assert_eq!(v["profile"]["by_rank"][0], 0);
    let bad = scl(&["specialize", "--input", th_s, "--s0", "[[2,2],[2,2]]"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn replay_manifest() {
    let dir = scratch("replay");
    let path = dir.join("manifest.json");
    std::fs::write(
        &path,
        r#"{"name":"smoke","commands":[
            {"args":["split","--p","7"],"expect_exit":0},
            {"args":["split"],"expect_exit":1}
        ],"tolerances":{"precision":20}}"#,
    )
    .unwrap();
    let o = scl(&["replay", "--manifest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);
}
