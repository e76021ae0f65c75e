use std::path::PathBuf;
use std::process::{Command, Output};

fn pmrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmrd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pmrd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bound_prints_the_value() {
    let out = pmrd(&["bound", "thm3", "--q", "2", "--n", "5", "--k", "5", "--d", "4", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1252379805361");

    let out = pmrd(&["bound", "thm2", "--q", "2", "--n", "4", "--k", "4", "--d", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], "4621");
    assert_eq!(v["formula"], "thm2");

    let out = pmrd(&["bound", "johnson1", "--q", "2", "--n", "6", "--k", "3", "--d", "4"]);
    assert_eq!(stdout(&out).trim(), "93");
}

#[test]
fn bad_parameters_are_usage_errors() {
    let out = pmrd(&["bound", "thm3", "--q", "1", "--n", "5", "--k", "5", "--d", "4", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pmrd(&["bound", "thm2", "--q", "2", "--n", "3", "--k", "5", "--d", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pmrd(&["bound", "thm2", "--q", "2", "--n", "5", "--k", "5", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pmrd(&["construct", "--q", "6", "--n", "2", "--k", "2", "--d", "2", "--s", "0", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(pmrd(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dist_prints_the_rank_distribution() {
    let out = pmrd(&["dist", "--q", "2", "--m", "4", "--nmin", "4", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "{2:525, 3:2250, 4:1320}");
}

#[test]
fn table_reproduces_the_shipped_data() {
    let out = pmrd(&["table", "reproduce", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,N,d,k,new,old,computed,matches_new,new_exceeds_old");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 56);
    for r in &rows {
        assert_eq!(r[4], r[6]);
        assert_eq!(r[7], "true");
    }
}

#[test]
fn construct_then_verify_round_trip() {
    let path = scratch("s1.json");
    let p = path.to_str().unwrap();
    let out = pmrd(&["construct", "--q", "2", "--n", "2", "--k", "2", "--d", "2", "--s", "1", "--out", p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = pmrd(&["verify", "--in", p, "--d", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["observed_count"], 481);
    assert_eq!(report["min_distance"], 2);
    assert_eq!(report["pass"], true);

    let out = pmrd(&["verify", "--in", p, "--d", "2", "--mode", "sampled", "--samples", "20000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn duplicated_member_fails_verification() {
    let path = scratch("s0.json");
    let p = path.to_str().unwrap();
    let out = pmrd(&["construct", "--q", "2", "--n", "2", "--k", "2", "--d", "2", "--s", "0", "--out", p]);
    assert_eq!(out.status.code(), Some(0));

    let mut file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let members = file["members"].as_array_mut().unwrap();
    let last = members.len() - 1;
    members[last] = members[0].clone();
    let bad = scratch("s0-dup.json");
    std::fs::write(&bad, file.to_string()).unwrap();

    let out = pmrd(&["verify", "--in", bad.to_str().unwrap(), "--d", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn missing_file_is_reported() {
    let out = pmrd(&["verify", "--in", "/nonexistent/code.json", "--d", "2"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(!out.stderr.is_empty());
}
