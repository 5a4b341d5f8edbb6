use std::path::PathBuf;
use std::process::{Command, Output};

fn qmds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmds")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qmds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn construct_then_verify_artifact() {
    let path = scratch("c1.json");
    let p = path.to_str().unwrap();
    let out = qmds(&["construct", "--construction", "c1", "--q", "8", "--m", "3", "--k", "4", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["certificate"]["quantum"], serde_json::json!([21, 13, 5]));

    let v = qmds(&["verify", "--artifact", p]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    let r = json(&v);
    assert_eq!(r["self_orthogonal"], true);
    assert_eq!(r["mds"], "MINORS");
    assert_eq!(r["min_weight"], 18);
    assert_eq!(r["quantum"], serde_json::json!([21, 13, 5]));
}

#[test]
fn tampered_artifact_fails_verification() {
    let path = scratch("tampered.json");
    let out = qmds(&["construct", "--construction", "subgroup", "--q", "5", "--m", "3", "--k", "2"]);
    let mut v = json(&out);
    // move one entry: the Gram matrix stops vanishing
    let entry = &mut v["artifact"]["matrix"][0][0];
    let e: u64 = entry.as_str().unwrap().parse().unwrap();
    *entry = serde_json::json!(((e + 1) % 24).to_string());
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let r = qmds(&["verify", "--artifact", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["self_orthogonal"], false);
}

#[test]
fn verify_text_matrix() {
    let path = scratch("m.txt");
    let out = qmds(&["construct", "--construction", "half-norm", "--q", "13", "--m", "6", "--k", "8", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    // the matrix is the trailing block of numeric rows
    let rows: Vec<&str> = text.lines().filter(|l| l.split(' ').all(|t| t == "z" || t.parse::<u64>().is_ok())).collect();
    assert_eq!(rows.len(), 8);
    std::fs::write(&path, rows.join("\n")).unwrap();
    let r = qmds(&["verify", "--matrix", path.to_str().unwrap(), "--q", "13"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(json(&r)["quantum"], serde_json::json!([28, 12, 9]));
}

#[test]
fn byte_identical_runs() {
    for args in [
        &["construct", "--construction", "mixed-union", "--q", "13", "--m1", "7", "--m2", "6"][..],
        &["oracle", "--construction", "thm32", "--q", "31", "--m1", "6", "--m2", "10"][..],
        &["field", "--q", "49"][..],
        &["search", "family", "--k-limit", "30"][..],
    ] {
        let a = qmds(args);
        let b = qmds(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    // hypothesis failures
    assert_eq!(qmds(&["oracle", "--construction", "c1", "--q", "8", "--m", "2"]).status.code(), Some(1));
    assert_eq!(qmds(&["construct", "--construction", "c2-char2", "--q", "9", "--m1", "5", "--m2", "2"]).status.code(), Some(1));
    assert_eq!(qmds(&["construct", "--construction", "thm41", "--q", "5", "--m1", "3", "--m2", "2"]).status.code(), Some(1));
    // usage errors
    assert_eq!(qmds(&["construct", "--construction", "c1", "--q", "8"]).status.code(), Some(2));
    assert_eq!(qmds(&["oracle", "--construction", "c1", "--m", "3"]).status.code(), Some(2));
    assert_eq!(qmds(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qmds(&["--help"]).status.code(), Some(0));
}

#[test]
fn condition_only_beyond_budget() {
    let out = qmds(&["construct", "--construction", "mixed-union", "--q", "11969", "--m1", "105", "--m2", "176"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["certificate"]["verified_level"], "CONDITION_ONLY");
    assert_eq!(v["certificate"]["mds"], "UNVERIFIED_MDS");
    assert_eq!(v["certificate"]["n"], 2170560);
    assert_eq!(v["certificate"]["quantum"][2], 6041);
    assert!(v.get("artifact").is_none());
}

#[test]
fn audit_text_flags_known_rows() {
    let out = qmds(&["audit", "--table", "3", "--no-formulas", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row1 = text.lines().find(|l| l.starts_with("3     1")).unwrap();
    assert!(row1.contains("ARITHMETIC_MISMATCH") && row1.contains("printed 412 recomputed 392"));
    // a row whose hypotheses fail makes the audit exit 1
    assert_eq!(qmds(&["audit", "--table", "4", "--no-formulas"]).status.code(), Some(1));
}
