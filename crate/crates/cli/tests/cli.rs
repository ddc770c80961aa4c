use std::process::Command;

use hhodge_cli::{run, Outcome};

fn hh(args: &[&str]) -> Outcome {
    run(std::iter::once("hhodge").chain(args.iter().copied()))
}

fn value(args: &[&str]) -> String {
    let o = hh(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    o.stdout.trim_end().to_string()
}

#[test]
fn documented_examples() {
    assert_eq!(value(&["hodge", "--group", "z5", "--genus", "0", "--ins", "w:0*3,w2:0", "--ch", "1:3"]), "1/25");
    assert_eq!(value(&["euler", "--group", "z5", "--genus", "0", "--ins", "w:0*5", "--expr", "c2(3)"]), "1/25");
    assert_eq!(value(&["psi", "--genus", "1", "--powers", "1"]), "1/24");
}

#[test]
fn other_scalar_commands() {
    assert_eq!(value(&["euler", "--group", "z5", "--ins", "w:0,w2:0*2", "--expr", "e(1,1,3)"]), "1/5");
    assert_eq!(value(&["euler", "--group", "z5", "--ins", "w:0*3,w2:0", "--expr", "c1(3)"]), "-1/25");
    assert_eq!(value(&["euler", "--group", "z5", "--ins", "w:0*3,w2:0", "--expr", "-ch1(3)"]), "-1/25");
    assert_eq!(value(&["omega", "--group", "z3", "--genus", "1", "--ins", "1:0"]), "3/1");
    assert_eq!(value(&["corr", "--group", "z3", "--genus", "1", "--ins", "1:1"]), "1/8");
    assert_eq!(value(&["psi", "--powers", "0,0,0"]), "1/1");
}

#[test]
fn json_output() {
    let o = value(&["hodge", "--group", "z5", "--ins", "w2:0,w:0*3", "--ch", "1:3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["value"], "1/25");
    assert_eq!(v["query"], "hodge z5 g=0;ins=w:0,w:0,w:0,w2:0;ch=1:3");

    let o = value(&["series", "--group", "z3", "--genus", "1", "--max-points", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["monomial"] == "t1[1]^1" && t["value"] == "1/8"));
}

#[test]
fn series_modes() {
    let twisted = value(&["series", "--group", "z3", "--genus", "1", "--max-points", "1", "--ch", "1:1"]);
    assert!(twisted.lines().any(|l| l == "t0[1]^1\t1/72"), "{twisted}");
    let euler = value(&["series", "--group", "z5", "--bundles", "1,1,3", "--sectors", "w,w2", "--max-points", "3"]);
    assert!(euler.lines().any(|l| l == "s1^1 s2^2\t1/10"), "{euler}");
    let j = value(&["jfun", "--group", "z2", "--order", "2"]);
    assert!(j.lines().any(|l| l == "u1^2 z^-1 f1\t1/2"), "{j}");
}

#[test]
fn parse_and_validation_errors_exit_1() {
    for args in [
        &["bogus"][..],
        &["hodge", "--group", "z5", "--ins", "q:0", "--ch", "1:3"],
        &["hodge", "--group", "z5", "--ins", "w:0", "--ch", "1:9"],
        &["hodge", "--group", "z5", "--ins", "w:0*5", "--ch", "0:3"],
        &["psi", "--powers", "0"],
        &["psi", "--powers", "x"],
        &["euler", "--group", "z5", "--ins", "w:0*5", "--expr", "q7(3)"],
        &["corr", "--group", "z0", "--ins", "1:0"],
        &["corr", "--group", "/nonexistent/group/file", "--ins", "1:0"],
        &["series", "--group", "z3", "--bundles", "1"],
    ] {
        let o = hh(args);
        assert_eq!(o.code, 1, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_group_file_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.group");
    std::fs::write(&p, "this is not a group\n").unwrap();
    let o = hh(&["validate-group", "--group", p.to_str().unwrap()]);
    assert_eq!(o.code, 1);
}

#[test]
fn bundled_group_file_validates() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/s3.group");
    let o = value(&["validate-group", "--group", path, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    // ordered pairs of distinct transpositions: 6 solutions of abc = 1, over |G| = 6
    assert_eq!(value(&["omega", "--group", path, "--ins", "t:0*2,c:0"]), "1/1");
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("z5.cache");
    let c = cache.to_str().unwrap();
    let q = ["hodge", "--group", "z5", "--ins", "w:0*5", "--ch", "2:3", "--format", "json"];
    let cold = hh(&q);
    let first = hh(&[&q[..], &["--cache", c]].concat());
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("hhodge-cache v1 "));
    assert!(text.lines().count() > 1);
    let warm = hh(&[&q[..], &["--cache", c]].concat());
    assert_eq!(cold, first);
    assert_eq!(cold, warm);
    // a different query extends the same file
    let other = ["hodge", "--group", "z5", "--ins", "w:0*5", "--ch", "1:3*2", "--cache", c];
    assert_eq!(value(&other), "1/25");
    let grown = std::fs::read_to_string(&cache).unwrap();
    assert!(grown.lines().count() >= text.lines().count());
    for line in text.lines() {
        assert!(grown.lines().any(|l| l == line));
    }
}

#[test]
fn corrupted_cache_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("z5.cache");
    let c = cache.to_str().unwrap();
    let q = ["hodge", "--group", "z5", "--ins", "w:0*5", "--ch", "2:3", "--cache", c];
    assert_eq!(value(&q), "1/50");
    let text = std::fs::read_to_string(&cache).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let (key, _) = lines[1].split_once('\t').unwrap();
    lines[1] = format!("{key}\t12345/7");
    std::fs::write(&cache, lines.join("\n") + "\n").unwrap();
    let o = hh(&q);
    assert_eq!(o.code, 2, "{}", o.stderr);
    assert!(o.stderr.contains("inconsistency"));
}

#[test]
fn cache_for_other_group_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.cache");
    let c = cache.to_str().unwrap();
    value(&["hodge", "--group", "z5", "--ins", "w:0*5", "--ch", "2:3", "--cache", c]);
    let o = hh(&["hodge", "--group", "z3", "--ins", "w:0*3", "--ch", "1:1", "--cache", c]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("different group"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hhodge");
    let out = Command::new(bin).args(["psi", "--genus", "1", "--powers", "1"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1/24\n");
    let out = Command::new(bin).args(["psi", "--powers", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert!(out.status.success());
}

#[test]
fn selftest_passes_on_bundled_s3() {
    let o = hh(&["selftest"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("check PASS  "));
    assert!(!o.stdout.contains("check FAIL"));
    for id in 1..=11 {
        assert!(o.stdout.contains(&format!("criterion {id:>2} ")), "criterion {id} missing");
    }
}
