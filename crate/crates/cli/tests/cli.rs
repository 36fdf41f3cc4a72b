use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fpinj::fixtures::{a2, gorenstein_fixture, nonpure_xi};
use fpinj::rep::{stalk, RepFamilyFile};
use fpinj::{FinMod, Modulus};
use serde_json::Value;

fn fpinj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpinj")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_missing_file_is_a_usage_error() {
    let out = fpinj(&["classify", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_fixture_reports_every_class() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.json", &gorenstein_fixture(&Modulus::new(4).unwrap()).to_json());
    let out = fpinj(&["--json", "classify", s(&f), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert_eq!(recs.len(), 6);
    let holds = |c: &str| recs.iter().find(|r| r["verdicts"]["class"] == c).unwrap()["verdicts"]["holds"].clone();
    assert_eq!(holds("injective"), false);
    assert_eq!(holds("gorenstein-strongly-fp-injective"), true);

    let out = fpinj(&["--json", "classify", s(&f), "--class", "gorenstein"]);
    assert_eq!(lines(&out).len(), 1);
}

#[test]
fn malformed_files_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = r#"{"modulus":4,"vertices":["1","2"],"arrows":[{"id":"a","src":"1","tgt":"2"}],
        "modules":{"1":[2],"2":[2]},"arrows_maps":{"a":[[7]]}}"#;
    let out = fpinj(&["classify", s(&write(dir.path(), "bad.json", bad))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("arrows_maps.a"));

    let unknown = r#"{"modulus":4,"vertices":["1"],"modules":{"9":[4]}}"#;
    let out = fpinj(&["classify", s(&write(dir.path(), "unknown.json", unknown))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modules.9"));

    let no_modulus = r#"{"vertices":["1"]}"#;
    let out = fpinj(&["classify", s(&write(dir.path(), "nm.json", no_modulus))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modulus"));
}

#[test]
fn purity_of_the_nonpure_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "xi.json", &nonpure_xi(&Modulus::new(4).unwrap()).to_json());
    let out = fpinj(&["--json", "purity", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["verdicts"]["pure"], false);
    assert_eq!(r["verdicts"]["definitional_pure"], false);
}

#[test]
fn ext_on_a2_stalks() {
    let dir = tempfile::tempdir().unwrap();
    let md = Modulus::new(2).unwrap();
    let k = FinMod::free(&md, 1);
    let (s1, s2) = (stalk(a2(), 0, &k), stalk(a2(), 1, &k));
    let fam = RepFamilyFile::from_reps(&[("s1", &s1), ("s2", &s2)]);
    let f = write(dir.path(), "fam.json", &serde_json::to_string(&fam).unwrap());
    let factors = |x: &str, y: &str, n: &str| {
        let out = fpinj(&["--json", "ext", s(&f), "--x", x, "--y", y, "--n", n]);
        assert_eq!(out.status.code(), Some(0));
        lines(&out)[0]["verdicts"]["factors"].clone()
    };
    assert_eq!(factors("s1", "s2", "1"), serde_json::json!([2]));
    assert_eq!(factors("s2", "s1", "1"), serde_json::json!([]));
    assert_eq!(factors("s1", "s1", "0"), serde_json::json!([2]));

    let out = fpinj(&["ext", s(&f), "--x", "s1", "--y", "s3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rooted_loop_and_chain() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write(dir.path(), "loop.json", r#"{"vertices":["v"],"arrows":[{"id":"l","src":"v","tgt":"v"}]}"#);
    let out = fpinj(&["--json", "rooted", s(&lp)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["verdicts"]["right_rooted"], false);

    let chain = write(dir.path(), "a2.json", &a2().to_json());
    let out = fpinj(&["--json", "rooted", s(&chain)]);
    let r = &lines(&out)[0]["verdicts"];
    assert_eq!(r["right_rooted"], true);
    assert_eq!(r["stages"], serde_json::json!([[], ["2"], ["1", "2"]]));
}

#[test]
fn fixture_nonpure_gives_three_impure_records() {
    let out = fpinj(&["fixture", "nonpure", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| r["verdicts"]["pure"] == false && r["pass"] == true));
}

#[test]
fn verify_all_passes_and_is_reproducible() {
    let a = fpinj(&["verify", "all", "--seed", "42", "--trials", "50", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    let b = fpinj(&["verify", "all", "--seed", "42", "--trials", "50", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    for r in lines(&a) {
        for key in ["suite", "trial", "seed", "instance", "verdicts", "pass", "ms"] {
            assert!(r.get(key).is_some(), "{key} missing");
        }
        assert_eq!(r["ms"], 0);
    }
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"trials": 2, "moduli": [2], "seed": 5}"#);
    let out = fpinj(&["--config", s(&cfg), "--json", "verify", "ext"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert_eq!(recs.iter().filter(|r| r["suite"] == "ext").count(), 2);
    assert_eq!(recs.iter().filter(|r| r["suite"] == "ext:control").count(), 1);

    let out = fpinj(&["--config", s(&cfg), "--json", "verify", "ext", "--trials", "3"]);
    assert_eq!(lines(&out).iter().filter(|r| r["suite"] == "ext").count(), 3);

    let bad = write(dir.path(), "bad.json", r#"{"trials": "many"}"#);
    let out = fpinj(&["--config", s(&bad), "verify", "ext"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config"));

    let out = fpinj(&["verify", "ext", "--modulus-list", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("moduli"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fpinj(&[]).status.code(), Some(2));
    assert_eq!(fpinj(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(fpinj(&["fixture", "other"]).status.code(), Some(2));
}
