//! End-to-end runs of the `wschreier` binary against the bundled fixtures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wschreier")).args(args).output().expect("spawn wschreier")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (serde_json::from_slice(&o.stdout).expect("valid json"), o.status.code().unwrap())
}

fn p(path: &Path) -> String {
    path.display().to_string()
}

/// Emits the coarse extension of S2 by S2 into `dir` and returns its .ext path.
fn coarse_ext(dir: &Path) -> PathBuf {
    let o = run(&["coarse", &data("S2.mon"), &data("S2.mon"), "-o", &p(&dir.join("co"))]);
    assert_eq!(o.status.code(), Some(0));
    dir.join("co.ext")
}

#[test]
fn classify_reports_three_objects() {
    let o = run(&["classify", &data("S2.mon"), &data("S2.mon")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3 extensions"));
    let (v, code) = json(&["classify", &data("S2.mon"), &data("S2.mon")]);
    assert_eq!(code, 0);
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["result"]["count"], 3);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn classify_with_oracle_agrees() {
    let o = run(&["classify", "--oracle", &data("S2.mon"), &data("S2.mon")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["classify", &data("chain3.mon"), &data("S2.mon")].map(String::from);
    let go = |threads: &str| {
        let mut full = vec!["--json".to_string(), "--threads".to_string(), threads.to_string()];
        full.extend(args.iter().cloned());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        run(&refs).stdout
    };
    let (a, b, c) = (go("1"), go("1"), go("4"));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn timing_adds_wall_time() {
    let (v, _) = json(&["--timing", "classify", &data("S2.mon"), &data("S2.mon")]);
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn check_ext_and_retractions_on_coarse_extension() {
    let dir = TempDir::new().unwrap();
    let ext = coarse_ext(dir.path());
    let o = run(&["check-ext", &p(&ext)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weakly Schreier: yes"));

    let (v, code) = json(&["retractions", &p(&ext), "--count"]);
    assert_eq!(code, 0);
    // Counts can exceed 64 bits, so they travel as strings.
    assert_eq!(v["result"]["count"], "2");

    let o = run(&["retractions", &p(&ext), "--list"]);
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = run(&["retractions", &p(&ext)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_ext_names_the_violation() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // k = e = s = identity on C2: the kernel of e is trivial, not the image of k.
    fs::copy(data("C2.mon"), d.join("C2.mon")).unwrap();
    fs::write(d.join("id.hom"), "0 1\n").unwrap();
    fs::write(d.join("bad.ext"), "C2.mon\nC2.mon\nC2.mon\nid.hom\nid.hom\nid.hom\n").unwrap();
    let o = run(&["check-ext", &p(&d.join("bad.ext"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL KernelMismatch"));
}

#[test]
fn quotients_actions_build_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let o = run(&["quotients", &data("S2.mon"), &data("S2.mon"), "-o", &p(&d.join("q"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2 admissible quotients"));
    let quot = d.join("q").join("q1.quot");
    assert!(quot.exists());

    let o = run(&["actions", &p(&quot), "-o", &p(&d.join("a"))]);
    assert_eq!(o.status.code(), Some(0));
    let act = d.join("a").join("a0.act");
    assert!(act.exists());

    let out = d.join("built.ext");
    let o = run(&["build", &p(&quot), &p(&act), "-o", &p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["check-ext", &p(&out)]);
    assert_eq!(o.status.code(), Some(0));

    // The built extension is the coarse one.
    let co = coarse_ext(d);
    let o = run(&["morphism", &p(&out), &p(&co)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn morphism_exists_in_one_direction_only() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let o = run(&["quotients", &data("S2.mon"), &data("S2.mon"), "-o", &p(&d.join("q"))]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["actions", &p(&d.join("q").join("q0.quot")), "-o", &p(&d.join("a"))]);
    assert_eq!(o.status.code(), Some(0));
    // The trivial action on the discrete quotient: the direct product.
    let direct = d.join("direct.ext");
    let trivial = d.join("a").join("a1.act");
    let o = run(&["build", &p(&d.join("q").join("q0.quot")), &p(&trivial), "-o", &p(&direct)]);
    assert_eq!(o.status.code(), Some(0));
    let co = coarse_ext(d);

    let o = run(&["morphism", &p(&direct), &p(&co)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("NONE"));
    let o = run(&["morphism", &p(&co), &p(&direct)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NONE"));
}

#[test]
fn glueing_and_matmon_emit_valid_extensions() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let o = run(&["glueing", &data("S2.mon"), &data("S2.mon"), &data("id.hom"), "-o", &p(&d.join("gl"))]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["check-ext", &p(&d.join("gl.ext"))]).status.code(), Some(0));

    let o = run(&["matmon", "--dim", "1", "--field", "3", "-o", &p(&d.join("mm"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order: 3"));
    assert_eq!(run(&["check-ext", &p(&d.join("mm.ext"))]).status.code(), Some(0));

    let o = run(&["matmon", "--dim", "1", "--field", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coarse_over_a_group_is_discrete() {
    let o = run(&["coarse", &data("C2.mon"), &data("C2.mon")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("coarse quotient: 4 classes"));
}

#[test]
fn oracle_counts_s2_by_s2() {
    let (v, code) = json(&["oracle", &data("S2.mon"), &data("S2.mon")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 3);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let o = run(&["classify", "missing.mon", &data("S2.mon")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: Io"));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.mon");
    fs::write(&bad, "2\n0 1\n1 1 1\n").unwrap();
    let o = run(&["classify", &p(&bad), &data("S2.mon")]);
    assert_eq!(o.status.code(), Some(2));
}
