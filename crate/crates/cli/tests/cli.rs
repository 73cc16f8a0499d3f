use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pos1324")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

#[test]
fn counts() {
    assert_eq!(stdout(&["count", "--n", "4"]), "23");
    assert_eq!(stdout(&["count", "--n", "4", "--a", "1", "--k", "2"]), "4");
    assert_eq!(stdout(&["count", "--n", "7", "--a", "2", "--k", "3"]), "60");
}

#[test]
fn count_formats() {
    let csv = stdout(&["--format", "csv", "count", "--n", "3"]);
    assert_eq!(csv, "n,a,k,count\n3,1,1,2\n3,1,2,1\n3,2,1,1");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "count", "--n", "3", "--a", "1", "--k", "1"])).unwrap();
    assert_eq!(json["count"], "2");
}

#[test]
fn count_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let first = stdout(&["--cache-dir", path, "count", "--n", "6"]);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some());
    assert_eq!(stdout(&["--cache-dir", path, "count", "--n", "6"]), first);
    assert_eq!(first, "513");
}

#[test]
fn strict_count() {
    assert_eq!(stdout(&["--strict", "count", "--n", "6"]), "513");
}

#[test]
fn factorizations() {
    assert_eq!(stdout(&["factor", "1243"]), "12 ⊙ 132");
    assert_eq!(stdout(&["factor", "2143"]), "2143");
    assert_eq!(stdout(&["factor", "1234"]), "12 ⊙ 12 ⊙ 12");
    assert_eq!(stdout(&["factor", "--perm", "1342"]), "132 ⊙ 12");
}

#[test]
fn dominoes() {
    assert_eq!(stdout(&["domino", "--points", "2", "--count"]), "6");
    assert_eq!(stdout(&["domino", "--points", "5", "--count"]), "408");
    assert_eq!(stdout(&["domino", "--perm", "12"]), "B:|T:|cols:");
    assert_eq!(stdout(&["domino", "--points", "1"]).lines().count(), 2);
}

#[test]
fn series() {
    assert_eq!(
        stdout(&["series", "--which", "f", "--order", "5"]),
        "x + 2*x^2 + 6*x^3 + 22*x^4 + 91*x^5"
    );
    assert_eq!(
        stdout(&["series", "--which", "t", "--a", "2", "--k", "1", "--order", "6"]),
        "x^3 + 3*x^4 + 12*x^5 + 55*x^6"
    );
}

#[test]
fn verify_small() {
    let text = stdout(&["verify", "--suite", "all", "--max-n", "7"]);
    assert!(text.lines().last().unwrap().starts_with("PASS"));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "verify", "--suite", "gidentity", "--max-n", "6"]))
            .unwrap();
    assert_eq!(json["pass"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["count", "--n", "x"][..],
        &["verify", "--suite", "nope"],
        &["factor", "1324"],
        &["factor", "1223"],
        &["domino", "--perm", "1243"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
