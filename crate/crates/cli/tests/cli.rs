use std::process::Command;

fn tricross() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tricross"));
    c.env_remove("TRICROSS_SEED");
    c
}

#[test]
fn play_writes_a_replayable_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("game.json");
    let out = tricross()
        .args(["play", "--board", "tri:8x3", "-p", "1", "-q", "1", "--breaker", "greedy", "--record"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("maker_win"));
    let frames = dir.path().join("frames");
    let out = tricross()
        .args(["render", "--record"])
        .arg(&path)
        .arg("--frames")
        .arg(&frames)
        .arg("--out")
        .arg(dir.path().join("last.svg"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_dir(&frames).unwrap().count() > 1);
}

#[test]
fn same_seed_same_record() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        let out = tricross()
            .env("TRICROSS_SEED", seed)
            .args(["play", "--board", "tri:6x3", "-p", "2", "-q", "1", "--breaker", "random", "--record"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read_to_string(path).unwrap()
    };
    assert_eq!(run("a.json", "17"), run("b.json", "17"));
}

#[test]
fn unmet_guarantee_needs_unsafe() {
    let out = tricross().args(["play", "--board", "tri:8x3", "-p", "1", "-q", "2"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("refused"));
    let out = tricross().args(["play", "--board", "tri:8x3", "-p", "1", "-q", "2", "--unsafe"]).output().unwrap();
    assert!(!String::from_utf8_lossy(&out.stdout).contains("refused"));
}

#[test]
fn verify_reports_and_rejects_unknown_suites() {
    let out = tricross().args(["verify", "duality", "--budget", "50"]).output().unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violation_count"], 0);
    let out = tricross().args(["verify", "lemma9_9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_and_table() {
    let out = tricross().args(["solve", "--board", "tri:3x2", "-p", "1", "-q", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["winner"], "Maker");
    let out = tricross().args(["solve", "--board", "tri:8x3", "-p", "1", "-q", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    let out = tricross()
        .args(["solve", "--table", "--m", "4..=5", "--n", "2", "--ps", "1", "--qs", "1..=4"])
        .output()
        .unwrap();
    let csv = String::from_utf8_lossy(&out.stdout);
    assert_eq!(csv.lines().count(), 1 + 2 * 4);
    assert!(csv.contains("breaker: q >= 4p"));
}

#[test]
fn render_rejects_other_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = tricross().args(["render", "--format", "png", "--out"]).arg(dir.path().join("x.png")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let svg = dir.path().join("b.svg");
    let out = tricross().args(["render", "--board", "tri:6x5", "--out"]).arg(&svg).output().unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}
