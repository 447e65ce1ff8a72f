use std::process::{Command, Output};

fn drx(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drx"))
        .args(["--cache-dir", cache.to_str().unwrap()])
        .args(args)
        .env_remove("DRX_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &[u8]) -> serde_json::Value {
    serde_json::from_slice(out).expect("json output")
}

#[test]
fn dr_genus_one_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = drx(&["dr", "--g", "1", "--A", "1,-1"], dir.path());
    assert!(out.status.success());
    let v = json(&out.stdout);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    let coeffs: Vec<&str> = terms.iter().map(|t| t["coeff"].as_str().unwrap()).collect();
    assert!(coeffs.contains(&"-1/24"));
    assert_eq!(coeffs.iter().filter(|&&c| c == "1/2").count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unbalanced = drx(&["dr", "--g", "1", "--A", "1,1"], dir.path());
    assert_eq!(unbalanced.status.code(), Some(2));
    let e = json(&unbalanced.stderr);
    assert!(e["error"]["kind"].is_string());
    assert!(e["error"]["message"].is_string());
    assert_eq!(drx(&["dr", "--g", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(drx(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(drx(&["--help"], dir.path()).status.code(), Some(0));
    let bad_target = drx(&["dr", "--target", "{\"kind\":\"cone\"}", "--g", "1", "--A", "0"], dir.path());
    assert_eq!(bad_target.status.code(), Some(2));
}

#[test]
fn cache_is_used_and_verified() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["pclass", "--g", "1", "--A", "2,-2", "--degree", "1"];
    let first = drx(&args, dir.path());
    assert!(first.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let stored = json(&std::fs::read(&entries[0]).unwrap());
    assert!(stored["request"].is_object() && stored["sha256"].is_string());

    let second = drx(&args, dir.path());
    assert_eq!(first.stdout, second.stdout);

    std::fs::write(&entries[0], b"{\"request\":{},\"result\":{},\"sha256\":\"00\"}").unwrap();
    let third = drx(&args, dir.path());
    assert!(third.status.success());
    assert_eq!(first.stdout, third.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("warning"));

    let fresh = tempfile::tempdir().unwrap();
    let uncached = drx(&["--no-cache", "pclass", "--g", "1", "--A", "2,-2", "--degree", "1"], fresh.path());
    assert_eq!(uncached.stdout, first.stdout);
    assert_eq!(std::fs::read_dir(fresh.path()).unwrap().count(), 0);
}

#[test]
fn text_output_and_aell() {
    let dir = tempfile::tempdir().unwrap();
    let text = drx(&["--format", "text", "dr", "--g", "0", "--A", "1,1,-2"], dir.path());
    assert!(text.status.success());
    assert!(!String::from_utf8_lossy(&text.stdout).trim().is_empty());
    let check = drx(&["aell", "--check", "--ell", "1", "--g", "1", "--d", "1", "--A", "1,-1"], dir.path());
    assert!(check.status.success());
    assert_eq!(json(&check.stdout)["status"], "MATCH");
    let modes = drx(&["aell", "--check", "--graphsum", "--ell", "1", "--g", "1", "--d", "1", "--A", "1,-1"], dir.path());
    assert_eq!(modes.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = drx(&["selftest"], dir.path());
    assert!(out.status.success());
}
