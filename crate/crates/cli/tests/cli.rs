use std::path::Path;
use std::process::{Command, Output};

fn lawcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lawcheck")).args(args).env_remove("LAWCHECK_SEED").output().expect("lawcheck runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn without_ms(json: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(json).expect("json report");
    for s in v["suites"].as_array_mut().unwrap() {
        s.as_object_mut().unwrap().remove("ms");
    }
    v
}

#[test]
fn passing_suite_exits_zero() {
    let o = lawcheck(&["--suite", "thm19", "--seed", "42", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = without_ms(&o.stdout);
    assert_eq!(v["config"]["seed"], 42);
    assert!(v["suites"].as_array().unwrap().iter().all(|s| s["outcome"] == "pass"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&lawcheck(&["--suite", "nope"])), 2);
    assert_eq!(code(&lawcheck(&["--max-carrier", "9"])), 2);
    assert_eq!(code(&lawcheck(&["--fp-max-len", "40"])), 2);
    assert_eq!(code(&lawcheck(&["--mutant", "nonsense"])), 2);
}

#[test]
fn json_is_deterministic_up_to_timings() {
    let args = ["--suite", "monad-laws/list", "--suite", "algebraicity", "--quick", "--seed", "7", "--format", "json"];
    let a = lawcheck(&args);
    let b = lawcheck(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(without_ms(&a.stdout), without_ms(&b.stdout));
}

#[test]
fn text_report_has_a_summary() {
    let o = lawcheck(&["--suite", "fastproduct"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("PASS fastproduct ["));
    assert!(text.ends_with("1 laws, 1 passed, 0 failed\n"));
}

fn witnesses(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

#[test]
fn mutant_witnesses_replay() {
    let dir = tempfile::tempdir().unwrap();
    let wdir = dir.path().to_str().unwrap();
    let o = lawcheck(&["--suite", "runstatet", "--mutant", "non-backtracking-catch", "--witness-dir", wdir, "--format", "json"]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let files = witnesses(dir.path());
    assert!(!files.is_empty());
    for f in files {
        let path = f.to_str().unwrap();
        let again = lawcheck(&["--replay", path, "--format", "json"]);
        assert_eq!(code(&again), 1);
        let replayed: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
        let id = &replayed["suites"][0]["id"];
        let original = report["suites"].as_array().unwrap().iter().find(|s| &s["id"] == id).unwrap();
        assert_eq!(
            serde_json::to_string(&replayed["suites"][0]["witness"]).unwrap(),
            serde_json::to_string(&original["witness"]).unwrap()
        );
        assert_eq!(code(&lawcheck(&["--replay", path, "--without-mutant"])), 0);
    }
}

#[test]
fn malformed_witness_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"id\": 3}").unwrap();
    assert_eq!(code(&lawcheck(&["--replay", bad.to_str().unwrap()])), 2);
    let unknown = dir.path().join("unknown.json");
    let cfg = serde_json::to_string(&effectlaws_config()).unwrap();
    std::fs::write(&unknown, format!("{{\"id\": \"no/such/law\", \"config\": {cfg}}}")).unwrap();
    assert_eq!(code(&lawcheck(&["--replay", unknown.to_str().unwrap()])), 2);
}

fn effectlaws_config() -> serde_json::Value {
    let o = lawcheck(&["--suite", "fastproduct", "--format", "json"]);
    serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["config"].clone()
}

#[test]
fn report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = lawcheck(&["--suite", "coincidence/get", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    without_ms(&std::fs::read(out).unwrap());
}
