use std::path::Path;
use std::process::{Command, Output};

fn dirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn scenarios_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

#[test]
fn pinned_scenario_passes_and_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("bundle");
    let sc = scenarios_dir().join("sl3-worked-example.json");
    let o = dirac(&["run", sc.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["manifest.json", "dirac.json", "dirac.csv", "simple_verma.json", "vogan.json"] {
        assert!(out.join(f).exists(), "{} missing", f);
    }
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["status"], "pass");
    assert_eq!(m["floating_point_used"], false);
    let r = dirac(&["report", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.starts_with("scenario  sl3-worked-example"));
    assert!(text.contains("== simple_verma =="));
}

#[test]
fn malformed_input_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad_weight = r#"{"name": "x", "cartan_type": "A2", "module": {"kind": "verma", "lambda": ["1/0", 2]}, "depth": 2, "tasks": ["dirac"]}"#;
    let wrong_rank = r#"{"name": "x", "cartan_type": "A2", "module": {"kind": "verma", "lambda": [1]}, "depth": 2, "tasks": ["dirac"]}"#;
    let unknown_field =
        r#"{"name": "x", "cartan_type": "A1", "module": {"kind": "verma", "lambda": [1]}, "depth": 2, "colour": 1}"#;
    let bad_type = r#"{"name": "x", "cartan_type": "E9", "module": {"kind": "verma", "lambda": [1]}, "depth": 2}"#;
    let too_deep = r#"{"name": "x", "cartan_type": "A1", "module": {"kind": "verma", "lambda": [1]}, "depth": 50}"#;
    for (i, text) in [bad_weight, wrong_rank, unknown_field, bad_type, too_deep, "{"].iter().enumerate() {
        let p = write(tmp.path(), &format!("s{}.json", i), text);
        let o = dirac(&["run", &p, "--out", tmp.path().join("o").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "case {}: {}", i, String::from_utf8_lossy(&o.stderr));
    }
    let o = dirac(&["run", tmp.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_assertion_exits_with_1() {
    let tmp = tempfile::tempdir().unwrap();
    // M(-1) of sl(2) is unitary, so claiming otherwise fails
    let text = r#"{"name": "wrong-claim", "cartan_type": "A1", "module": {"kind": "verma", "lambda": [-1]}, "depth": 4, "tasks": ["hodge"], "expect_unitary": false}"#;
    let p = write(tmp.path(), "s.json", text);
    let out = tmp.path().join("b");
    let o = dirac(&["run", &p, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hodge.positivity_fails"));
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["status"], "fail");
}

#[test]
fn empty_task_list_writes_only_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let text = r#"{"name": "nothing", "cartan_type": "B2", "module": {"kind": "verma", "lambda": [0, 0]}, "depth": 2, "tasks": []}"#;
    let p = write(tmp.path(), "s.json", text);
    let out = tmp.path().join("b");
    let o = dirac(&["run", &p, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files, vec![std::ffi::OsString::from("manifest.json")]);
    let r = dirac(&["report", out.to_str().unwrap()]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("status    pass"));
    assert!(!text.contains("=="));
}

#[test]
fn bundles_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = scenarios_dir().join("jordan-fixture.json");
    let mut dumps = Vec::new();
    for (i, jobs) in ["1", "3", "1"].iter().enumerate() {
        let out = tmp.path().join(format!("b{}", i));
        let o = dirac(&["run", sc.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", jobs, "--depth", "5"]);
        assert_eq!(o.status.code(), Some(0));
        let mut names: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        dumps.push(
            names.iter().map(|p| (p.file_name().unwrap().to_owned(), std::fs::read(p).unwrap())).collect::<Vec<_>>(),
        );
    }
    assert_eq!(dumps[0], dumps[1]);
    assert_eq!(dumps[0], dumps[2]);
}

#[test]
fn output_directory_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let text = r#"{"name": "env-out", "cartan_type": "A1", "module": {"kind": "finite", "lambda": [1]}, "depth": 2, "tasks": ["kostant"]}"#;
    let p = write(tmp.path(), "s.json", text);
    let o =
        Command::new(env!("CARGO_BIN_EXE_dirac")).args(["run", &p]).env("DIRAC_OUT_DIR", tmp.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("env-out").join("kostant.json").exists());
}
