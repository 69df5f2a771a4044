use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubepart")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubepart-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn screen_rejects_by_divisibility() {
    let o = run(&["screen", "1", "11", "5", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL(DIV3)"), "{}", stdout(&o));
}

#[test]
fn screen_accepts_a_known_matrix() {
    let o = run(&["screen", "3", "9", "7", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_output_is_versioned() {
    let o = run(&["--json", "screen", "0", "3", "1", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["ok"], true);
    assert!(v.get("report").is_some());
}

#[test]
fn bad_arguments_exit_with_two() {
    let o = run(&["verify", "/nonexistent/partition.eqp"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["construct", "fdf", "--choice", "zzz"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constructed_partition_verifies() {
    let dir = scratch_dir("fdf");
    let file = dir.join("fdf.eqp");
    let o = run(&["construct", "fdf", "--choice", "a5a", "--out", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let head = fs::read_to_string(&file).unwrap();
    assert!(head.starts_with("EQP n=12 matrix=3,9,7,5"), "{}", &head[..40.min(head.len())]);
    let o = run(&["verify", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["spectrum", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn arrays_export_check_and_shorten() {
    let dir = scratch_dir("oa");
    let o = run(&["appendix-check", "--export", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("13/16 OK, 16 distinct classes"), "{out}");
    assert!(out.contains("entry  5: orbits0"), "{out}");

    let entry = dir.join("entry01.eqp");
    let o = run(&["oa", "export", entry.to_str().unwrap()]);
    assert!(o.status.success());
    let oa = dir.join("entry01.oa");
    fs::write(&oa, &o.stdout).unwrap();
    assert!(stdout(&o).starts_with("OA 1024 12 2 7"));

    let o = run(&["oa", "check", oa.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "OA(1024,12,2,7) verified");

    let o = run(&["oa", "shorten", oa.to_str().unwrap(), "--coord", "3", "--value", "1"]);
    assert!(o.status.success());
    let short = dir.join("short.oa");
    fs::write(&short, &o.stdout).unwrap();
    let o = run(&["oa", "check", short.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "OA(512,11,2,6) verified");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn doubling_a_seed_file() {
    let dir = scratch_dir("double");
    let seed = dir.join("q3.eqp");
    fs::write(&seed, "EQP n=3 matrix=0,3,1,2\n0\n7\n").unwrap();
    let o = run(&["construct", "double", seed.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("EQP n=6 matrix=0,6,2,4"), "{}", stdout(&o));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bitriple_stage_counts() {
    let o = run(&["classify", "3975", "--stage", "bitriples"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("36 bitriple classes"), "{}", stdout(&o));
}

#[test]
fn two_local_stage_counts() {
    let o = run(&["classify", "01248", "--radius", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("P0 radius 2: 94 classes"), "{out}");
    assert!(out.contains("P1 radius 2: 6 classes"), "{out}");
}
