//! End-to-end runs of the `qcc` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc")).args(args).output().expect("qcc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcc-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn rank2_period_five() {
    let o = qcc(&["rank2", "vars", "--b", "1", "--c", "1", "--from", "1", "--to", "6"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0].trim_start_matches("X1 = "), lines[5].trim_start_matches("X6 = "));
    let back = qcc(&["rank2", "vars", "--b", "1", "--c", "1", "--from", "-4", "--to", "1"]);
    let back = stdout(&back);
    assert_eq!(back.lines().next(), Some(lines[0].replace("X1", "X-4").as_str()));
}

#[test]
fn seed_mutation_example() {
    let o = qcc(&["seed", "mutate", "--b", "[[0,1],[-1,0]]", "--lambda", "[[0,1],[-1,0]]", "--dirs", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("X1 = M(-1,0) + M(-1,1)"), "{}", stdout(&o));
    let j = qcc(&["--json", "seed", "mutate", "--quiver", "a2", "--dirs", "1,2"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert!(v.get("vars").is_some());
}

#[test]
fn batch_theorem_check() {
    let o = qcc(&["verify", "thm1", "--quiver", "a2", "--dmax", "2,2", "--samples", "2,3,4,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("thm1 a2 dmax=2,2: 57/57 passed"), "{}", stdout(&o));
    let o = qcc(&["verify", "thm2", "--quiver", "kronecker", "--dmax", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn quiver_files_and_characters() {
    let dir = scratch("quiver");
    let path = dir.join("a2.txt");
    std::fs::write(&path, "vertices: 2\n1 -> 2\nlambda: [[0,1],[-1,0]]\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = qcc(&["cc", "char", "--quiver", p, "--dim", "1,1"]);
    let preset = qcc(&["cc", "char", "--quiver", "a2", "--dim", "1,1"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, preset.stdout);
    let shifted = qcc(&["cc", "char", "--quiver", "a2", "--dim", "0", "--inj", "1,0"]);
    assert_eq!(stdout(&shifted), "X[0 + M(1,0)[-1]] = M(1,0)\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn oracle_tables() {
    let o = qcc(&["oracle", "eps", "--quiver", "kronecker", "--q", "3", "--dim", "S1", "--other", "S2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sum 9 expected 9 direct true"));
    let o = qcc(&["oracle", "gr", "--quiver", "kronecker", "--q", "2", "--dim", "P1"]);
    assert!(stdout(&o).contains("[0, 1]\t3"), "{}", stdout(&o));
    let o = qcc(&["oracle", "hall", "--quiver", "a2", "--q", "2", "--dim", "1,1"]);
    assert!(stdout(&o).lines().count() > 2);
}

#[test]
fn exit_codes() {
    assert_eq!(qcc(&["verify", "thm9"]).status.code(), Some(2));
    assert_eq!(qcc(&["rank2", "vars", "--b", "x", "--c", "1"]).status.code(), Some(2));
    assert_eq!(qcc(&["cc", "char", "--quiver", "nowhere.txt"]).status.code(), Some(2));
    assert_eq!(qcc(&["verify", "thm1", "--samples", "2,2"]).status.code(), Some(2));
    assert_eq!(qcc(&["verify", "thm1", "--samples", "6"]).status.code(), Some(2));
    let o = qcc(&["oracle", "hall", "--quiver", "kronecker", "--q", "2", "--dim", "4,4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn warm_cache_reproduces_output() {
    let dir = scratch("cache");
    let c = dir.to_str().unwrap();
    let args = ["--cache", c, "basis", "check", "--b", "1", "--c", "2", "--radius", "2"];
    let cold = qcc(&args);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    let warm = qcc(&args);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    // a different command gets its own entry
    qcc(&["--cache", c, "basis", "check", "--b", "1", "--c", "1", "--radius", "2"]);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sequential_matches_parallel() {
    let args = ["verify", "green", "--quiver", "kronecker", "--dmax", "1,1"];
    let par = qcc(&args);
    let mut seq_args = vec!["--sequential"];
    seq_args.extend(args);
    assert_eq!(par.stdout, qcc(&seq_args).stdout);
}
