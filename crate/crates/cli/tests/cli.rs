use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const E1: &str = "parity 4;\n0 0 0 1,2;\n1 1 1 4;\n2 2 1 3;\n3 3 1 0;\n4 4 1 0;\n";

fn fpiter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpiter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_e1_with_strategies() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "e1.gm", E1);
    let out = fpiter(&["solve", s(&game), "--strategies", "--check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "0 0 1;"), "{text}");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn solve_single_losing_loop() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "loop.gm", "0 1 0 0;\n");
    for solver in ["fpiter", "fpiter-opt", "brute", "reference"] {
        let out = fpiter(&["solve", s(&game), "--solver", solver, "--strategies"]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), "paritysol 0;\n0 1;\n", "{solver}");
    }
}

#[test]
fn solve_writes_stats_and_output_file() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "e1.gm", E1);
    let sol = dir.path().join("e1.sol");
    let stats = dir.path().join("stats.json");
    let out = fpiter(&["solve", s(&game), "--solver", "fpiter-opt", "--stats", s(&stats), "-o", s(&sol)]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert!(json["outer_iterations"].as_u64().unwrap() >= 1);
    assert!(json["wall_time_ms"].is_number());
    assert_eq!(json["solver_variant"], "fpiter+restrict+cache+noreset");
    assert!(fs::read_to_string(&sol).unwrap().starts_with("paritysol 4;"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.gm", "0 0 0 7;\n");
    assert_eq!(fpiter(&["solve", s(&bad)]).status.code(), Some(2));
    let syntax = write(&dir, "syntax.gm", "0 0 zero 0;\n");
    assert_eq!(fpiter(&["solve", s(&syntax)]).status.code(), Some(2));

    let game = write(&dir, "e1.gm", E1);
    let out = fpiter(&["solve", s(&game), "--check", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node 0"));

    assert_eq!(fpiter(&["solve", s(&game), "--max-evaluations", "2"]).status.code(), Some(4));
    let ladder = dir.path().join("ladder.gm");
    assert!(fpiter(&["generate", "ladder", "5", "-o", s(&ladder)]).status.success());
    let out = fpiter(&["solve", s(&ladder), "--time-limit", "0.01"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall time"));
    let missing = dir.path().join("missing.gm");
    assert_eq!(fpiter(&["solve", s(&missing)]).status.code(), Some(1));
}

#[test]
fn verify_reports() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "e1.gm", E1);
    let good = write(&dir, "good.sol", "paritysol 4;\n0 0 1;\n1 0;\n2 0;\n3 0;\n4 0;\n");
    let out = fpiter(&["verify", s(&game), s(&good)]);
    assert!(out.status.success(), "{}", stdout(&out));

    let wrong_region = write(&dir, "region.sol", "paritysol 4;\n0 1;\n1 0;\n2 0;\n3 0;\n4 0;\n");
    let out = fpiter(&["verify", s(&game), s(&wrong_region)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node 0"));

    let wrong_strategy = write(&dir, "strategy.sol", "paritysol 4;\n0 0 2;\n1 0;\n2 0;\n3 0;\n4 0;\n");
    let out = fpiter(&["verify", s(&game), s(&wrong_strategy)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0->2->3->0"));

    let garbage = write(&dir, "garbage.sol", "paritysol 4;\n0 5;\n");
    assert_eq!(fpiter(&["verify", s(&game), s(&garbage)]).status.code(), Some(2));
}

#[test]
fn solve_output_passes_verify() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let spec = format!("random 9 3 1 3 {seed}");
        let game = dir.path().join(format!("r{seed}.gm"));
        let mut args: Vec<&str> = vec!["generate"];
        args.extend(spec.split(' '));
        args.extend(["-o", s(&game)]);
        assert!(fpiter(&args).status.success());
        let sol = dir.path().join(format!("r{seed}.sol"));
        assert!(fpiter(&["solve", s(&game), "--strategies", "-o", s(&sol)]).status.success());
        let out = fpiter(&["verify", s(&game), s(&sol)]);
        assert!(out.status.success(), "{spec}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn generate_is_deterministic() {
    let a = fpiter(&["generate", "random", "8", "4", "1", "2", "42"]);
    let b = fpiter(&["generate", "random 8 4 1 2 42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fpiter(&["generate", "ladder", "0"]).status.code(), Some(2));
    let ladder = stdout(&fpiter(&["generate", "ladder", "8"]));
    assert_eq!(ladder.lines().count(), 41);
}

#[test]
fn bench_records() {
    let dir = TempDir::new().unwrap();
    let specs = write(&dir, "specs.txt", "# ladders\nladder 2\n\nladder 3\nladder 4\n");
    let out = fpiter(&["bench", s(&specs)]);
    assert!(out.status.success());
    let records: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    let nodes: Vec<u64> = records.iter().map(|r| r["nodes"].as_u64().unwrap()).collect();
    assert_eq!(nodes, vec![10, 15, 20]);
    for key in ["family", "params", "edges", "index", "solver_variant", "outer_iterations", "wall_time_ms"] {
        assert!(records[0].get(key).is_some(), "{key}");
    }

    let again = fpiter(&["bench", s(&specs), "--repeat", "3"]);
    let repeated: Vec<serde_json::Value> = serde_json::from_slice(&again.stdout).unwrap();
    for (a, b) in records.iter().zip(&repeated) {
        assert_eq!(a["outer_iterations"], b["outer_iterations"]);
    }

    let empty = write(&dir, "empty.txt", "");
    let out = fpiter(&["bench", s(&empty)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "[]");

    let mixed = write(&dir, "mixed.txt", "ladder 2\ncube 3\n");
    let out = fpiter(&["bench", s(&mixed)]);
    assert!(out.status.success());
    let records: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records[1]["spec"], "cube 3");

    let broken = write(&dir, "broken.txt", "cube 3\n");
    assert!(!fpiter(&["bench", s(&broken)]).status.success());
}

#[test]
fn trace_e1() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "e1.gm", E1);
    let events = dir.path().join("e1.jsonl");
    let out = fpiter(&["trace", s(&game), "--out", s(&events)]);
    assert!(out.status.success());
    let at0: Vec<(Vec<u64>, u64)> = fs::read_to_string(&events)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|e| e["node"] == 0)
        .map(|e| {
            let stamp = e["stamp"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
            (stamp, e["target"].as_u64().unwrap())
        })
        .collect();
    let wanted = [(vec![0, 0, 0, 0, 1], 2), (vec![0, 0, 1, 1, 1], 1), (vec![0, 1, 0, 0, 1], 2)];
    let mut it = at0.iter();
    for w in &wanted {
        assert!(it.any(|e| e.0 == w.0 && e.1 == w.1), "{w:?} missing from {at0:?}");
    }
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["per_level_iterations"].as_array().unwrap().len(), 5);
    assert!(!summary["snapshot_keys"].as_array().unwrap().is_empty());
}

#[test]
fn trace_budget_and_tiny_game() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "one.gm", "0 0 0 0;\n");
    let out = fpiter(&["trace", s(&game)]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().count() <= 1);
    assert_eq!(fpiter(&["trace", s(&game), "--budget", "0"]).status.code(), Some(4));
}
