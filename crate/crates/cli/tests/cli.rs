use std::process::{Command, Output};

use serde_json::Value;

fn tsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsys")).args(args).output().expect("run tsys")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn evolve_all_ones() {
    let o = tsys(&["evolve", "--r", "1", "--alpha", "1", "--j", "0", "--k", "4", "--numeric", "all-ones"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "13");
}

#[test]
fn evolve_symbolic_has_two_terms() {
    let o = tsys(&["--json", "evolve", "--r", "1", "--alpha", "1", "--j", "0", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"].as_str().unwrap().matches(" + ").count(), 1);
}

#[test]
fn window_problems_exit_2() {
    let o = tsys(&["evolve", "--r", "1", "--alpha", "1", "--j", "0", "--k", "6", "--window", "-2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[-5, 5]"));
    let dir = std::env::temp_dir().join(format!("tsys-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("seed.json");
    std::fs::write(&f, r#"{"r": 1, "motzkin": [0]}"#).unwrap();
    let o = tsys(&["evolve", "--seed-file", f.to_str().unwrap(), "--alpha", "1", "--j", "0", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&f, r#"{"r": 1, "window": [-3, 3], "numeric": "all-ones"}"#).unwrap();
    let o = tsys(&["evolve", "--seed-file", f.to_str().unwrap(), "--alpha", "1", "--j", "0", "--k", "2"]);
    assert_eq!(stdout(&o).trim(), "2");
    assert_eq!(tsys(&["evolve", "--r", "1", "--alpha", "1", "--j", "0"]).status.code(), Some(2));
}

#[test]
fn explicit_seed_values() {
    let dir = std::env::temp_dir().join(format!("tsys-cli-values-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut values = Vec::new();
    for j in -1..=1 {
        for l in 0..=1 {
            values.push(format!(r#"{{"alpha": 1, "j": {j}, "level": {l}, "value": "2"}}"#));
        }
    }
    let f = dir.join("seed.json");
    std::fs::write(&f, format!(r#"{{"r": 1, "window": [-1, 1], "values": [{}]}}"#, values.join(","))).unwrap();
    let o = tsys(&["evolve", "--seed-file", f.to_str().unwrap(), "--alpha", "1", "--j", "0", "--k", "2"]);
    assert_eq!(stdout(&o).trim(), "5/2");
    std::fs::write(&f, r#"{"r": 1, "window": [-1, 1], "values": []}"#).unwrap();
    let o = tsys(&["evolve", "--seed-file", f.to_str().unwrap(), "--alpha", "1", "--j", "0", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conserved_a1_has_three_terms() {
    let o = tsys(&["conserved", "--r", "1", "--m", "1", "--j", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().matches(" + ").count(), 2);
    let o = tsys(&["conserved", "--r", "1", "--m", "1", "--j", "4", "--numeric", "all-ones"]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn hard_particle_configurations() {
    let o = tsys(&["--json", "hard-particle", "--r", "2", "--m", "2", "--j", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["configurations"].as_array().unwrap().len(), 5);
}

#[test]
fn paths_positivity() {
    let o = tsys(&["--json", "paths", "--r", "2", "--j", "0", "--k", "2", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["positive"], Value::Bool(true));
    assert_eq!(v["matches_evolve"], Value::Bool(true));
    let o = tsys(&["--json", "paths", "--r", "2", "--motzkin", "1,0", "--j", "0", "--k", "3", "--graph"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["positive"], Value::Bool(true));
    assert!(v["graph"]["edges"].as_array().unwrap().iter().any(|e| e["weight"] == "long 3->1"));
}

#[test]
fn mutate_and_bad_nodes() {
    let o = tsys(&["--json", "mutate", "--r", "1", "--window", "-2", "2", "--sequence", "(1,0)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exchanged"].as_array().unwrap().len(), 1);
    assert_eq!(tsys(&["mutate", "--r", "1", "--window", "-2", "2", "--sequence", "(1,7)"]).status.code(), Some(2));
    assert_eq!(tsys(&["mutate", "--r", "1", "--window", "-2", "2", "--sequence", "oops"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "--suite", "all", "--r", "2", "--kmax", "3"],
        vec!["verify", "--suite", "positivity", "--r", "3", "--kmax", "5"],
        vec!["verify", "--suite", "fractions", "--order", "8"],
    ] {
        let o = tsys(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let arr = v.as_array().unwrap();
        assert!(!arr.is_empty());
        assert!(arr.iter().all(|c| c["ok"] == Value::Bool(true)));
    }
}

#[test]
fn verify_output_is_deterministic() {
    let a = tsys(&["verify", "--suite", "quiver", "--r", "2"]);
    let b = tsys(&["verify", "--suite", "quiver", "--r", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_verify_parameters_exit_2() {
    assert_eq!(tsys(&["verify", "--r", "0"]).status.code(), Some(2));
    assert_eq!(tsys(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}
