use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holoshadow"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holoshadow-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

// the subset of JSON Schema used by the shipped schema files
fn validate(v: &Value, s: &Value, at: &str) -> Result<(), String> {
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(x) => vec![x.as_str()],
            Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_u64() || v.is_i64(),
            "number" => v.is_number(),
            "null" => v.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("{at}: {v} is not {types:?}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{at}: {x} < {min}"));
        }
    }
    if let Some(req) = s.get("required").and_then(Value::as_array) {
        for key in req.iter().filter_map(Value::as_str) {
            if v.get(key).is_none() {
                return Err(format!("{at}: missing {key}"));
            }
        }
    }
    if let (Some(props), Some(obj)) = (s.get("properties").and_then(Value::as_object), v.as_object()) {
        for (k, sub) in props {
            if let Some(x) = obj.get(k) {
                validate(x, sub, &format!("{at}.{k}"))?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < n {
                return Err(format!("{at}: too few items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if arr.len() as u64 > n {
                return Err(format!("{at}: too many items"));
            }
        }
        for (i, x) in arr.iter().enumerate() {
            validate(x, items, &format!("{at}[{i}]"))?;
        }
    }
    if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
        let hits = alts.iter().filter(|alt| validate(v, alt, at).is_ok()).count();
        if hits != 1 {
            return Err(format!("{at}: matches {hits} alternatives"));
        }
    }
    Ok(())
}

fn json_stdout(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn outputs_match_schemas() {
    let dir = scratch("schema");
    let g = dir.join("g.json");
    assert!(run(&["tiling", "gen", "--p", "5", "--q", "4", "--layers", "2", "--out", g.to_str().unwrap()]).status.success());
    let graph: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    validate(&graph, &schema("graph.schema.json"), "graph").unwrap();

    let gs = g.to_str().unwrap();
    let plr = json_stdout(&["ising", "plr", "--graph", gs, "--d", "3", "--support", "0:4"]);
    validate(&plr, &schema("plr.schema.json"), "plr").unwrap();
    let inf = json_stdout(&["ising", "plr", "--graph", gs, "--d", "inf", "--support", "0:4", "--mode", "per-leg"]);
    validate(&inf, &schema("plr.schema.json"), "plr-inf").unwrap();
    assert!(inf["w"].is_null());
    let tree = json_stdout(&["tree", "plr", "--d", "2", "--n", "4", "--support", "0:4"]);
    validate(&tree, &schema("plr.schema.json"), "tree").unwrap();
    assert_eq!(tree["w_exact"], "53/1125");
    let ef = json_stdout(&["ising", "ef", "--graph", gs, "--d", "2", "--region", "1,2"]);
    validate(&ef, &schema("ef.schema.json"), "ef").unwrap();

    let sweep = dir.join("s.csv");
    assert!(run(&["cut", "sweep", "--graph", gs, "--out", sweep.to_str().unwrap()]).status.success());
    let fit = json_stdout(&["fit", "ceff", "--csv", sweep.to_str().unwrap(), "--N", "25"]);
    validate(&fit, &schema("fit.schema.json"), "fit").unwrap();
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn validator_rejects_bad_documents() {
    let s = schema("fit.schema.json");
    let bad: Value = serde_json::json!({"c_eff": 2.0, "stderr": -1.0, "residual_rms": 0.0, "n_points": 3, "config": {}});
    assert!(validate(&bad, &s, "fit").is_err());
    let missing: Value = serde_json::json!({"c_eff": 2.0});
    assert!(validate(&missing, &s, "fit").is_err());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tree", "plr", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["tree", "plr", "--d", "2", "--n", "6", "--support", "0:1"]).status.code(), Some(1));
    assert_eq!(run(&["tiling", "gen", "--p", "7", "--q", "3", "--layers", "2"]).status.code(), Some(1));
    assert_eq!(run(&["geom", "ceff", "--rho", "1.5"]).status.code(), Some(1));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("tree"));
}

#[test]
fn timestamp_toggle() {
    let with = run(&["tree", "table", "--d", "2"]);
    let without = run(&["--no-timestamp", "tree", "table", "--d", "2"]);
    let with = String::from_utf8(with.stdout).unwrap();
    let without = String::from_utf8(without.stdout).unwrap();
    assert!(with.contains("# generated_at: "));
    assert!(!without.contains("generated_at"));
    assert!(without.starts_with("# config: "));
    assert_eq!(without.lines().nth(1), Some("d,Q,beta"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = scratch("threads");
    let g = dir.join("g.json");
    assert!(run(&["tiling", "gen", "--p", "3", "--q", "7", "--layers", "3", "--out", g.to_str().unwrap()]).status.success());
    let sweep = |threads: &str| {
        bin().env("HOLOSHADOW_THREADS", threads)
            .args(["--no-timestamp", "cut", "sweep", "--graph", g.to_str().unwrap(), "--vertex-aligned"])
            .output()
            .unwrap()
            .stdout
    };
    let one = sweep("1");
    assert!(!one.is_empty());
    assert_eq!(one, sweep("4"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn geometry_scalar() {
    let out = run(&["geom", "ceff", "--R", "1", "--rho", "0.999999", "--phi", "pi", "--precision", "6"]);
    let c: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(c > 1.9 && c < 2.0);
}
