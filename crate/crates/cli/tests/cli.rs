use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use tempfile::TempDir;

const W5: &str = "# wheel on a 5-cycle\n6 10\n0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n2 3\n3 4\n4 5\n1 5\n";
const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const K4_MINUS_E: &str =
    r#"{"n":4,"edges":[[0,2],[0,3],[1,2],[1,3],[2,3]],"labels":{"0":"u","1":"v"}}"#;
const TWO_K4: &str = "6 10\n0 2\n0 3\n1 2\n1 3\n2 3\n0 4\n0 5\n1 4\n1 5\n4 5\n";
const K33: &str = "6 9\n0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n";
const PATH3: &str = "3 2\n0 1\n1 2\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rigidlink"));
    cmd.args(args).env_remove("RIGIDLINK_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs a command that must succeed and returns its report.
fn report(args: &[&str]) -> Value {
    let out = run(args, &[]);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Runs a command that must fail and returns (exit code, error body).
fn failure(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let out = run(args, env);
    assert!(
        out.stdout.is_empty(),
        "{args:?} printed a report on failure"
    );
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    (out.status.code().unwrap(), err["error"].clone())
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).unwrap()
}

fn without_timing(mut r: Value) -> Value {
    r.as_object_mut().unwrap().remove("timing_ms");
    r
}

fn edge_list(n: usize, edges: &[(usize, usize)]) -> String {
    let mut s = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        s += &format!("{u} {v}\n");
    }
    s
}

fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> String {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    edge_list(n, &edges)
}

#[test]
fn every_command_matches_the_schema() {
    let ws = Workspace::new();
    let w5 = ws.file("w5.txt", W5);
    let k4e = ws.file("k4e.json", K4_MINUS_E);
    let two = ws.file("two.txt", TWO_K4);
    let k33 = ws.file("k33.txt", K33);
    let out = ws.path("out.json");
    let validator = schema();
    let cases: Vec<Vec<&str>> = vec![
        vec!["rank", arg(&w5)],
        vec!["rank", arg(&w5), "--oracle-check"],
        vec!["is-rigid", arg(&k4e), "--oracle-check"],
        vec!["is-globally-rigid", arg(&w5)],
        vec!["is-globally-rigid", arg(&k4e)],
        vec!["is-globally-rigid", arg(&k33)],
        vec!["pair", arg(&w5), "1", "3"],
        vec!["pair", arg(&w5), "0", "1"],
        vec!["pair", arg(&k4e), "u", "v"],
        vec!["pair", arg(&two), "0", "1"],
        vec!["pair", arg(&k33), "0", "1"],
        vec!["pair", arg(&k33), "0", "1", "--certificate", "off"],
        vec!["all-pairs", arg(&w5)],
        vec!["all-pairs", arg(&k33), "--threads", "2"],
        vec!["three-block", arg(&w5), "1", "3"],
        vec!["three-block", arg(&two), "0", "1"],
        vec!["circuit", arg(&w5), "1", "3"],
        vec!["audit-mgr", arg(&w5)],
        vec!["audit-mgr", arg(&k33)],
        vec!["oracle-rank", arg(&w5), "-d", "3", "--seed", "7"],
        vec!["sample-equivalence", arg(&k4e), "u", "v"],
        vec!["sample-equivalence", arg(&w5), "1", "3", "--trials", "5"],
        vec!["convert", arg(&w5), "--to", "json"],
        vec!["convert", arg(&w5), "--to", "json", "-o", arg(&out)],
    ];
    for args in cases {
        let r = report(&args);
        let errors: Vec<String> = validator.iter_errors(&r).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{r}");
        assert_eq!(r["command"], json!(args[0]));
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = schema();
    let ws = Workspace::new();
    let w5 = ws.file("w5.txt", W5);
    let good = report(&["pair", arg(&w5), "1", "3"]);
    assert!(validator.is_valid(&good));
    let mut bad = good.clone();
    bad["result"]["verdict"] = json!("Linked");
    assert!(!validator.is_valid(&bad));
    let mut bad = good.clone();
    bad["input_digest"] = json!("xyz");
    assert!(!validator.is_valid(&bad));
    let mut bad = good;
    bad["command"] = json!("rank");
    assert!(!validator.is_valid(&bad));
}

#[test]
fn spec_examples() {
    let ws = Workspace::new();
    let k4e = ws.file("k4e.json", K4_MINUS_E);
    let r = report(&["pair", arg(&k4e), "u", "v"]);
    assert_eq!(r["result"]["verdict"], "GloballyLoose");
    assert_eq!(r["result"]["reason"], "KappaAtMostTwo");

    let k4 = ws.file("k4.txt", K4);
    let r = report(&["is-globally-rigid", arg(&k4)]);
    assert_eq!(r["result"], json!({ "globally_rigid": true }));

    let w5 = ws.file("w5.txt", W5);
    let r = report(&["rank", arg(&w5)]);
    assert_eq!(r["result"], json!({ "rank": 9 }));

    let r = report(&["all-pairs", arg(&w5), "--certificate", "off"]);
    assert_eq!(
        r["result"]["weakly_linked_pairs"],
        json!([[1, 3], [1, 4], [2, 4], [2, 5], [3, 5]])
    );
}

#[test]
fn repeated_runs_are_identical() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(1);
    for i in 0..5 {
        let g = ws.file(&format!("g{i}.txt"), &random_graph(&mut rng, 8, 0.55));
        for args in [
            vec!["all-pairs", arg(&g)],
            vec!["audit-mgr", arg(&g)],
            vec!["oracle-rank", arg(&g), "-d", "2"],
            vec!["sample-equivalence", arg(&g), "0", "7", "--trials", "10"],
        ] {
            let a = without_timing(report(&args));
            let b = without_timing(report(&args));
            assert_eq!(a, b, "{args:?}");
        }
        let one = without_timing(report(&["all-pairs", arg(&g), "--threads", "1"]));
        let four = without_timing(report(&["all-pairs", arg(&g), "--threads", "4"]));
        assert_eq!(one, four);
    }
}

#[test]
fn pair_and_all_pairs_agree() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(2);
    let mut checked = 0;
    for i in 0..12 {
        let n = rng.gen_range(5..=9);
        let p = rng.gen_range(0.4..0.8);
        let g = ws.file(&format!("g{i}.txt"), &random_graph(&mut rng, n, p));
        let all = report(&["all-pairs", arg(&g)]);
        let pairs = all["result"]["pairs"].as_array().unwrap();
        let mut listed = Vec::new();
        for entry in pairs {
            let (u, v) = (entry["u"].to_string(), entry["v"].to_string());
            let single = report(&["pair", arg(&g), &u, &v]);
            assert_eq!(single["result"], *entry);
            if entry["verdict"] == "WeaklyGloballyLinked" {
                listed.push(json!([entry["u"], entry["v"]]));
            }
            checked += 1;
        }
        assert_eq!(all["result"]["weakly_linked_pairs"], json!(listed));
    }
    assert!(checked > 50);
}

#[test]
fn certificates_can_be_switched_off() {
    let ws = Workspace::new();
    let w5 = ws.file("w5.txt", W5);
    let on = report(&["pair", arg(&w5), "1", "3"]);
    assert_eq!(on["result"]["certificate"]["kind"], "ThreeBlock");
    let off = report(&["pair", arg(&w5), "1", "3", "--certificate", "off"]);
    assert!(off["result"].get("certificate").is_none());
    assert_eq!(off["result"]["verdict"], on["result"]["verdict"]);
}

#[test]
fn labels_and_ids_name_the_same_vertices() {
    let ws = Workspace::new();
    let k4e = ws.file("k4e.json", K4_MINUS_E);
    let by_label = report(&["pair", arg(&k4e), "u", "v"]);
    let by_id = report(&["pair", arg(&k4e), "0", "1"]);
    assert_eq!(without_timing(by_label), without_timing(by_id));
}

#[test]
fn seed_comes_from_flag_then_environment() {
    let ws = Workspace::new();
    let w5 = ws.file("w5.txt", W5);
    let default = report(&["oracle-rank", arg(&w5)]);
    let out = run(&["oracle-rank", arg(&w5)], &[("RIGIDLINK_SEED", "99")]);
    let from_env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(from_env["result"]["seed"], 99);
    assert_ne!(default["result"]["seed"], 99);
    let out = run(
        &["oracle-rank", arg(&w5), "--seed", "5"],
        &[("RIGIDLINK_SEED", "99")],
    );
    let explicit: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(explicit["result"]["seed"], 5);
    assert_eq!(explicit["result"]["rank"], 9);

    let (code, err) = failure(&["oracle-rank", arg(&w5)], &[("RIGIDLINK_SEED", "abc")]);
    assert_eq!((code, err["kind"].as_str()), (2, Some("invalid_seed")));
}

#[test]
fn convert_round_trips() {
    let ws = Workspace::new();
    let w5 = ws.file("w5.txt", W5);
    let json_path = ws.path("w5.json");
    let back_path = ws.path("back.txt");
    let a = report(&["convert", arg(&w5), "--to", "json", "-o", arg(&json_path)]);
    let b = report(&[
        "convert",
        arg(&json_path),
        "--to",
        "edge-list",
        "-o",
        arg(&back_path),
    ]);
    assert_eq!(a["input_digest"], b["input_digest"]);
    let back = std::fs::read_to_string(&back_path).unwrap();
    // Canonical output drops comments and sorts the edges.
    assert_eq!(
        back,
        "6 10\n0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n1 5\n2 3\n3 4\n4 5\n"
    );
    let inline = report(&["convert", arg(&w5), "--to", "json"]);
    assert_eq!(
        inline["result"]["graph"].as_str().unwrap(),
        std::fs::read_to_string(&json_path).unwrap()
    );
    let forced = report(&["--format", "json", "rank", arg(&json_path)]);
    assert_eq!(forced["result"]["rank"], 9);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let w5 = ws.file("w5.txt", W5);
    let path3 = ws.file("p3.txt", PATH3);
    let bad = ws.file("bad.txt", "3 1\n0 x\n");
    let self_loop = ws.file("loop.txt", "3 1\n1 1\n");
    let short = ws.file("short.txt", "3 2\n0 1\n");
    let bad_json = ws.file("bad.json", "{\"n\": 2, \"edges\": [[0, 5]]}");
    let missing = ws.path("missing.txt");

    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["rank", arg(&bad)], 1, "parse"),
        (vec!["rank", arg(&self_loop)], 1, "parse"),
        (vec!["rank", arg(&short)], 1, "parse"),
        (vec!["rank", arg(&bad_json)], 1, "parse"),
        (vec!["rank", arg(&missing)], 1, "io"),
        (vec!["pair", arg(&w5), "1", "z"], 2, "unknown_vertex"),
        (vec!["pair", arg(&w5), "1", "6"], 2, "unknown_vertex"),
        (vec!["pair", arg(&w5), "2", "2"], 2, "same_vertex"),
        (vec!["circuit", arg(&w5), "0", "1"], 2, "adjacent_pair"),
        (
            vec!["three-block", arg(&path3), "0", "2"],
            2,
            "not_2_connected",
        ),
        (
            vec!["oracle-rank", arg(&w5), "-d", "0"],
            2,
            "limit_exceeded",
        ),
        (vec!["frobnicate", arg(&w5)], 2, "usage"),
        (vec!["pair", arg(&w5), "1"], 2, "usage"),
    ];
    for (args, code, kind) in cases {
        let (got, err) = failure(&args, &[]);
        assert_eq!(
            (got, err["kind"].as_str()),
            (code, Some(kind)),
            "{args:?}: {err}"
        );
        assert!(err["message"].is_string());
    }
    let (_, err) = failure(&["rank", arg(&bad)], &[]);
    assert_eq!(err["line"], 2);

    let ok = run(&["rank", arg(&w5), "--oracle-check"], &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(run(&["--help"], &[]).status.success());
}
