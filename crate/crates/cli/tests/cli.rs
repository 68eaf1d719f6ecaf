use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn permatch(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permatch"))
        .current_dir(dir)
        .env_remove("PERMATCH_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = permatch(dir, args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const CYCLE5: &str = "digraph 5\n0 1\n1 2\n2 3\n3 4\n4 0\n";
// Directed 4-cycle plus the chord 0 -> 2: d = 1, p = 2 + 1 = 3 is strict.
const CHORDED: &str = "digraph 4\n0 1\n1 2\n2 3\n3 0\n0 2\n2 0\n";

#[test]
fn cycle_ratio_is_one_half() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "cycle5.txt", CYCLE5);
    assert_eq!(ok(dir.path(), &["count", "--input", "cycle5.txt", "--what", "ratio"]), "1/2 (0.500000000000)\n");
}

#[test]
fn blowup_has_thirty_two_derangements() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["construct", "--kind", "blowup", "--k", "2", "--l", "5", "--out", "d25.txt"]);
    assert_eq!(ok(dir.path(), &["count", "--input", "d25.txt", "--what", "derangements"]), "32\n");
}

#[test]
fn strict_instance_holds_strictly() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "notacycle.txt", CHORDED);
    let text = ok(dir.path(), &["verify", "--theorem", "3", "--input", "notacycle.txt"]);
    assert!(text.starts_with("holds (strict)"), "{text}");
}

#[test]
fn constructions_round_trip_through_both_formats() {
    let dir = TempDir::new().unwrap();
    for out in ["k33.txt", "k33.json"] {
        ok(dir.path(), &["construct", "--kind", "complete-bipartite", "--n", "3", "--out", out]);
        assert_eq!(ok(dir.path(), &["count", "--input", out, "--what", "matchings"]), "6\n");
        assert_eq!(ok(dir.path(), &["count", "--input", out, "--what", "derangements"]), "36\n");
    }
}

#[test]
fn injection_and_inverse_agree() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c5.txt", CYCLE5);
    let image = ok(dir.path(), &["inject", "--input", "c5.txt", "--vertex", "0", "--perm", "1,2,3,4,0"]);
    assert_eq!(image, "0,1,2,3,4\n");
    let back = ok(dir.path(), &["inject", "--input", "c5.txt", "--vertex", "0", "--perm", "0,1,2,3,4", "--invert"]);
    assert_eq!(back, "1,2,3,4,0\n");
}

#[test]
fn expectation_is_exact() {
    let dir = TempDir::new().unwrap();
    let text = ok(dir.path(), &["expect", "--n", "4", "--m", "6"]);
    assert!(text.contains("E[X] = 3/11 (0.272727272727)"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(permatch(d, &["count", "--input", "missing.txt", "--what", "ratio"]).status.code(), Some(3));
    write(d, "bad.txt", "digraph 3\n0 7\n");
    assert_eq!(permatch(d, &["count", "--input", "bad.txt", "--what", "ratio"]).status.code(), Some(3));
    write(d, "garbage.txt", "hello\n");
    assert_eq!(permatch(d, &["count", "--input", "garbage.txt", "--what", "ratio"]).status.code(), Some(3));
    assert_eq!(permatch(d, &["count", "--what", "ratio"]).status.code(), Some(2));
    assert_eq!(permatch(d, &["count", "--input", "x", "--what", "ratio", "--bogus"]).status.code(), Some(2));
    assert_eq!(permatch(d, &["construct", "--kind", "blowup", "--out", "x.txt"]).status.code(), Some(2));
    assert_eq!(permatch(d, &["mc", "--model", "graph", "--n", "4", "--q", "1.5", "--samples", "2"]).status.code(), Some(2));
    assert_eq!(permatch(d, &["--threads", "0", "expect", "--n", "3", "--m", "2"]).status.code(), Some(2));
    assert_eq!(permatch(d, &["scan", "--family", "digraphs", "--n", "9", "--out", "s.csv"]).status.code(), Some(2));
}

#[test]
fn threads_never_change_output() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let mut runs = Vec::new();
    for t in ["1", "3"] {
        let csv = format!("scan{t}.csv");
        let summary = ok(d, &["--threads", t, "--json", "scan", "--family", "digraphs", "--n", "3", "--out", &csv]);
        let sampled = format!("sampled{t}.jsonl");
        let s2 = ok(
            d,
            &["--threads", t, "scan", "--family", "sampled-undirected", "--n", "6", "--samples", "40", "--seed", "7", "--out", &sampled],
        );
        let mc = ok(d, &["--threads", t, "mc", "--model", "digraph", "--n", "6", "--q", "0.6", "--samples", "30", "--seed", "3"]);
        runs.push((
            summary,
            std::fs::read(d.join(&csv)).unwrap(),
            s2,
            std::fs::read(d.join(&sampled)).unwrap(),
            mc,
        ));
    }
    assert!(runs[0] == runs[1]);
    // The environment variable is the default for the flag.
    let o = Command::new(env!("CARGO_BIN_EXE_permatch"))
        .current_dir(d)
        .env("PERMATCH_THREADS", "2")
        .args(["mc", "--model", "digraph", "--n", "6", "--q", "0.6", "--samples", "30", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o), runs[0].4);
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(name: &str, dir: &Path, args: &[&str]) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = permatch(dir, &full);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let value: Value = serde_json::from_slice(&o.stdout).unwrap();
    let compiled = schema(name);
    let msgs: Vec<String> = match compiled.validate(&value) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{args:?} does not match {name}: {msgs:?}");
}

#[test]
fn json_output_matches_schemas() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "c5.txt", CYCLE5);
    ok(d, &["construct", "--kind", "thm2h", "--n", "2", "--out", "h.txt"]);
    ok(d, &["construct", "--kind", "complete-bipartite", "--n", "3", "--out", "k33.json"]);
    for what in ["derangements", "permutations", "ratio", "fixed-points"] {
        assert_valid("count", d, &["count", "--input", "c5.txt", "--what", what]);
    }
    assert_valid("count", d, &["count", "--input", "h.txt", "--what", "matchings"]);
    for kind in [&["--kind", "cycle", "--n", "4"][..], &["--kind", "thm2h", "--n", "2"], &["--kind", "blowup", "--k", "2", "--l", "3"]] {
        let mut args = vec!["construct"];
        args.extend_from_slice(kind);
        args.extend_from_slice(&["--out", "g.json"]);
        assert_valid("construct", d, &args);
    }
    assert_valid("inject", d, &["inject", "--input", "c5.txt", "--vertex", "0", "--perm", "1,2,3,4,0"]);
    assert_valid("verify", d, &["verify", "--theorem", "1", "--input", "k33.json"]);
    assert_valid("verify", d, &["verify", "--theorem", "2", "--input", "h.txt"]);
    assert_valid("verify", d, &["verify", "--theorem", "3", "--input", "c5.txt"]);
    assert_valid("verify", d, &["verify", "--theorem", "6", "--input", "k33.json"]);
    assert_valid("verify", d, &["verify", "--theorem", "injection", "--input", "c5.txt"]);
    assert_valid("verify", d, &["verify", "--theorem", "blowup", "--k", "3", "--l", "2"]);
    assert_valid("verify", d, &["verify", "--theorem", "subpermanent", "--input", "k33.json"]);
    assert_valid("verify", d, &["verify", "--theorem", "corollary", "--input", "c5.txt"]);
    assert_valid("scan", d, &["scan", "--family", "digraphs", "--n", "3", "--out", "s.csv"]);
    assert_valid("scan", d, &["scan", "--family", "bipartite", "--n", "2", "--out", "b.jsonl"]);
    assert_valid("scan", d, &["scan", "--family", "sampled-undirected", "--n", "6", "--samples", "20", "--out", "u.csv"]);
    assert_valid("mc", d, &["mc", "--model", "graph", "--n", "6", "--q", "1/2", "--samples", "10"]);
    assert_valid("expect", d, &["expect", "--n", "5", "--m", "8"]);
}
