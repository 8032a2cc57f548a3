use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qutrit-toffoli"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn synth_ok(args: &[&str]) -> String {
    let o = bin(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn aspen_six_node_example() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "c5z.json");
    let line = synth_ok(&[
        "synth",
        "--preset",
        "aspen-like",
        "--nodes",
        "0,1,2,3,13,14",
        "--out",
        &out,
    ]);
    assert!(line.starts_with("N=6 two-qutrit=9 iswap=8 cz=1 "), "{line}");

    let report = path(&dir, "report.json");
    let o = bin(&["verify", "--circuit", &out, "--report", &report]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["phase_table_ok"], true);
    assert_eq!(r["inputs_checked"], 64);
    assert_eq!(r["stats"]["two_qutrit_count"], 9);
}

#[test]
fn two_node_map_is_one_gate() {
    let dir = TempDir::new().unwrap();
    let topo = path(&dir, "pair.json");
    fs::write(&topo, r#"{"n": 2, "edges": [{"a": 0, "b": 1, "host2": "either"}]}"#).unwrap();
    let out = path(&dir, "cz.json");
    let line = synth_ok(&["synth", "--topology", &topo, "--out", &out]);
    assert!(line.contains("two-qutrit=1"), "{line}");
    assert_eq!(bin(&["verify", "--circuit", &out]).status.code(), Some(0));
}

#[test]
fn path10_cnx_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "c9x.json");
    let line = synth_ok(&[
        "synth", "--preset", "path-10", "--gate", "cnx", "--target", "9", "--out", &out,
    ]);
    assert!(line.contains("two-qutrit=17"), "{line}");
    let o = bin(&["verify", "--circuit", &out, "--jobs", "2", "--trace"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["backend"], "sparse");
    assert_eq!(r["target"], 9);
}

/// Rewrites the targets of the `CZ` so it acts on the root and a qutrit
/// it was not meant to touch.
fn corrupt_cz(circuit: &Path) -> String {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(circuit).unwrap()).unwrap();
    let n = v["n"].as_u64().unwrap();
    let ops = v["ops"].as_array_mut().unwrap();
    let cz = ops.iter_mut().find(|op| op["gate"] == "cz").unwrap();
    let root = cz["targets"][0].as_u64().unwrap();
    let old = cz["targets"][1].as_u64().unwrap();
    let other = (0..n).find(|&q| q != root && q != old).unwrap();
    cz["targets"][1] = other.into();
    serde_json::to_string(&v).unwrap()
}

#[test]
fn corrupted_target_fails_verification() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "ok.json");
    synth_ok(&["synth", "--preset", "star-4", "--out", &out]);
    let bad = path(&dir, "bad.json");
    fs::write(&bad, corrupt_cz(Path::new(&out))).unwrap();

    let o = bin(&["verify", "--circuit", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("violation"), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["phase_table_ok"], false);
    assert!(!r["violations"].as_array().unwrap().is_empty());
}

#[test]
fn loose_tolerance_does_not_hide_a_flipped_basis_state() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "ok.json");
    synth_ok(&["synth", "--preset", "path-3", "--out", &out]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let ops = v["ops"].as_array_mut().unwrap();
    ops.push(serde_json::json!({"gate": "x01", "targets": [0], "params": []}));
    let bad = path(&dir, "flip.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = bin(&["verify", "--circuit", &bad, "--tolerance", "1e-1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let junk = path(&dir, "junk.json");
    fs::write(&junk, "{\"n\": 3, \"ops\": [").unwrap();
    let o = bin(&["verify", "--circuit", &junk]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--circuit"), "{}", stderr(&o));

    let out = path(&dir, "ok.json");
    synth_ok(&["synth", "--preset", "path-3", "--out", &out]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    v["ops"][0]["targets"] = serde_json::json!([0, 7]);
    fs::write(&junk, serde_json::to_string(&v).unwrap()).unwrap();
    let o = bin(&["verify", "--circuit", &junk]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ops[0].targets"), "{}", stderr(&o));

    let topo = path(&dir, "split.json");
    fs::write(
        &topo,
        r#"{"n": 4, "edges": [{"a": 0, "b": 1, "host2": "a"}, {"a": 2, "b": 3, "host2": "b"}]}"#,
    )
    .unwrap();
    let o = bin(&["synth", "--topology", &topo, "--out", &out]);
    assert_eq!(o.status.code(), Some(2));

    let missing = path(&dir, "nowhere.json");
    assert_eq!(bin(&["verify", "--circuit", &missing]).status.code(), Some(2));
    assert_eq!(
        bin(&["synth", "--preset", "path-3", "--gate", "cnx", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["synth", "--preset", "path-3", "--nodes", "0,x", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["synth", "--preset", "moon", "--out", &out]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn export_tree_dot() {
    let o = bin(&["export-tree", "--preset", "path-5"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph tree {\n"), "{dot}");
    assert!(dot.contains("q2 [label=\"1\"];"), "{dot}");
    assert!(dot.contains("label=\"1|1|1\""), "{dot}");
    assert!(!dot.contains("1|1|1|1"), "{dot}");

    let dot = stdout(&bin(&["export-tree", "--preset", "path-5", "--nodes", "3,4"]));
    assert_eq!(dot.matches("->").count(), 1, "{dot}");
    assert!(dot.contains("q3 -> q4;"), "{dot}");

    let dot = stdout(&bin(&["export-tree", "--preset", "star-5"]));
    for k in 1..=4 {
        assert!(dot.contains(&format!("q{k} [label=\"1|{k}\"];")), "{dot}");
        assert!(dot.contains(&format!("q0 -> q{k};")), "{dot}");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = path(&dir, &format!("c{i}.json"));
            let report = path(&dir, &format!("r{i}.json"));
            let dot = path(&dir, &format!("t{i}.dot"));
            synth_ok(&[
                "synth",
                "--preset",
                "aspen-like",
                "--nodes",
                "8,9,10,11,12,13,14,15",
                "--out",
                &out,
            ]);
            assert_eq!(
                bin(&["verify", "--circuit", &out, "--report", &report]).status.code(),
                Some(0)
            );
            assert_eq!(
                bin(&[
                    "export-tree",
                    "--preset",
                    "aspen-like",
                    "--nodes",
                    "0,1,2,3",
                    "--out",
                    &dot
                ])
                .status
                .code(),
                Some(0)
            );
            [out, report, dot].iter().flat_map(|p| fs::read(p).unwrap()).collect()
        })
        .collect();
    assert_eq!(files[0], files[1]);
}

/// Connected map on `n` qutrits: a spanning tree with scattered parents
/// plus a few chords, `host2` cycling through all three values.
fn scattered_map(n: usize, seed: usize) -> String {
    let hosts = ["a", "b", "either"];
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| ((i * 7 + seed) % i, i)).collect();
    edges.extend(
        (3..n)
            .step_by(3)
            .map(|i| (i - 3, i))
            .filter(|&(a, b)| (b * 7 + seed) % b != a),
    );
    let edges: Vec<String> = edges
        .iter()
        .enumerate()
        .map(|(k, (a, b))| format!(r#"{{"a": {a}, "b": {b}, "host2": "{}"}}"#, hosts[(k + seed) % 3]))
        .collect();
    format!(r#"{{"n": {n}, "edges": [{}]}}"#, edges.join(", "))
}

#[test]
fn synth_then_verify_round_trips() {
    let dir = TempDir::new().unwrap();
    let topo = path(&dir, "map.json");
    let out = path(&dir, "c.json");
    for n in 2..=10 {
        for seed in 0..3 {
            fs::write(&topo, scattered_map(n, seed)).unwrap();
            for (gate, target) in [("cnz", None), ("cnx", Some((n - 1).to_string()))] {
                let mut args = vec!["synth", "--topology", &topo, "--gate", gate, "--out", &out];
                if let Some(t) = &target {
                    args.extend(["--target", t.as_str()]);
                }
                synth_ok(&args);
                let o = bin(&["verify", "--circuit", &out]);
                assert_eq!(o.status.code(), Some(0), "n={n} seed={seed} {gate}: {}", stderr(&o));
                let stats = stdout(&bin(&["stats", "--circuit", &out]));
                assert!(stats.contains(&format!("two-qutrit={}", 2 * n - 3)), "{stats}");
            }
        }
    }
}
