use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrhom")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("arrhom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lattice_counts() {
    let v = json(&["lattice", "--preset", "braid-3"]);
    assert_eq!(v["elements"], 5);
    assert_eq!(v["elements_per_rank"], serde_json::json!([1, 3, 1]));
    assert_eq!(v["essential"], false);
    assert_eq!(v["center_dim"], 1);
    assert_eq!(v["hasse_edges"].as_array().unwrap().len(), 6);
    assert_eq!(json(&["lattice", "--preset", "braid-3-ess"])["essential"], true);
    assert_eq!(json(&["lattice", "--preset", "boolean-2"])["elements"], 4);
    let text = stdout(&run(&["lattice", "--preset", "braid-3"]));
    assert!(text.contains("5 elements, rank 2"));
    assert!(text.contains("Hasse edges"));
}

#[test]
fn charpoly_values() {
    assert_eq!(json(&["charpoly", "--preset", "boolean-3"])["char_poly"], "t^3 - 3t^2 + 3t - 1");
    assert_eq!(json(&["charpoly", "--preset", "braid-3-ess"])["char_poly"], "t^2 - 3t + 2");
    let v = json(&["charpoly", "--preset", "braid-4"]);
    assert_eq!(v["char_poly"], "t^4 - 6t^3 + 11t^2 - 6t");
    assert_eq!(v["char_poly_perp"], "t^3 - 6t^2 + 11t - 6");
    assert_eq!(v["center_dim"], 1);
    assert_eq!(v["derivatives_at_one"], serde_json::json!(["0", "2", "-2", "-12", "24"]));
}

fn grid(v: &Value, key: &str) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for row in v["rows"].as_array().unwrap() {
        let j = row["j"].as_u64().unwrap() as usize;
        for (i, b) in row[key]["betti"].as_array().unwrap().iter().enumerate() {
            if b.as_u64().unwrap() > 0 {
                out.push((i, j, b.as_u64().unwrap()));
            }
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn homology_tables() {
    let v = json(&["homology", "--preset", "braid-3-ess", "--mode", "cellular", "--sheaf", "exterior:all"]);
    assert_eq!(grid(&v, "cellular_homology"), vec![(0, 2, 1), (1, 1, 1)]);
    assert_eq!(v["graded_euler"]["cellular"], "q^2 - q");
    let v = json(&["homology", "--preset", "braid-3-ess", "--mode", "sheaf"]);
    assert_eq!(grid(&v, "sheaf_homology"), vec![(0, 0, 1), (0, 1, 3)]);
    let v = json(&["homology", "--preset", "boolean-4", "--mode", "cellular"]);
    assert_eq!(grid(&v, "cellular_homology"), vec![(0, 4, 1)]);

    let text = stdout(&run(&["homology", "--preset", "pi3", "--sheaf", "natural"]));
    assert!(text.contains("sheaf homology"), "{text}");
    let v = json(&["homology", "--preset", "pi3", "--sheaf", "constant:2", "--mode", "sheaf"]);
    assert_eq!(v["rows"][0]["sheaf_homology"]["betti"], serde_json::json!([2]));
    let v = json(&["homology", "--preset", "pi3", "--sheaf", "exterior:1", "--with-minimum=false", "--mode", "cellular"]);
    assert_eq!(v["with_minimum"], false);
    assert_eq!(v["rows"][0]["cellular_homology"]["betti"], serde_json::json!([3]));
}

#[test]
fn verify_presets_pass() {
    for p in ["boolean-1", "boolean-2", "boolean-3", "boolean-4", "braid-3", "braid-4"] {
        let o = run(&["verify", "--preset", p]);
        assert_eq!(code(&o), 0, "{p}: {}", stdout(&o));
        assert!(stdout(&o).contains("result: PASS"));
    }
    let v = json(&["verify", "--preset", "boolean-3"]);
    assert_eq!(v["passed"], true);
    assert!(v.get("elapsed_ms").is_none());
    assert!(json(&["verify", "--preset", "boolean-3", "--timings"]).get("elapsed_ms").is_some());
}

#[test]
fn corrupted_signs_fail_with_cell_diff() {
    let o = run(&["verify", "--preset", "pi3", "--corrupt-sign", "1,3"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("(i=0, j=0)"), "{text}");
    assert!(text.contains("result: FAIL"));
}

#[test]
fn guards() {
    let o = run(&["verify", "--preset", "braid-4", "--max-chains", "100"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("skipped"));
    let o = run(&["homology", "--preset", "braid-4", "--max-chains", "10", "--mode", "sheaf"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource guard"));
    assert_eq!(code(&run(&["verify", "--preset", "pi3", "--max-chains", "0"])), 2);
}

#[test]
fn input_errors() {
    let path = scratch("dup.json");
    std::fs::write(&path, r#"{"ambient_dim": 2, "hyperplanes": [[1, 0], [0, 1], [2, 0]]}"#).unwrap();
    let o = run(&["lattice", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("0") && err.contains("2") && err.contains("coincide"), "{err}");

    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"ambient_dim\": 2,\n \"hyperplanes\": [[1, 0],, ]}").unwrap();
    let o = run(&["lattice", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(code(&run(&["lattice", "--preset", "nope"])), 2);
    assert_eq!(code(&run(&["lattice"])), 2);
    assert_eq!(code(&run(&["homology", "--preset", "pi3", "--sheaf", "weird"])), 2);
    assert_eq!(code(&run(&["lattice", "--input", "/nonexistent/file.json"])), 2);
}

#[test]
fn file_input_and_dumps() {
    let path = scratch("pi3.json");
    std::fs::write(&path, r#"{"ambient_dim": 2, "hyperplanes": [["1", "0"], ["0", "1"], ["1", "-1"]]}"#).unwrap();
    let complex = scratch("complex.json");
    let sheaf = scratch("sheaf.json");
    let o = run(&[
        "homology",
        "--input",
        path.to_str().unwrap(),
        "--sheaf",
        "exterior:1",
        "--dump-complex",
        complex.to_str().unwrap(),
        "--dump-sheaf",
        sheaf.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&complex).unwrap()).unwrap();
    assert_eq!(c.as_array().unwrap().len(), 2);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&sheaf).unwrap()).unwrap();
    assert_eq!(s[0]["data"]["dims"], serde_json::json!([2, 1, 1, 1, 0]));
    let preset_file = scratch("braid.json");
    std::fs::write(&preset_file, r#"{"preset": "braid", "n": 3}"#).unwrap();
    assert_eq!(json(&["lattice", "--input", preset_file.to_str().unwrap()])["elements"], 5);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    for args in [
        vec!["verify", "--preset", "braid-4", "--format", "json"],
        vec!["homology", "--preset", "generic-4-3", "--format", "json"],
        vec!["verify", "--preset", "pi3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        if args.contains(&"json") {
            let v: Value = serde_json::from_slice(&a.stdout).unwrap();
            let again: Value = serde_json::from_str(&serde_json::to_string_pretty(&v).unwrap()).unwrap();
            assert_eq!(v, again);
            assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", stdout(&a));
        }
    }
}
