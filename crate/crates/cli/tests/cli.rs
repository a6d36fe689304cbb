use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heffter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heffter")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn failed(r: &Value) -> Vec<String> {
    r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn nasm_build_six_by_nine() {
    let out = heffter(&["nasm", "build", "-m", "6", "-n", "9", "-H", "6", "-K", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let rows: Vec<Vec<i64>> = serde_json::from_value(r["outputs"]["matrix"]["rows"].clone()).unwrap();
    let a = [1, 0, -1, 1, 0, -1, 1, 0, -1];
    let b = [-1, 1, 0, -1, 1, 0, -1, 1, 0];
    let c = [0, -1, 1, 0, -1, 1, 0, -1, 1];
    assert_eq!(rows, vec![a.to_vec(), b.to_vec(), c.to_vec(), a.to_vec(), b.to_vec(), c.to_vec()]);
    assert_eq!(r["ok"], true);
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(heffter(&["nasm", "build", "-m", "6", "-n", "9", "-H", "5", "-K", "4"]).status.code(), Some(2));
    assert_eq!(heffter(&["gha", "verify", "--gha", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(heffter(&["nasm", "build", "--bogus"]).status.code(), Some(2));
    assert_eq!(heffter(&["group", "info", "--group", "Q:8"]).status.code(), Some(2));
}

#[test]
fn infeasible_weights_fail_named_check() {
    let out = heffter(&["binmat", "build", "-H", "3,1", "-K", "2,2,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(failed(&report(&out)), vec!["GR:feasibility"]);
    let out = heffter(&["binmat", "build", "-H", "2,1", "-K", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tampered_array_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let gha_path = dir.path().join("v33.json");
    let out = heffter(&[
        "gha", "build-relative", "--d", "16", "--u", "1", "-H", "1,1", "-K", "1,1,1,1",
        "--out", gha_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let gha: Value = serde_json::from_str(&std::fs::read_to_string(&gha_path).unwrap()).unwrap();

    let ok = heffter(&["gha", "verify", "--gha", gha_path.to_str().unwrap(), "--expect", "zero", "--require-simple"]);
    assert_eq!(ok.status.code(), Some(0));

    // flipping the sign of one entry keeps the multiset but breaks a line sum
    let mut flipped = gha.clone();
    let x = flipped["matrix"]["rows"][0][0].as_u64().unwrap();
    flipped["matrix"]["rows"][0][0] = (33 - x).into();
    let p = write(dir.path(), "flipped.json", &flipped);
    let out = heffter(&["gha", "verify", "--gha", &p, "--expect", "zero"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(failed(&r), vec!["sum:zero"]);
    assert_eq!(r["failed"], serde_json::json!(["sum:zero"]));

    let mut changed = gha;
    changed["matrix"]["rows"][1][1] = 2.into();
    let p = write(dir.path(), "changed.json", &changed);
    let out = heffter(&["gha", "verify", "--gha", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(failed(&report(&out)).contains(&"GHA:multiset".to_string()));
}

#[test]
fn pipeline_on_zero_sum_job() {
    let dir = tempfile::tempdir().unwrap();
    let job = serde_json::json!({
        "build": { "construction": "relative", "d": 16, "u": 1, "h": [1, 1], "k": [1, 1, 1, 1] }
    });
    let p = write(dir.path(), "job.json", &job);
    let out = heffter(&["pipeline", "--job", &p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    let flags = &r["outputs"]["flags"];
    assert_eq!(flags["zero_sum"], true);
    assert_eq!(flags["simple"], true);
    assert_eq!(flags["decomposes"], true);
    assert_eq!(flags["orthogonal"], true);
    assert_eq!(flags["biembedding_attempted"], true);
    // a tight 4x4 array cannot have a compatible ordering
    assert_eq!(flags["biembedding_found"], false);
    assert_eq!(r["outputs"]["embedding"]["search"]["outcome"], "parity_obstructed");
    let walks = r["outputs"]["decomposition"]["rows"]["walks"].as_array().unwrap();
    assert_eq!(walks.len(), 4);
    assert!(walks.iter().all(|w| w["vertices"].as_array().unwrap().len() == 5));
}

#[test]
fn pipeline_embeds_filled_row() {
    let dir = tempfile::tempdir().unwrap();
    let job = serde_json::json!({
        "build": { "construction": "fill", "pattern": [[1, 1]], "group": "Z:7", "symbols": [1, 2] }
    });
    let p = write(dir.path(), "job.json", &job);
    let out = heffter(&["pipeline", "--job", &p]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outputs"]["flags"]["nonzero_sum"], true);
    assert_eq!(r["outputs"]["flags"]["biembedding_valid"], true);
    assert_eq!(r["outputs"]["embedding"]["face_count"], 3);
    assert_eq!(r["outputs"]["embedding"]["components"][0]["genus"], 3);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let job = serde_json::json!({
        "build": { "construction": "zero", "v": 33, "x": 8, "symbols": [1, 2, 3, 4, 5, 6, 7, 8],
                   "nasm": { "uniform": { "m": 2, "n": 4, "h": 4, "k": 2 } } }
    });
    let p = write(dir.path(), "job.json", &job);
    let a = heffter(&["pipeline", "--job", &p]);
    let b = heffter(&["pipeline", "--job", &p]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn files_chain_between_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    std::fs::write(d("pattern.txt"), "2 3 Z:2\n1 1 0\n0 1 1\n").unwrap();
    let out = heffter(&["gha", "fill", "--pattern", &d("pattern.txt"), "--group", "Dih:10", "--symbols", "1,2,3,4", "--out", &d("h.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    for side in ["rows", "cols"] {
        let out = heffter(&["decomp", "build", "--gha", &d("h.json"), "--side", side, "--undirected", "--out", &d(&format!("{side}.json"))]);
        assert_eq!(out.status.code(), Some(0));
        let out = heffter(&["decomp", "verify", "--decomp", &d(&format!("{side}.json")), "--connection", "1,2,3,4"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let out = heffter(&["decomp", "orthogonal", "--a", &d("rows.json"), "--b", &d("cols.json")]);
    assert_eq!(out.status.code(), Some(0));

    let out = heffter(&["decomp", "verify", "--decomp", &d("rows.json"), "--connection", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(failed(&report(&out)), vec!["decomposition"]);

    let out = heffter(&["decomp", "circuits", "--gha", &d("h.json"), "--line", "row:0", "--sign", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let out = heffter(&["decomp", "period", "--gha", &d("h.json")]);
    assert_eq!(report(&out)["outputs"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn embed_verify_rejects_incompatible_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    std::fs::write(d("a.txt"), "2 2 Z:11\n1 9\n8 4\n").unwrap();
    let ordering = serde_json::json!({ "rows": [[[0, 0], [0, 1]], [[1, 0], [1, 1]]], "cols": [[[0, 0], [1, 0]], [[0, 1], [1, 1]]] });
    let o = write(dir.path(), "o.json", &ordering);
    let out = heffter(&["embed", "verify", "--gha", &d("a.txt"), "--ordering", &o]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(failed(&report(&out)), vec!["compatibility"]);
}

#[test]
fn ortho_paths() {
    let out = heffter(&["decomp", "paths", "--v", "11", "--symbols", "1-4", "-H", "2,2", "-K", "2,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(failed(&report(&out)).is_empty());
}
