use heffter_web::{embed_json, nasm_json, nonzero_gha_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn nasm_export() {
    let r = parse(nasm_json(2, 2, 2, 2).unwrap());
    assert_eq!(r["rows"], serde_json::json!([[1, -1], [-1, 1]]));
    assert_eq!(r["is_nasm"], true);
    assert!(nasm_json(6, 9, 5, 4).is_err());
}

#[test]
fn nonzero_gha_export() {
    let r = parse(nonzero_gha_json(11, "1,2,3,4", 2, 2).unwrap());
    assert_eq!(r["rows"], serde_json::json!([[1, 9], [8, 4]]));
    assert_eq!(r["row_partial_sums"], serde_json::json!([[1, 10], [8, 1]]));
    assert_eq!(r["verdict"], "nonzero_sum");
    assert_eq!(r["simple"], true);
    assert!(nonzero_gha_json(11, "1,2,3", 2, 2).is_err());
}

#[test]
fn embed_export() {
    let r = parse(embed_json("1 2 Z:7\n1 2\n", 100).unwrap());
    assert_eq!(r["found"], true);
    assert_eq!(r["valid"], true);
    assert_eq!(r["faces"].as_array().unwrap().len(), 3);
    assert_eq!(r["components"][0]["genus"], 3);
    let r = parse(embed_json("2 2 Z:11\n1 9\n8 4\n", 100).unwrap());
    assert_eq!(r["found"], false);
    assert_eq!(r["search"]["outcome"], "parity_obstructed");
}
