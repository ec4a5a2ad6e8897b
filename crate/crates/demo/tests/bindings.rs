use polyweb_demo::{classify_json, connect_json, enumerate_json};
use serde_json::Value;

#[test]
fn classify_reports_flags_and_svg() {
    let v: Value = serde_json::from_str(&classify_json(r#"{"dim":2,"points":[[1,0],[0,1],[-1,-1]]}"#).unwrap()).unwrap();
    assert_eq!(v["flags"]["terminal"], true);
    assert!(v["svg"].as_str().unwrap().starts_with("<?xml"));
    assert!(classify_json("[1, 2").is_err());
}

#[test]
fn connect_returns_a_chain() {
    let out = connect_json(
        r#"{"dim":2,"points":[[1,0],[0,1],[-1,-1]]}"#,
        r#"{"dim":2,"points":[[0,1],[-1,0],[1,-1]]}"#,
        "terminal",
        16,
    )
    .unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["links"].as_array().unwrap().len(), 4);
    assert!(connect_json("{}", "{}", "terminal", 16).is_err());
    assert!(connect_json(r#"{"dim":2,"points":[[1,0],[0,1],[-1,-1]]}"#, r#"{"dim":2,"points":[[1,0],[0,1],[-1,-1]]}"#, "bogus", 16).is_err());
}

#[test]
fn enumerate_counts_classes() {
    let v: Value = serde_json::from_str(&enumerate_json(3, "canonical", true).unwrap()).unwrap();
    assert_eq!(v["census"]["classes"].as_array().unwrap().len(), 4);
    assert!(enumerate_json(9, "canonical", true).is_err());
}
