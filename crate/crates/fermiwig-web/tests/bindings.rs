use fermiwig_web::{h_curves_json, overlap_json, wigner_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("call succeeds")).unwrap()
}

#[test]
fn overlap_agrees_with_direct_evaluation() {
    for (c1, c2, t) in [(1, -1, "1/2"), (1, 1, "1/3"), (-1, -1, "2"), (-1, 1, "-1/2")] {
        let r = parse(overlap_json(c1, c2, t, 1));
        assert_eq!(r["agrees"], true, "{c1} {c2} {t}");
        assert_eq!(r["h"].as_array().unwrap().len(), 9);
    }
}

#[test]
fn overlap_values() {
    let r = parse(overlap_json(1, -1, "1/2", 1));
    assert_eq!(r["d"], "(3/4,0)");
    assert_eq!(r["h"][3], serde_json::json!(["h1", "(2/3,0)"]));
    assert!(r["overlap"].as_str().unwrap().starts_with("(3/4,0)"));
}

#[test]
fn overlap_rejects_bad_input() {
    assert!(overlap_json(1, -1, "1", 1).unwrap_err().contains("singular"));
    assert!(overlap_json(2, 1, "1/2", 1).is_err());
    assert!(overlap_json(1, 1, "x", 1).is_err());
    assert!(overlap_json(1, 1, "1/2", 3).is_err());
}

#[test]
fn h_curves_shape_and_singularity() {
    let r = parse(h_curves_json(1, -1, 2.0, 4));
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["h"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum::<f64>(), 0.0);
    // t = 1 is where 1 − t² vanishes
    assert_eq!(rows[2]["t"], 1.0);
    assert!(rows[2]["h"].is_null());
    let r = parse(h_curves_json(1, 1, 1.0, 10));
    assert!(r["rows"].as_array().unwrap().iter().all(|row| row["h"].is_array()));
}

#[test]
fn h_curves_rejects_bad_input() {
    assert!(h_curves_json(1, 3, 1.0, 10).is_err());
    assert!(h_curves_json(1, 1, f64::NAN, 10).is_err());
    assert!(h_curves_json(1, 1, 1.0, 0).is_err());
}

#[test]
fn wigner_of_operators() {
    let r = parse(wigner_json("a+0 a0", 1));
    assert_eq!(r["roundtrip"], true);
    assert!(r["w"].as_str().unwrap().starts_with("(1/2,0)"));
    let r = parse(wigner_json("q0", 1));
    assert_eq!(r["w"], "(1,0) * q[0]");
    let r = parse(wigner_json("1", 1));
    assert_eq!(r["w"], "(1,0)");
}

#[test]
fn wigner_reports_parse_errors() {
    let e = wigner_json("a0 +", 1).unwrap_err();
    assert!(e.contains("parse error"), "{e}");
    assert!(wigner_json("a3", 1).unwrap_err().contains("out of range"));
}
