use pattern_hc_web::{event_a_curve, pattern_info, sample_and_solve};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn pattern_info_reports_class() {
    let v = parse(pattern_info("<>"));
    assert_eq!(v["class"], "alternating");
    assert_eq!(v["canonical"], "><");
    assert!(parse(pattern_info("ab"))["error"].is_string());
}

#[test]
fn solve_on_dense_sample_finds_verified_cycle() {
    let v = parse(sample_and_solve(8, 0.9, "><", 4));
    assert_eq!(v["n"], 8);
    assert_eq!(v["cycle"]["verified"], true);
    assert!(parse(sample_and_solve(20, 0.5, "><", 0))["error"].is_string());
}

#[test]
fn curve_is_well_formed() {
    let v = parse(event_a_curve(200, "><", -1.0, 1.0, 3, 20, 9));
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 3);
    for p in pts {
        let e = p["estimate"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&e));
        assert!(p["ci"][0].as_f64().unwrap() <= e && e <= p["ci"][1].as_f64().unwrap());
    }
    assert_eq!(parse(event_a_curve(200, "><", 0.0, 0.0, 2, 20, 9)), parse(event_a_curve(200, "><", 0.0, 0.0, 2, 20, 9)));
}
