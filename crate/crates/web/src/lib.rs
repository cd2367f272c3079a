//! Browser bindings for the demo page in `www/`. Every export returns JSON text.

use pattern_hc::experiments::clopper_pearson;
use pattern_hc::model::{limiting_probability, sample_dnp, sample_dnp_degrees, threshold_p};
use pattern_hc::rng::trial_rng;
use pattern_hc::solver::{exact_pi_hc, verify_pi_hc};
use pattern_hc::{DegreeVariant, Pattern};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn err(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn parse(pattern: &str) -> Result<Pattern, String> {
    pattern.trim().parse().map_err(|e: pattern_hc::PatternError| e.to_string())
}

/// Canonical form, class and degree condition of a pattern written with `>` and `<`.
#[wasm_bindgen]
pub fn pattern_info(pattern: &str) -> String {
    let p = match parse(pattern) {
        Ok(p) => p,
        Err(e) => return err(e),
    };
    let canon = p.canonical_form();
    json!({
        "pattern": p.to_string(),
        "canonical": canon.to_string(),
        "class": canon.classify().to_string(),
        "primitive": p.is_primitive(),
        "degree_condition": DegreeVariant::for_pattern(&p).map(|v| v.name()),
    })
    .to_string()
}

/// Samples `D(n, p)` and searches it exactly for a pattern Hamilton cycle (`n <= 12`).
#[wasm_bindgen]
pub fn sample_and_solve(n: usize, p: f64, pattern: &str, seed: u64) -> String {
    let pi = match parse(pattern) {
        Ok(p) => p,
        Err(e) => return err(e),
    };
    if !(2..=12).contains(&n) {
        return err("n must be between 2 and 12");
    }
    let d = match sample_dnp(n, p, &mut trial_rng(seed, 0)) {
        Ok(d) => d,
        Err(e) => return err(e),
    };
    let arcs: Vec<Value> = d
        .arcs()
        .iter()
        .map(|a| json!([a.tail, a.head, a.labels.as_str()]))
        .collect();
    let cycle = match exact_pi_hc(&d, &pi) {
        Ok(Some(w)) => json!({
            "order": w.order,
            "orientations": w.orientation_string(),
            "verified": verify_pi_hc(&d, &w, &pi),
        }),
        Ok(None) => Value::Null,
        Err(e) => return err(e),
    };
    json!({ "n": n, "arcs": arcs, "cycle": cycle }).to_string()
}

/// Estimated probability of the degree condition at the threshold shifted by `c`,
/// for `steps` values of `c` in `[c_min, c_max]`, next to the limiting value.
#[wasm_bindgen]
pub fn event_a_curve(n: usize, pattern: &str, c_min: f64, c_max: f64, steps: usize, trials: usize, seed: u64) -> String {
    let pi = match parse(pattern) {
        Ok(p) => p,
        Err(e) => return err(e),
    };
    let Some(variant) = DegreeVariant::for_pattern(&pi) else {
        return err("pattern has no degree condition");
    };
    if n < 16 || steps < 2 || trials == 0 {
        return err("need n >= 16, steps >= 2, trials >= 1");
    }
    let points: Vec<Value> = (0..steps)
        .map(|i| {
            let c = c_min + (c_max - c_min) * i as f64 / (steps - 1) as f64;
            let p = threshold_p(variant, n, c).expect("n >= 16");
            let hits = (0..trials)
                .filter(|&t| {
                    let mut rng = trial_rng(seed, ((i as u64) << 32) | t as u64);
                    let (ins, outs) = sample_dnp_degrees(n, p, &mut rng).expect("valid p");
                    ins.iter().zip(&outs).all(|(&a, &b)| variant.satisfied(a as usize, b as usize))
                })
                .count();
            let (lo, hi) = clopper_pearson(hits, trials, 0.05);
            json!({
                "c": c,
                "estimate": hits as f64 / trials as f64,
                "ci": [lo, hi],
                "limit": limiting_probability(variant, c),
            })
        })
        .collect();
    json!({ "n": n, "condition": variant.name(), "points": points }).to_string()
}
