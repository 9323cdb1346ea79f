//! Browser bindings for the solver and the inequality checks.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! so the page needs no generated glue types. Failures never throw; they
//! come back as `{"error": "..."}` for the page to render. Non-finite
//! numbers inside reports follow the library convention: the strings
//! "inf" / "-inf" / "nan" instead of JSON null.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sugeno_core::expr::Expr;
use sugeno_core::harness;
use sugeno_core::ineq::{self, CheckConfig, InnerKind};
use sugeno_core::measure::{Interval, MeasureSpec};
use sugeno_core::sugeno;

fn wrap(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string_pretty(&v).unwrap_or_else(|e| {
            json!({ "error": format!("serialization failed: {e}") }).to_string()
        }),
        Err(e) => serde_json::to_string_pretty(&json!({ "error": e })).unwrap(),
    }
}

fn parse_expr(text: &str, what: &str) -> Result<Expr, String> {
    text.parse().map_err(|e| format!("{what}: {e}"))
}

fn parse_domain(lo: f64, hi: f64) -> Result<Interval, String> {
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_weight(text: &str) -> Result<MeasureSpec, String> {
    text.parse::<MeasureSpec>().map_err(|e| e.to_string())
}

fn report_value(f: &str, lo: f64, hi: f64, measure: &str, tol: f64) -> Result<Value, String> {
    let expr = parse_expr(f, "f")?;
    let domain = parse_domain(lo, hi)?;
    let m = parse_weight(measure)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!("tolerance must be positive and finite, got {tol}"));
    }
    let shape = ineq::probe_shape(&expr, lo, hi);
    let solved =
        sugeno::sugeno_integral(&expr, domain, &m, tol, &CheckConfig::default().level(shape))
            .map_err(|e| e.to_string())?;
    let mut notes = vec![format!(
        "value solves the fixed point min(α, m(A ∩ {{f ≥ α}})) = α; bracket width {:.3e}",
        solved.bracket_width
    )];
    if let Some(note) = harness::published_example_note(&expr, domain, &m) {
        notes.push(note);
    }
    Ok(json!({
        "f": expr.canonical(),
        "domain": [lo, hi],
        "measure": m.to_string(),
        "declared_shape": shape,
        "result": solved,
        "notes": notes,
    }))
}

fn curve_value(f: &str, lo: f64, hi: f64, measure: &str, points: usize) -> Result<Value, String> {
    let expr = parse_expr(f, "f")?;
    let domain = parse_domain(lo, hi)?;
    let m = parse_weight(measure)?;
    let shape = ineq::probe_shape(&expr, lo, hi);
    let (curve, solved) = sugeno::distribution_curve(
        &expr,
        domain,
        &m,
        points,
        &CheckConfig::default().level(shape),
    )
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "f": expr.canonical(),
        "domain": [lo, hi],
        "measure": m.to_string(),
        "points": curve,
        "value": solved.value,
        "alpha_star": solved.alpha_star,
    }))
}

fn check_value(
    id: &str,
    f: &str,
    phi: &str,
    bij: &str,
    inner: &str,
    a: f64,
    b: f64,
) -> Result<Value, String> {
    let expr = parse_expr(f, "f")?;
    let cfg = CheckConfig::default();
    let anchored = |name: &str| {
        if a == 0.0 {
            Ok(())
        } else {
            Err(format!("{name} integrates from 0; pass a = 0 and choose b"))
        }
    };
    let report = match id {
        "pk1" => {
            anchored("pk1")?;
            ineq::pk_case1(&expr, b, &cfg)
        }
        "pk2" => {
            anchored("pk2")?;
            ineq::pk_case2(&expr, b, &cfg)
        }
        "gpk" => {
            anchored("gpk")?;
            let map = parse_expr(if bij.is_empty() { "exp(x)" } else { bij }, "bij")?;
            let kind = match inner {
                "" | "riemann" => InnerKind::Riemann,
                "sugeno" => InnerKind::Sugeno,
                other => return Err(format!("unknown inner integral: {other}")),
            };
            ineq::generalized_pk(&expr, &map, kind, b, &cfg)
        }
        "hk" => {
            let kernel = parse_expr(if phi.is_empty() { "exp(x)" } else { phi }, "phi")?;
            ineq::hardy_knopp(&expr, &kernel, a, b, &cfg)
        }
        "jensen" => {
            anchored("jensen")?;
            ineq::jensen_probe(&expr, b, &cfg)
        }
        other => {
            return Err(format!(
                "unknown check: {other} (expected pk1, pk2, gpk, hk, or jensen)"
            ))
        }
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_value(&report).map_err(|e| e.to_string())
}

/// Integrate `f` over `[lo, hi]` with the named weight ("uniform",
/// "reciprocal", or "density:<expr>") and return the full report as JSON.
#[wasm_bindgen]
pub fn sugeno_report(f: &str, lo: f64, hi: f64, measure: &str, tol: f64) -> String {
    wrap(report_value(f, lo, hi, measure, tol))
}

/// Sample the level-measure distribution α ↦ m(A ∩ {f ≥ α}) on an α grid,
/// returning the plot table and the integral as JSON.
#[wasm_bindgen]
pub fn distribution_curve(f: &str, lo: f64, hi: f64, measure: &str, points: usize) -> String {
    wrap(curve_value(f, lo, hi, measure, points))
}

/// Run one inequality check (`pk1`, `pk2`, `gpk`, `hk`, or `jensen`) and
/// return its report as JSON. `phi` applies to hk, `bij` and `inner` to gpk;
/// pass "" to take the defaults.
#[wasm_bindgen]
pub fn check_inequality(
    id: &str,
    f: &str,
    phi: &str,
    bij: &str,
    inner: &str,
    a: f64,
    b: f64,
) -> String {
    wrap(check_value(id, f, phi, bij, inner, a, b))
}

#[wasm_bindgen]
pub fn library_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn parsed(text: &str) -> Value {
        serde_json::from_str(text).expect("output is JSON")
    }

    #[test]
    fn report_covers_the_worked_example() {
        let out = parsed(&sugeno_report("x/(2*exp(1))", 0.0, 5.0, "uniform", 1e-8));
        let value = out["result"]["value"].as_f64().unwrap();
        assert!((value - 5.0 / (1.0 + 2.0 * E)).abs() < 1e-6);
        assert_eq!(out["declared_shape"], "nondecreasing");
        let notes = out["notes"].to_string();
        assert!(notes.contains("0.781"), "published value quoted: {notes}");
    }

    #[test]
    fn curve_has_the_requested_grid() {
        let out = parsed(&distribution_curve("x/2", 0.0, 5.0, "uniform", 65));
        assert_eq!(out["points"].as_array().unwrap().len(), 65);
        assert!((out["value"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-6);
        assert_eq!(out["points"][0]["alpha"].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn reciprocal_curves_spell_out_infinities() {
        let out = parsed(&distribution_curve("x/2", 0.0, 4.0, "reciprocal", 33));
        assert_eq!(out["points"][0]["F_alpha"], "inf");
    }

    #[test]
    fn checks_dispatch_and_report() {
        let pk1 = parsed(&check_inequality("pk1", "x/2", "", "", "", 0.0, 5.0));
        assert_eq!(pk1["holds"], true);
        assert_eq!(pk1["id"], "pk1");

        let jensen = parsed(&check_inequality("jensen", "1/x", "", "", "", 0.0, 5.0));
        assert_eq!(jensen["holds"], false);

        let hk = parsed(&check_inequality("hk", "1", "exp(x)", "", "", 1.0, E * E));
        assert_eq!(hk["holds"], true);
        assert!((hk["rhs"].as_f64().unwrap() - 2.0 * E).abs() < 1e-6);

        let gpk = parsed(&check_inequality(
            "gpk", "x/2", "", "x^3", "riemann", 0.0, 5.0,
        ));
        assert_eq!(gpk["id"], "gpk1");
    }

    #[test]
    fn failures_come_back_as_json_errors() {
        for bad in [
            sugeno_report("x +* 2", 0.0, 5.0, "uniform", 1e-8),
            sugeno_report("x", 5.0, 0.0, "uniform", 1e-8),
            sugeno_report("x", 0.0, 5.0, "lebesgue", 1e-8),
            sugeno_report("x", 0.0, 5.0, "uniform", -1.0),
            distribution_curve("x", 0.0, 5.0, "uniform", 1),
            check_inequality("pk9", "x", "", "", "", 0.0, 5.0),
            check_inequality("pk1", "x", "", "", "", 1.0, 5.0),
        ] {
            let out = parsed(&bad);
            assert!(
                out["error"].is_string(),
                "expected an error object, got {out}"
            );
        }
    }
}
