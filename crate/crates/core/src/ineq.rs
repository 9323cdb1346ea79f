//! Numeric checks of Hardy-type inequalities for Sugeno integrals.
//!
//! Six checks, all reporting lhs, rhs, slack = rhs − lhs, and a verdict
//! `holds = slack ≥ −violation_tol`:
//!
//! - `pk1`: SINT of the running geometric mean exp((1/x)∫₀ˣ ln f dt) against
//!   SINT f over [0, b], uniform measure, **no factor e** on the right —
//!   the strong form. The e-scaled variant follows a fortiori and is noted.
//! - `pk2`: same shape but the inner average is itself a Sugeno integral of
//!   ln f, and the right side carries the factor e.
//! - `gpk1`/`gpk2`: the generalized form with an arbitrary strictly monotone
//!   map φ in place of exp: φ((1/x)·I(φ⁻¹∘f)) against e·SINT f, where I is
//!   a Riemann (`gpk1`) or Sugeno (`gpk2`) integral. φ⁻¹ is computed
//!   numerically, so any strictly monotone expression works as the map.
//! - `hk`: the Hardy–Knopp form with a convex kernel φ: outer integrals are
//!   taken with the reciprocal (dx/x) measure over [a, b] with a > 0, with
//!   φ((1/x)·SINT₍₀,ₓ₎f) on the left and e·SINT φ∘f on the right.
//! - `jensen_probe`: exp(SINT g) against SINT exp(g) — the composition step
//!   the other proofs silently rely on. It is exploratory: plenty of
//!   ordinary g violate it, and a negative slack here is data about that
//!   step, not a solver defect.
//!
//! Every hypothesis the statements rely on (monotone f, positive f,
//! nonnegative inner integrand, strictly monotone map, positive convex
//! kernel) is probed numerically and reported as a flag; checks still run
//! when a hypothesis fails, because watching an inequality break outside
//! its hypotheses is half the point.

use std::f64::consts::E;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, OutOfDomain};
use crate::levelset::{LevelSetOptions, Shape, DEFAULT_ROOT_TOL, DEFAULT_SCAN_POINTS};
use crate::measure::{Interval, MeasureError, MeasureSpec};
use crate::quad::{self, QuadError};
use crate::sugeno::{self, SugenoError};

pub const DEFAULT_VIOLATION_TOL: f64 = 1e-6;

/// Which inequality a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IneqId {
    Pk1,
    Pk2,
    Gpk1,
    Gpk2,
    Hk,
    JensenProbe,
}

impl fmt::Display for IneqId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IneqId::Pk1 => "pk1",
            IneqId::Pk2 => "pk2",
            IneqId::Gpk1 => "gpk1",
            IneqId::Gpk2 => "gpk2",
            IneqId::Hk => "hk",
            IneqId::JensenProbe => "jensen_probe",
        };
        out.write_str(s)
    }
}

/// One numerically probed hypothesis of the statement being checked.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisFlag {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IneqReport {
    pub id: IneqId,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs; negative means violated.
    pub slack: f64,
    /// slack ≥ −violation_tol.
    pub holds: bool,
    pub hypothesis_flags: Vec<HypothesisFlag>,
    pub notes: String,
}

/// Tolerances shared by every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    /// α-bracket width for every Sugeno solve.
    pub solver_tol: f64,
    /// Absolute budget for inner Riemann integrals.
    pub quad_tol: f64,
    /// How negative the slack may be before `holds` flips off.
    pub violation_tol: f64,
    pub scan_points: usize,
    pub root_tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            solver_tol: sugeno::DEFAULT_TOL,
            quad_tol: quad::DEFAULT_TOL,
            violation_tol: DEFAULT_VIOLATION_TOL,
            scan_points: DEFAULT_SCAN_POINTS,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }
}

impl CheckConfig {
    pub fn level(&self, shape: Shape) -> LevelSetOptions {
        LevelSetOptions {
            scan_points: self.scan_points,
            root_tol: self.root_tol,
            declared_shape: shape,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IneqError {
    #[error("invalid domain: {detail}")]
    InvalidDomain { detail: String },
    #[error("map is not strictly monotone: {detail}")]
    NotMonotone { detail: String },
    #[error(transparent)]
    Sugeno(#[from] SugenoError),
    #[error("inner integral failed: {0}")]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Eval(#[from] OutOfDomain),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

fn flag(name: &str, ok: bool) -> HypothesisFlag {
    HypothesisFlag {
        name: name.to_string(),
        ok,
    }
}

fn mk(
    id: IneqId,
    lhs: f64,
    rhs: f64,
    hypothesis_flags: Vec<HypothesisFlag>,
    notes: String,
    cfg: &CheckConfig,
) -> IneqReport {
    let slack = rhs - lhs;
    IneqReport {
        id,
        lhs,
        rhs,
        slack,
        holds: slack >= -cfg.violation_tol,
        hypothesis_flags,
        notes,
    }
}

fn upper_domain(b: f64) -> Result<Interval, IneqError> {
    if !(b.is_finite() && b > 0.0) {
        return Err(IneqError::InvalidDomain {
            detail: format!("need finite b > 0, got {b}"),
        });
    }
    Ok(Interval::new(0.0, b).expect("validated"))
}

const PROBE_POINTS: usize = 1024;

/// Classify monotonicity by dense sampling, skipping points with no value.
/// Infinite values participate in the ordering; the numerical slack comes
/// from the finite ones.
pub fn probe_shape_fn<F>(f: &F, lo: f64, hi: f64) -> Shape
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let mut vals = Vec::with_capacity(PROBE_POINTS + 1);
    let mut scale = 0.0f64;
    for i in 0..=PROBE_POINTS {
        let x = lo + (hi - lo) * i as f64 / PROBE_POINTS as f64;
        if let Ok(v) = f(x) {
            if v.is_finite() {
                scale = scale.max(v.abs());
            }
            vals.push(v);
        }
    }
    let slack = 1e-12 * (1.0 + scale);
    let mut up = true;
    let mut down = true;
    for w in vals.windows(2) {
        if w[1] < w[0] - slack {
            up = false;
        }
        if w[1] > w[0] + slack {
            down = false;
        }
    }
    match (up, down, vals.len() >= 2) {
        (true, _, true) => Shape::Nondecreasing,
        (_, true, true) => Shape::Nonincreasing,
        _ => Shape::Unknown,
    }
}

pub fn probe_shape(f: &Expr, lo: f64, hi: f64) -> Shape {
    probe_shape_fn(&|x| f.evaluate(x), lo, hi)
}

/// (min, max) over valid finite-or-infinite samples; None if nothing has a value.
fn probe_range_fn<F>(f: &F, lo: f64, hi: f64) -> Option<(f64, f64)>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut any = false;
    for i in 0..=PROBE_POINTS {
        let x = lo + (hi - lo) * i as f64 / PROBE_POINTS as f64;
        if let Ok(v) = f(x) {
            min = min.min(v);
            max = max.max(v);
            any = true;
        }
    }
    any.then_some((min, max))
}

/// Describe f(b) for the notes field.
fn tail_note(f: &Expr, b: f64) -> String {
    match f.evaluate(b) {
        Ok(v) => format!("{v}"),
        Err(_) => "undefined".to_string(),
    }
}

/// Wrap an inner-computation failure as an out-of-domain point so the outer
/// level-set machinery classifies it like any other dead sample. Persistent
/// failures become positive-measure dead regions and error out loudly;
/// preflight checks below surface the genuine cause first.
fn inner_dead(context: &Expr, x: f64, what: &'static str) -> OutOfDomain {
    OutOfDomain {
        subexpr: format!("inner({})", context.canonical()),
        x,
        what,
    }
}

/// Geometric-mean comparison with a plain Riemann inner integral.
///
/// lhs = SINT over [0, b] of exp((1/x)∫₀ˣ ln f(t) dt), rhs = SINT f,
/// both under the uniform measure. Checked without the factor e (the
/// strong displayed form); a weaker e-scaled restatement also circulates
/// and follows a fortiori, which the notes record.
pub fn pk_case1(f: &Expr, b: f64, cfg: &CheckConfig) -> Result<IneqReport, IneqError> {
    let domain = upper_domain(b)?;
    let shape = probe_shape(f, 0.0, b);
    let f_positive = probe_range_fn(&|x| f.evaluate(x), 0.0, b)
        .map(|(min, _)| min > 0.0)
        .unwrap_or(false);

    // Surface systematic inner-integral failures with their real cause
    // before the solver can only see them as dead samples.
    for px in [0.25 * b, 0.5 * b, 0.75 * b] {
        quad::ln_cumulative(f, px, cfg.quad_tol)?;
    }

    let geo_mean = |x: f64| -> Result<f64, OutOfDomain> {
        if x <= 0.0 {
            return Err(inner_dead(f, x, "average over an empty interval"));
        }
        match quad::ln_cumulative(f, x, cfg.quad_tol) {
            Ok(r) => Ok((r.value / x).exp()),
            Err(QuadError::Eval(e)) => Err(e),
            Err(_) => Err(inner_dead(f, x, "log-average did not converge")),
        }
    };
    // Averaging a monotone function over [0, x] and exponentiating keeps its
    // direction, so the integrand inherits f's probed shape.
    let lhs = sugeno::sugeno_integral_fn(
        geo_mean,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(shape),
    )?;
    let rhs = sugeno::sugeno_integral(
        f,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(shape),
    )?;

    let notes = format!(
        "strong form: no factor e on the right side (an e-scaled restatement also circulates; \
         it follows a fortiori whenever this one holds); f({b}) = {}",
        tail_note(f, b)
    );
    Ok(mk(
        IneqId::Pk1,
        lhs.value,
        rhs.value,
        vec![
            flag("f_nondecreasing", shape == Shape::Nondecreasing),
            flag("f_positive", f_positive),
        ],
        notes,
        cfg,
    ))
}

/// Geometric-mean comparison with a Sugeno inner integral.
///
/// lhs = SINT over [0, b] of exp((1/x)·SINT₍₀,ₓ₎ ln f), rhs = e·SINT f.
pub fn pk_case2(f: &Expr, b: f64, cfg: &CheckConfig) -> Result<IneqReport, IneqError> {
    let domain = upper_domain(b)?;
    let shape = probe_shape(f, 0.0, b);
    let f_positive = probe_range_fn(&|x| f.evaluate(x), 0.0, b)
        .map(|(min, _)| min > 0.0)
        .unwrap_or(false);

    let lnf = Expr::ln_of(f.clone());
    let inner_shape = probe_shape(&lnf, 0.0, b);
    // The inner integral's integrand should be nonnegative (f ≥ 1) for the
    // fuzzy integral to be on its home turf; report when it is not.
    let inner_nonneg = probe_range_fn(&|x| lnf.evaluate(x), 0.0, b)
        .map(|(min, _)| min >= -1e-9)
        .unwrap_or(false);

    for px in [0.25 * b, 0.5 * b, 0.75 * b] {
        let d = Interval::new(0.0, px).expect("positive");
        sugeno::sugeno_integral(
            &lnf,
            d,
            &MeasureSpec::Uniform,
            cfg.solver_tol,
            &cfg.level(inner_shape),
        )?;
    }

    let geo_mean = |x: f64| -> Result<f64, OutOfDomain> {
        if x <= 0.0 {
            return Err(inner_dead(f, x, "average over an empty interval"));
        }
        let d = Interval::new(0.0, x).expect("positive");
        let inner = sugeno::sugeno_integral(
            &lnf,
            d,
            &MeasureSpec::Uniform,
            cfg.solver_tol,
            &cfg.level(inner_shape),
        )
        .map_err(|_| inner_dead(f, x, "inner fuzzy integral failed"))?;
        Ok((inner.value / x).exp())
    };
    // No clean monotonicity argument for x ↦ exp(SINT/x); probe it.
    let lhs_shape = probe_shape_fn(&geo_mean, 0.0, b);
    let lhs = sugeno::sugeno_integral_fn(
        geo_mean,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(lhs_shape),
    )?;
    let rhs_sv = sugeno::sugeno_integral(
        f,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(shape),
    )?;
    let rhs = E * rhs_sv.value;

    let mut notes = format!(
        "right side carries the factor e: q = e·(SINT f) = {rhs}; f({b}) = {}",
        tail_note(f, b)
    );
    if !inner_nonneg {
        notes.push_str(
            "; ln f is negative somewhere, so the inner fuzzy integral runs beyond its \
             nonnegative-integrand home domain",
        );
    }
    Ok(mk(
        IneqId::Pk2,
        lhs.value,
        rhs,
        vec![
            flag("f_positive", f_positive),
            flag("inner_integrand_nonnegative", inner_nonneg),
        ],
        notes,
        cfg,
    ))
}

/// Which flavor of inner integral the generalized form uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerKind {
    Riemann,
    Sugeno,
}

/// Strict direction of the map by dense sampling on a wide window; points
/// with no value (e.g. ln on negatives) are skipped.
fn map_direction(map: &Expr) -> Result<bool, IneqError> {
    const N: usize = 512;
    let mut vals = Vec::new();
    for i in 0..=N {
        let u = -16.0 + 32.0 * i as f64 / N as f64;
        if let Ok(v) = map.evaluate(u) {
            vals.push(v);
        }
    }
    if vals.len() < 8 {
        return Err(IneqError::NotMonotone {
            detail: "map has a value at too few probe points to classify".to_string(),
        });
    }
    let increasing = vals.windows(2).all(|w| w[1] > w[0]);
    let decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    match (increasing, decreasing) {
        (true, false) => Ok(true),
        (false, true) => Ok(false),
        _ => Err(IneqError::NotMonotone {
            detail: "probed values are not strictly ordered".to_string(),
        }),
    }
}

/// Numeric inverse of a strictly monotone map: expand a bracket across the
/// reals (shrinking the stride at domain edges), then bisect.
fn invert_map(map: &Expr, increasing: bool, root_tol: f64, v: f64) -> Result<f64, OutOfDomain> {
    let residual = |u: f64| map.evaluate(u).map(|w| w - v);
    let dead = |what: &'static str| OutOfDomain {
        subexpr: map.canonical(),
        x: v,
        what,
    };

    // An unbounded monotone map reaches ±∞ only in the limit; hand back the
    // matching infinite endpoint when the map confirms it, so integrands
    // that overflow still produce usable (infinite) samples.
    if v.is_infinite() {
        let u = if (v > 0.0) == increasing {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        return match map.evaluate(u) {
            Ok(w) if w == v => Ok(u),
            _ => Err(dead("no inverse: the map never reaches this value")),
        };
    }

    const SEEDS: [f64; 8] = [0.0, 1.0, -1.0, 0.5, 2.0, -2.0, 8.0, -8.0];
    let (u0, g0) = SEEDS
        .iter()
        .find_map(|&u| residual(u).ok().map(|g| (u, g)))
        .ok_or_else(|| dead("no starting point inside the map's domain"))?;
    if g0 == 0.0 {
        return Ok(u0);
    }
    // Walk u in the direction that moves map(u) toward v.
    let dir = if (g0 < 0.0) == increasing { 1.0 } else { -1.0 };
    let mut same = u0;
    let mut step = 1.0;
    let mut other = None;
    for _ in 0..400 {
        let cand = same + dir * step;
        match residual(cand) {
            Ok(g) if (g > 0.0) == (g0 > 0.0) => {
                same = cand;
                step *= 2.0;
            }
            Ok(_) => {
                other = Some(cand);
                break;
            }
            Err(_) => {
                step *= 0.5;
                if step < 1e-300 {
                    break;
                }
            }
        }
    }
    let mut hi = other.ok_or_else(|| dead("no inverse: the map never reaches this value"))?;
    let mut lo = same;
    for _ in 0..300 {
        if (hi - lo).abs() <= root_tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        match residual(mid) {
            Ok(g) if (g > 0.0) == (g0 > 0.0) => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Generalized geometric-mean comparison: a strictly monotone map φ replaces
/// exp, the inner integral of φ⁻¹∘f over [0, x] is Riemann (`gpk1`) or
/// Sugeno (`gpk2`), and the right side is e·SINT f. The inner differential
/// is read as dt (integrating in t over [0, x]).
pub fn generalized_pk(
    f: &Expr,
    map: &Expr,
    inner: InnerKind,
    b: f64,
    cfg: &CheckConfig,
) -> Result<IneqReport, IneqError> {
    let domain = upper_domain(b)?;
    let shape = probe_shape(f, 0.0, b);
    let increasing = map_direction(map)?;

    let composed = |t: f64| -> Result<f64, OutOfDomain> {
        invert_map(map, increasing, cfg.root_tol, f.evaluate(t)?)
    };
    // φ⁻¹ runs in the same direction as φ, so the composition's shape is
    // f's, flipped when the map decreases.
    let comp_shape = match (shape, increasing) {
        (Shape::Nondecreasing, true) | (Shape::Nonincreasing, false) => Shape::Nondecreasing,
        (Shape::Nonincreasing, true) | (Shape::Nondecreasing, false) => Shape::Nonincreasing,
        _ => Shape::Unknown,
    };
    let comp_nonneg = probe_range_fn(&composed, 0.0, b)
        .map(|(min, _)| min >= -1e-9)
        .unwrap_or(false);
    if probe_range_fn(&composed, 0.0, b).is_none() {
        return Err(IneqError::NotMonotone {
            detail: "φ⁻¹∘f has no value anywhere on the domain".to_string(),
        });
    }

    // Preflight one representative inner integral with real error reporting.
    match inner {
        InnerKind::Riemann => {
            quad::integrate_fn(composed, 0.0, 0.5 * b, cfg.quad_tol)?;
        }
        InnerKind::Sugeno => {
            let d = Interval::new(0.0, 0.5 * b).expect("positive");
            sugeno::sugeno_integral_fn(
                composed,
                d,
                &MeasureSpec::Uniform,
                cfg.solver_tol,
                &cfg.level(comp_shape),
            )?;
        }
    }

    let mapped_mean = |x: f64| -> Result<f64, OutOfDomain> {
        if x <= 0.0 {
            return Err(inner_dead(f, x, "average over an empty interval"));
        }
        let avg = match inner {
            InnerKind::Riemann => match quad::integrate_fn(composed, 0.0, x, cfg.quad_tol) {
                Ok(r) => r.value / x,
                Err(QuadError::Eval(e)) => return Err(e),
                Err(_) => return Err(inner_dead(f, x, "inner integral did not converge")),
            },
            InnerKind::Sugeno => {
                let d = Interval::new(0.0, x).expect("positive");
                sugeno::sugeno_integral_fn(
                    composed,
                    d,
                    &MeasureSpec::Uniform,
                    cfg.solver_tol,
                    &cfg.level(comp_shape),
                )
                .map_err(|_| inner_dead(f, x, "inner fuzzy integral failed"))?
                .value
                    / x
            }
        };
        map.evaluate(avg)
    };
    let lhs_shape = probe_shape_fn(&mapped_mean, 0.0, b);
    let lhs = sugeno::sugeno_integral_fn(
        mapped_mean,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(lhs_shape),
    )?;
    let rhs_sv = sugeno::sugeno_integral(
        f,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(shape),
    )?;
    let rhs = E * rhs_sv.value;

    let id = match inner {
        InnerKind::Riemann => IneqId::Gpk1,
        InnerKind::Sugeno => IneqId::Gpk2,
    };
    let notes = format!(
        "inner differential read as dt; map inverted numerically by bracketed bisection over \
         the reals ({} inner integral); f({b}) = {}",
        match inner {
            InnerKind::Riemann => "Riemann",
            InnerKind::Sugeno => "fuzzy",
        },
        tail_note(f, b)
    );
    Ok(mk(
        id,
        lhs.value,
        rhs,
        vec![
            flag("map_strictly_monotone", true),
            flag("f_nondecreasing", shape == Shape::Nondecreasing),
            flag("inner_integrand_nonnegative", comp_nonneg),
        ],
        notes,
        cfg,
    ))
}

/// Hardy–Knopp form with convex kernel φ and the reciprocal measure:
/// SINT over [a, b] of φ((1/x)·SINT₍₀,ₓ₎ f) against e·SINT φ∘f, both outer
/// integrals under dx/x. The ideal statement ranges over (0, ∞); the check
/// runs on [a, b] and records the truncation tail in the notes.
pub fn hardy_knopp(
    f: &Expr,
    phi: &Expr,
    a: f64,
    b: f64,
    cfg: &CheckConfig,
) -> Result<IneqReport, IneqError> {
    if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
        return Err(IneqError::InvalidDomain {
            detail: format!("need finite 0 < a < b, got a = {a}, b = {b}"),
        });
    }
    let outer = Interval::new(a, b).expect("validated");
    let shape = probe_shape(f, 0.0, b);
    let f_nonneg = probe_range_fn(&|x| f.evaluate(x), 0.0, b)
        .map(|(min, _)| min >= -1e-9)
        .unwrap_or(false);

    let inner_value = |x: f64| -> Result<f64, OutOfDomain> {
        let d = Interval::new(0.0, x).expect("positive");
        sugeno::sugeno_integral(
            f,
            d,
            &MeasureSpec::Uniform,
            cfg.solver_tol,
            &cfg.level(shape),
        )
        .map(|sv| sv.value)
        .map_err(|_| inner_dead(f, x, "inner fuzzy integral failed"))
    };
    // Preflight with real error reporting.
    {
        let d = Interval::new(0.0, 0.5 * (a + b)).expect("positive");
        sugeno::sugeno_integral(
            f,
            d,
            &MeasureSpec::Uniform,
            cfg.solver_tol,
            &cfg.level(shape),
        )?;
    }

    let kernel_mean = |x: f64| -> Result<f64, OutOfDomain> {
        if x <= 0.0 {
            return Err(inner_dead(f, x, "average over an empty interval"));
        }
        phi.evaluate(inner_value(x)? / x)
    };
    let lhs_shape = probe_shape_fn(&kernel_mean, a, b);
    let lhs = sugeno::sugeno_integral_fn(
        kernel_mean,
        outer,
        &MeasureSpec::Reciprocal,
        cfg.solver_tol,
        &cfg.level(lhs_shape),
    )?;

    let kernel_of_f = |x: f64| -> Result<f64, OutOfDomain> { phi.evaluate(f.evaluate(x)?) };
    let rhs_shape = probe_shape_fn(&kernel_of_f, a, b);
    let rhs_sv = sugeno::sugeno_integral_fn(
        kernel_of_f,
        outer,
        &MeasureSpec::Reciprocal,
        cfg.solver_tol,
        &cfg.level(rhs_shape),
    )?;
    let rhs = E * rhs_sv.value;

    // φ's hypotheses (positive, convex) are probed on the range of arguments
    // it actually receives from both sides.
    let mut arg_min = f64::INFINITY;
    let mut arg_max = f64::NEG_INFINITY;
    for i in 0..=32 {
        let x = a + (b - a) * i as f64 / 32.0;
        if let Ok(v) = inner_value(x).map(|iv| iv / x) {
            if v.is_finite() {
                arg_min = arg_min.min(v);
                arg_max = arg_max.max(v);
            }
        }
        if let Ok(v) = f.evaluate(x) {
            if v.is_finite() {
                arg_min = arg_min.min(v);
                arg_max = arg_max.max(v);
            }
        }
    }
    let (phi_positive, phi_convex) = probe_kernel(phi, arg_min, arg_max);

    let notes = format!(
        "outer integrals weighted by 1/x on [{a}, {b}]; the ideal statement ranges over (0, ∞) \
         — truncation tail f({b}) = {}; kernel probed on [{arg_min}, {arg_max}]",
        tail_note(f, b)
    );
    Ok(mk(
        IneqId::Hk,
        lhs.value,
        rhs,
        vec![
            flag("phi_positive", phi_positive),
            flag("phi_convex", phi_convex),
            flag("f_nonnegative", f_nonneg),
        ],
        notes,
        cfg,
    ))
}

/// Positivity and discrete convexity of the kernel over [lo, hi].
fn probe_kernel(phi: &Expr, lo: f64, hi: f64) -> (bool, bool) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (false, false);
    }
    let (lo, hi) = if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    };
    const N: usize = 64;
    let mut vals = [0.0f64; N + 1];
    let mut scale = 0.0f64;
    for (i, v) in vals.iter_mut().enumerate() {
        let u = lo + (hi - lo) * i as f64 / N as f64;
        match phi.evaluate(u) {
            Ok(w) => {
                *v = w;
                scale = scale.max(w.abs());
            }
            // The kernel must be defined on the whole argument range.
            Err(_) => return (false, false),
        }
    }
    let positive = vals.iter().all(|&v| v > 0.0);
    let slack = 1e-9 * (1.0 + scale);
    let convex = vals.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -slack);
    (positive, convex)
}

/// Exploratory probe of the composition step exp(SINT g) ≤ SINT exp(g) over
/// [0, x], uniform measure. Violations here are data about that inference,
/// not a defect: the step fails for many ordinary g.
pub fn jensen_probe(g: &Expr, x: f64, cfg: &CheckConfig) -> Result<IneqReport, IneqError> {
    let domain = upper_domain(x)?;
    let shape = probe_shape(g, 0.0, x);
    let g_nonneg = probe_range_fn(&|t| g.evaluate(t), 0.0, x)
        .map(|(min, _)| min >= -1e-9)
        .unwrap_or(false);

    let inner = sugeno::sugeno_integral(
        g,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(shape),
    )?;
    let lhs = inner.value.exp();

    let eg = Expr::exp_of(g.clone());
    // exp is increasing, so exp∘g keeps g's direction.
    let rhs_sv = sugeno::sugeno_integral(
        &eg,
        domain,
        &MeasureSpec::Uniform,
        cfg.solver_tol,
        &cfg.level(shape),
    )?;

    let notes = format!(
        "exploratory: exp(SINT g) vs SINT exp(g); SINT g = {}; a negative slack is data about \
         the composition step, not a solver defect",
        inner.value
    );
    Ok(mk(
        IneqId::JensenProbe,
        lhs,
        rhs_sv.value,
        vec![flag("g_nonnegative", g_nonneg)],
        notes,
        cfg,
    ))
}
