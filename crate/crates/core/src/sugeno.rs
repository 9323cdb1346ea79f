//! The Sugeno integral and its distribution function.
//!
//! For `f ≥ 0` on a finite interval `A` with monotone measure `m`,
//!
//! ```text
//! SINT f = sup_{α ≥ 0} min(α, F(α)),    F(α) = m(A ∩ {f ≥ α})
//! ```
//!
//! `F` is nonincreasing, so the sup is the crossing point of `α` and `F(α)`:
//! the solver bisects the monotone predicate `F(α) ≥ α`. Starting bracket:
//! `H0 = min(m(A), sup f)` with each side replaced by the cap 10⁶ when
//! infinite; if the predicate still holds at `m(A)` the integral equals
//! `m(A)` exactly and is returned with a zero-width bracket.
//!
//! Performance comes from two things. Every integrand evaluation inside one
//! solve is memoized by the bit pattern of `x` — level-set scans at different
//! α revisit the same grid — and a declared monotone shape under the uniform
//! or reciprocal measure collapses the predicate to a single evaluation
//! (e.g. nondecreasing, uniform on [lo, hi]: `F(α) ≥ α ⟺ f(hi − α) ≥ α`).
//!
//! [`sugeno_oracle`] is the deliberately dumb cross-check: a dense value
//! table and a straight max of `min(α, F(α))` over an α-grid, sharing no
//! code path with the fixed-point solver.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::{Expr, OutOfDomain};
use crate::levelset::{self, LevelSetError, LevelSetOptions, Shape};
use crate::measure::{self, Interval, IntervalUnion, MeasureError, MeasureSpec};
use crate::quad;

/// Default width of the final α-bracket.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Ceiling for the α search when measure and supremum are both unbounded.
pub const ALPHA_CAP: f64 = 1e6;

/// A computed integral with its convergence certificate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SugenoValue {
    pub value: f64,
    /// Fixed-point estimate; equals `value`.
    pub alpha_star: f64,
    /// Distribution value at the bracket's lower end: `F(lo) ≥ lo` held.
    #[serde(rename = "F_at_lower", serialize_with = "ser_extended")]
    pub f_at_lower: f64,
    /// Distribution value at the bracket's upper end: `F(hi) ≥ hi` failed
    /// (except for an exact hit at `m(A)`, where both ends coincide).
    #[serde(rename = "F_at_upper", serialize_with = "ser_extended")]
    pub f_at_upper: f64,
    /// Distinct integrand evaluations (memoized hits not counted).
    pub evaluations: u64,
    pub bracket_width: f64,
}

/// JSON has no ±∞; reciprocal-measure distributions produce them
/// legitimately. Serialize non-finite values as the strings "inf"/"-inf"
/// rather than serde_json's silent null.
fn ser_extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SugenoError {
    #[error(
        "alpha search cap {cap} reached: domain measure and integrand supremum both exceed it"
    )]
    CapReached { cap: f64 },
    #[error("integrand has no value at any probe point in {domain}")]
    NoValidSamples { domain: Interval },
    #[error("tolerance must be positive and finite, got {tol}")]
    BadTolerance { tol: f64 },
    #[error("need at least 2 grid points, got {points}")]
    BadGrid { points: usize },
    #[error(transparent)]
    LevelSet(#[from] LevelSetError),
    #[error("measure evaluation failed: {0}")]
    Measure(#[from] MeasureError),
}

/// `F(α) = m(domain ∩ {f ≥ α})` for an expression integrand.
pub fn distribution(
    f: &Expr,
    domain: Interval,
    m: &MeasureSpec,
    alpha: f64,
    opts: &LevelSetOptions,
) -> Result<f64, SugenoError> {
    distribution_fn(|x| f.evaluate(x), domain, m, alpha, opts)
}

/// `F(α)` for a closure integrand. May legitimately be +∞ under the
/// reciprocal measure.
pub fn distribution_fn<F>(
    f: F,
    domain: Interval,
    m: &MeasureSpec,
    alpha: f64,
    opts: &LevelSetOptions,
) -> Result<f64, SugenoError>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let set = levelset::level_set_fn(&f, domain, alpha, opts)?;
    Ok(measure::measure(m, &set, quad::DEFAULT_TOL)?)
}

/// Sugeno integral of an expression; see [`sugeno_integral_fn`].
pub fn sugeno_integral(
    f: &Expr,
    domain: Interval,
    m: &MeasureSpec,
    tol: f64,
    opts: &LevelSetOptions,
) -> Result<SugenoValue, SugenoError> {
    sugeno_integral_fn(|x| f.evaluate(x), domain, m, tol, opts)
}

/// Sugeno integral of `f` over `domain` under measure `m`, with the final
/// α-bracket narrowed to `tol`.
pub fn sugeno_integral_fn<F>(
    f: F,
    domain: Interval,
    m: &MeasureSpec,
    tol: f64,
    opts: &LevelSetOptions,
) -> Result<SugenoValue, SugenoError>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SugenoError::BadTolerance { tol });
    }

    // Per-call memo keyed on the bit pattern of x. Scans at different α hit
    // the same grid nodes; for nested integrands (whose every evaluation is
    // itself a solve) this is the difference between seconds and hours.
    let cache: RefCell<HashMap<u64, Result<f64, OutOfDomain>>> = RefCell::new(HashMap::new());
    let distinct = Cell::new(0u64);
    let cf = |x: f64| -> Result<f64, OutOfDomain> {
        if let Some(hit) = cache.borrow().get(&x.to_bits()) {
            return hit.clone();
        }
        distinct.set(distinct.get() + 1);
        let v = f(x);
        cache.borrow_mut().insert(x.to_bits(), v.clone());
        v
    };

    // Density-measure quadrature budget: one order under the α tolerance so
    // measure error never decides a bisection step.
    let mtol = (tol * 0.1).min(quad::DEFAULT_TOL);
    let whole = IntervalUnion::normalize(vec![domain]);
    let mu_a = measure::measure(m, &whole, mtol)?;

    let (sup, any_valid) = probe_sup(&cf, domain, opts);
    if !any_valid {
        return Err(SugenoError::NoValidSamples { domain });
    }

    let dist = |alpha: f64| -> Result<f64, SugenoError> {
        let set = levelset::level_set_fn(cf, domain, alpha, opts)?;
        Ok(measure::measure(m, &set, mtol)?)
    };

    let finish = |value: f64, lo_a: f64, hi_a: f64| -> Result<SugenoValue, SugenoError> {
        Ok(SugenoValue {
            value,
            alpha_star: value,
            f_at_lower: dist(lo_a)?,
            f_at_upper: dist(hi_a)?,
            evaluations: distinct.get(),
            bracket_width: hi_a - lo_a,
        })
    };

    // min(α, F) is 0 at α = 0 and F is 0 grid-wise above the supremum:
    // a nonpositive integrand integrates to exactly 0.
    if sup <= 0.0 {
        return finish(0.0, 0.0, 0.0);
    }

    let mu_bound = if mu_a.is_finite() { mu_a } else { ALPHA_CAP };
    let sup_bound = if sup.is_finite() { sup } else { ALPHA_CAP };
    let h0 = mu_bound.min(sup_bound);
    if h0 >= ALPHA_CAP {
        return Err(SugenoError::CapReached { cap: ALPHA_CAP });
    }

    let pred = |alpha: f64| -> Result<bool, SugenoError> {
        if alpha <= 0.0 {
            return Ok(true);
        }
        if let Some(answer) = fast_pred(&cf, domain, m, alpha, opts.declared_shape) {
            return Ok(answer);
        }
        Ok(dist(alpha)? >= alpha)
    };

    // F(α) ≤ m(A) always, so no α beyond m(A) can satisfy F(α) ≥ α.
    let bound = mu_a.min(ALPHA_CAP);
    if bound <= 0.0 {
        return finish(0.0, 0.0, 0.0);
    }

    let (mut lo_a, mut hi_a);
    if pred(h0)? {
        // Expand upward until the predicate fails or the bound is reached.
        let mut l = h0;
        loop {
            if l >= bound {
                if !mu_a.is_finite() || mu_a >= ALPHA_CAP {
                    return Err(SugenoError::CapReached { cap: ALPHA_CAP });
                }
                // Exact hit: F(m(A)) ≥ m(A), so the integral is m(A) itself.
                return finish(mu_a, mu_a, mu_a);
            }
            let h = (if l > 0.0 { 2.0 * l } else { tol }).min(bound);
            if pred(h)? {
                l = h;
            } else {
                lo_a = l;
                hi_a = h;
                break;
            }
        }
    } else {
        lo_a = 0.0;
        hi_a = h0;
    }

    let max_iter = (((hi_a.max(tol) / tol).log2().ceil()) as i64 + 8).max(8) as u64;
    let mut iters = 0;
    while hi_a - lo_a > tol && iters < max_iter {
        let mid = 0.5 * (lo_a + hi_a);
        if mid <= lo_a || mid >= hi_a {
            break;
        }
        if pred(mid)? {
            lo_a = mid;
        } else {
            hi_a = mid;
        }
        iters += 1;
    }
    finish(0.5 * (lo_a + hi_a), lo_a, hi_a)
}

/// Supremum of f over the domain: endpoint probe under a declared shape
/// (the extreme value sits at a known end), dense grid otherwise. Returns
/// (sup, saw_any_valid_sample).
fn probe_sup<F>(cf: &F, domain: Interval, opts: &LevelSetOptions) -> (f64, bool)
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    const NUDGES: [f64; 5] = [0.0, 1e-15, 1e-12, 1e-9, 1e-6];
    let (lo, hi, w) = (domain.lo(), domain.hi(), domain.width());
    let (at, inward) = match opts.declared_shape {
        Shape::Nondecreasing => (hi, -1.0),
        Shape::Nonincreasing => (lo, 1.0),
        Shape::Unknown => (f64::NAN, 0.0),
    };
    if !at.is_nan() {
        for eps in NUDGES {
            if let Ok(v) = cf(at + inward * eps * w) {
                return (v, true);
            }
        }
        // Dead strip at the extreme end; fall back to the grid.
    }
    let n = opts.scan_points.max(2);
    let mut sup = f64::NEG_INFINITY;
    let mut any = false;
    for i in 0..=n {
        let x = if i == n {
            hi
        } else {
            lo + w * (i as f64) / (n as f64)
        };
        if let Ok(v) = cf(x) {
            sup = sup.max(v);
            any = true;
        }
    }
    (sup, any)
}

/// One-evaluation predicate `F(α) ≥ α` for declared monotone shapes under
/// closed-form measures. `None` means "no fast route here" (unsupported
/// combination, or the probe point had no value) and the caller falls back
/// to the generic level-set path.
fn fast_pred<F>(cf: &F, domain: Interval, m: &MeasureSpec, alpha: f64, shape: Shape) -> Option<bool>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let (lo, hi) = (domain.lo(), domain.hi());
    match (shape, m) {
        // F(α) = hi − x*(α) where x* is the left edge of the level set;
        // F(α) ≥ α ⟺ x* ≤ hi − α ⟺ f(hi − α) ≥ α.
        (Shape::Nondecreasing, MeasureSpec::Uniform) => {
            let y = hi - alpha;
            if y < lo {
                return Some(false);
            }
            cf(y).ok().map(|v| v >= alpha)
        }
        // Mirror: F(α) = x*(α) − lo with the level set [lo, x*].
        (Shape::Nonincreasing, MeasureSpec::Uniform) => {
            let y = lo + alpha;
            if y > hi {
                return Some(false);
            }
            cf(y).ok().map(|v| v >= alpha)
        }
        // F(α) = ln(hi / x*); F(α) ≥ α ⟺ x* ≤ hi·e^(−α).
        (Shape::Nondecreasing, MeasureSpec::Reciprocal) => {
            let y = hi * (-alpha).exp();
            if y < lo {
                return Some(false);
            }
            cf(y).ok().map(|v| v >= alpha)
        }
        // F(α) = ln(x* / lo); F(α) ≥ α ⟺ x* ≥ lo·e^α. With lo = 0 the
        // measure is infinite on any nonempty set, so membership anywhere
        // (checked just inside the max end) settles it.
        (Shape::Nonincreasing, MeasureSpec::Reciprocal) => {
            if lo == 0.0 {
                let x = lo + 1e-12 * domain.width();
                return cf(x).ok().map(|v| v >= alpha);
            }
            let y = lo * alpha.exp();
            if y > hi {
                return Some(false);
            }
            cf(y).ok().map(|v| v >= alpha)
        }
        _ => None,
    }
}

/// Brute-force cross-check: dense value table, α-grid of `grid_n` levels
/// from 0 to `min(m(A), sup f)` (capped), direct `max min(α, F(α))`.
/// Shares the level-set grid granularity but none of the solver's fixed
/// point logic. Out-of-domain samples are simply dropped, so the result is
/// a lower bound on the true supremum, within one α-step plus boundary
/// tolerance of it on grid-resolvable integrands.
pub fn sugeno_oracle(
    f: &Expr,
    domain: Interval,
    m: &MeasureSpec,
    grid_n: usize,
) -> Result<f64, SugenoError> {
    if grid_n < 2 {
        return Err(SugenoError::BadGrid { points: grid_n });
    }
    let n = levelset::DEFAULT_SCAN_POINTS;
    let (lo, hi, w) = (domain.lo(), domain.hi(), domain.width());
    let node_x = |i: usize| {
        if i == n {
            hi
        } else {
            lo + w * (i as f64) / (n as f64)
        }
    };
    let table: Vec<Option<f64>> = (0..=n).map(|i| f.evaluate(node_x(i)).ok()).collect();

    let sup = table
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |a, &v| a.max(v));
    if sup == f64::NEG_INFINITY {
        return Err(SugenoError::NoValidSamples { domain });
    }
    if sup <= 0.0 {
        return Ok(0.0);
    }
    let mu_a = measure::measure(
        m,
        &IntervalUnion::normalize(vec![domain]),
        quad::DEFAULT_TOL,
    )?;
    let mu_bound = if mu_a.is_finite() { mu_a } else { ALPHA_CAP };
    let sup_bound = if sup.is_finite() { sup } else { ALPHA_CAP };
    let alpha_max = mu_bound.min(sup_bound);
    if alpha_max >= ALPHA_CAP {
        return Err(SugenoError::CapReached { cap: ALPHA_CAP });
    }

    let member = |x: f64, alpha: f64| matches!(f.evaluate(x), Ok(v) if v >= alpha);
    let mut best = 0.0f64;
    for k in 0..grid_n {
        let alpha = alpha_max * k as f64 / (grid_n - 1) as f64;
        let mut pieces = Vec::new();
        let mut i = 0;
        while i <= n {
            if !table[i].is_some_and(|v| v >= alpha) {
                i += 1;
                continue;
            }
            let start = i;
            while i < n && table[i + 1].is_some_and(|v| v >= alpha) {
                i += 1;
            }
            let end = i;
            let left = if start == 0 {
                lo
            } else {
                let (mut out, mut inn) = (node_x(start - 1), node_x(start));
                while inn - out > levelset::DEFAULT_ROOT_TOL {
                    let mid = 0.5 * (out + inn);
                    if mid == out || mid == inn {
                        break;
                    }
                    if member(mid, alpha) {
                        inn = mid;
                    } else {
                        out = mid;
                    }
                }
                if start == 1 && table[0].is_none() && out == node_x(0) {
                    lo
                } else {
                    inn
                }
            };
            let right = if end == n {
                hi
            } else {
                let (mut out, mut inn) = (node_x(end + 1), node_x(end));
                while out - inn > levelset::DEFAULT_ROOT_TOL {
                    let mid = 0.5 * (inn + out);
                    if mid == out || mid == inn {
                        break;
                    }
                    if member(mid, alpha) {
                        inn = mid;
                    } else {
                        out = mid;
                    }
                }
                if end + 1 == n && table[n].is_none() && out == node_x(n) {
                    hi
                } else {
                    inn
                }
            };
            pieces.push(
                Interval::new(left.clamp(lo, hi), right.clamp(left, hi))
                    .expect("within a valid domain"),
            );
            i += 1;
        }
        let fa = measure::measure(m, &IntervalUnion::normalize(pieces), quad::DEFAULT_TOL)?;
        best = best.max(alpha.min(fa));
    }
    Ok(best)
}

/// One row of the distribution plot.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    pub alpha: f64,
    #[serde(rename = "F_alpha", serialize_with = "ser_extended")]
    pub f_alpha: f64,
    /// min(alpha, F(alpha)); always finite.
    pub min_alpha_f: f64,
}

/// Sample `F` on an even α-grid from 0 to the solver's initial bracket, and
/// solve the integral itself. Rows come back in strictly increasing α order.
pub fn distribution_curve(
    f: &Expr,
    domain: Interval,
    m: &MeasureSpec,
    points: usize,
    opts: &LevelSetOptions,
) -> Result<(Vec<CurvePoint>, SugenoValue), SugenoError> {
    if points < 2 {
        return Err(SugenoError::BadGrid { points });
    }
    let solved = sugeno_integral(f, domain, m, DEFAULT_TOL, opts)?;

    let cache: RefCell<HashMap<u64, Result<f64, OutOfDomain>>> = RefCell::new(HashMap::new());
    let cf = |x: f64| -> Result<f64, OutOfDomain> {
        if let Some(hit) = cache.borrow().get(&x.to_bits()) {
            return hit.clone();
        }
        let v = f.evaluate(x);
        cache.borrow_mut().insert(x.to_bits(), v.clone());
        v
    };

    let mu_a = measure::measure(
        m,
        &IntervalUnion::normalize(vec![domain]),
        quad::DEFAULT_TOL,
    )?;
    let (sup, _) = probe_sup(&cf, domain, opts);
    let mu_bound = if mu_a.is_finite() { mu_a } else { ALPHA_CAP };
    let sup_bound = if sup.is_finite() && sup > 0.0 {
        sup
    } else {
        ALPHA_CAP
    };
    let top = mu_bound.min(sup_bound).max(solved.value);

    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let alpha = top * i as f64 / (points - 1) as f64;
        let set = levelset::level_set_fn(cf, domain, alpha, opts)?;
        let f_alpha = measure::measure(m, &set, quad::DEFAULT_TOL)?;
        rows.push(CurvePoint {
            alpha,
            f_alpha,
            min_alpha_f: alpha.min(f_alpha),
        });
    }
    Ok((rows, solved))
}
