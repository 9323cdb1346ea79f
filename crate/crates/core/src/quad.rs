//! Adaptive quadrature for the classical (Riemann) integrals that appear on
//! the inequality left-hand sides.
//!
//! The base rule is a 15-point Gauss–Kronrod pair. It is an open rule in the
//! sense that matters here: interval endpoints are never evaluated, so
//! integrands may be undefined at the ends (ln t at 0, averages at 0).
//! Panels live in a max-heap keyed by the local error estimate |K15 − G7|;
//! the worst panel is split until the estimates sum below `tol`. That global
//! strategy, unlike per-panel relative splitting, converges on integrable
//! endpoint singularities (log and power) instead of stalling.
//!
//! [`ln_cumulative`] computes `∫_0^x ln f(t) dt` with geometric panels toward
//! 0, stopping once panel contributions decay geometrically; non-integrable
//! divergence (e.g. `ln f ~ 1/t`) is reported as an error with the partial
//! value, never returned as a number.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, OutOfDomain};

/// Default absolute tolerance. One order below the Sugeno solver's default,
/// so inner quadrature error never dominates a fixed-point bracket.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Hard cap on panels before declaring the integral divergence-suspected.
const MAX_PANELS: usize = 4096;

/// Geometric halvings toward 0 in [`ln_cumulative`] before giving up.
const MAX_HALVINGS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error(
        "integral appears divergent (partial value {partial} after {evaluations} evaluations)"
    )]
    DivergenceSuspected { partial: f64, evaluations: u64 },
    #[error("invalid integration bounds [{a}, {b}]: need finite a < b")]
    InvalidBounds { a: f64, b: f64 },
    #[error("tolerance must be a positive finite number, got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error(transparent)]
    Eval(#[from] OutOfDomain),
}

// 15-point Kronrod abscissae (positive half, descending); the 7-point Gauss
// subset sits at the odd indices. Standard QUADPACK values.
const XGK: [f64; 7] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One Gauss–Kronrod pass over [a, b]: Kronrod value and |K15 − G7|.
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64), OutOfDomain>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k15 = WGK[7] * fc;
    let mut g7 = WG[3] * fc;
    for (j, &xj) in XGK.iter().enumerate() {
        let dx = h * xj;
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        k15 += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            g7 += WG[j / 2] * (f1 + f2);
        }
    }
    k15 *= h;
    g7 *= h;
    Ok((k15, (k15 - g7).abs()))
}

/// Integrate an expression over [a, b]; see [`integrate_fn`].
pub fn integrate(f: &Expr, a: f64, b: f64, tol: f64) -> Result<QuadResult, QuadError> {
    integrate_fn(|x| f.evaluate(x), a, b, tol)
}

/// Globally adaptive quadrature of `f` over [a, b] to absolute tolerance
/// `tol`. Endpoints are never evaluated. On success the error estimate is
/// ≤ `tol`; if `MAX_PANELS` splits don't get there (or a panel value goes
/// non-finite) the integral is reported divergence-suspected with the
/// partial value so far.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadError::InvalidBounds { a, b });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QuadError::InvalidTolerance { tol });
    }

    let mut evaluations: u64 = 0;
    let pass = |lo: f64, hi: f64, n: &mut u64| -> Result<(f64, f64), OutOfDomain> {
        *n += 15;
        gk15(&f, lo, hi)
    };

    let (value, err) = pass(a, b, &mut evaluations)?;
    if !value.is_finite() {
        return Err(QuadError::DivergenceSuspected {
            partial: value,
            evaluations,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { err, a, b, value });
    let mut total_value = value;
    let mut total_err = err;

    loop {
        if total_err <= tol {
            // Re-sum over live panels: the running totals accumulate
            // cancellation drift across thousands of updates.
            let value = heap.iter().map(|p| p.value).sum();
            let abs_error_estimate = heap.iter().map(|p| p.err).sum();
            return Ok(QuadResult {
                value,
                abs_error_estimate,
                evaluations,
            });
        }
        if heap.len() >= MAX_PANELS {
            return Err(QuadError::DivergenceSuspected {
                partial: total_value,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Panel at machine width but error still above budget.
            return Err(QuadError::DivergenceSuspected {
                partial: total_value,
                evaluations,
            });
        }
        let (lv, le) = pass(worst.a, mid, &mut evaluations)?;
        let (rv, re) = pass(mid, worst.b, &mut evaluations)?;
        if !(lv.is_finite() && rv.is_finite()) {
            return Err(QuadError::DivergenceSuspected {
                partial: total_value,
                evaluations,
            });
        }
        total_value += lv + rv - worst.value;
        total_err = (total_err + le + re - worst.err).max(0.0);
        heap.push(Panel {
            err: le,
            a: worst.a,
            b: mid,
            value: lv,
        });
        heap.push(Panel {
            err: re,
            a: mid,
            b: worst.b,
            value: rv,
        });
    }
}

/// `∫_0^x ln f(t) dt` for `x > 0`, tolerant of an integrable log singularity
/// at 0 (e.g. f(t) = c·t^p).
///
/// Panels [x/2^(k+1), x/2^k] are integrated adaptively with geometrically
/// tightening budgets; the march toward 0 stops once a panel contributes
/// ≤ tol/8 in magnitude and ≤ 3/4 of the previous panel, at which point the
/// dropped tail is bounded by 3× the last contribution and folded into the
/// error estimate. If 64 halvings never reach that decay, the integral is
/// reported divergence-suspected (this is what `ln f ~ 1/t` produces: every
/// octave contributes the same mass).
pub fn ln_cumulative(f: &Expr, x: f64, tol: f64) -> Result<QuadResult, QuadError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(QuadError::InvalidBounds { a: 0.0, b: x });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QuadError::InvalidTolerance { tol });
    }
    let lnf = Expr::ln_of(f.clone());

    let mut total = 0.0f64;
    let mut total_err = 0.0;
    let mut evaluations: u64 = 0;
    let mut hi = x;
    let mut prev_mag: Option<f64> = None;
    for k in 0..MAX_HALVINGS {
        let lo = 0.5 * hi;
        // Per-panel budget: tol/4 · 2^-k sums to tol/2; floored at roundoff
        // scale so deep panels can't demand the impossible.
        let budget = (tol * 0.25 * 0.5f64.powi(k as i32)).max(5e-16 * (1.0 + total.abs()));
        let r = integrate_fn(|t| lnf.evaluate(t), lo, hi, budget)?;
        total += r.value;
        total_err += r.abs_error_estimate;
        evaluations += r.evaluations;

        let mag = r.value.abs();
        if let Some(prev) = prev_mag {
            if mag <= tol * 0.125 && mag <= 0.75 * prev {
                return Ok(QuadResult {
                    value: total,
                    abs_error_estimate: total_err + 3.0 * mag,
                    evaluations,
                });
            }
        }
        prev_mag = Some(mag);
        hi = lo;
    }
    Err(QuadError::DivergenceSuspected {
        partial: total,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn polynomial_is_exact_in_one_pass() {
        let r = integrate(&parse("x^2").unwrap(), 0.0, 1.0, 1e-9).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn reciprocal_away_from_zero() {
        let r = integrate(&parse("1/x").unwrap(), 1.0, 2.0, 1e-12).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-12);
        assert!(r.abs_error_estimate <= 1e-12);
    }

    #[test]
    fn log_singularity_at_zero_converges() {
        // ∫_0^1 ln t dt = -1. ln(0) is out of domain, so this passing also
        // proves the rule never touches the endpoints.
        let r = integrate(&parse("ln(x)").unwrap(), 0.0, 1.0, 1e-9).unwrap();
        assert!((r.value + 1.0).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn inverse_sqrt_singularity_converges() {
        // ∫_0^1 t^(-1/2) dt = 2.
        let r = integrate(&parse("x^-0.5").unwrap(), 0.0, 1.0, 1e-9).unwrap();
        assert!((r.value - 2.0).abs() < 2e-9, "got {}", r.value);
    }

    #[test]
    fn endpoints_are_never_evaluated() {
        let r = integrate_fn(
            |t| {
                assert!(
                    t > 0.0 && t < 1.0,
                    "endpoint or exterior point evaluated: {t}"
                );
                Ok(t.ln())
            },
            0.0,
            1.0,
            1e-9,
        )
        .unwrap();
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_integrable_pole_is_divergence_suspected() {
        match integrate(&parse("1/x").unwrap(), 0.0, 1.0, 1e-9) {
            Err(QuadError::DivergenceSuspected {
                partial,
                evaluations,
            }) => {
                assert!(partial > 0.0);
                assert!(evaluations > 1000);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn interior_out_of_domain_propagates() {
        let err = integrate(&parse("ln(x - 0.5)").unwrap(), 0.0, 1.0, 1e-9).unwrap_err();
        assert!(matches!(err, QuadError::Eval(_)));
    }

    #[test]
    fn rejects_bad_bounds_and_tolerance() {
        let f = parse("x").unwrap();
        assert!(matches!(
            integrate(&f, 1.0, 1.0, 1e-9),
            Err(QuadError::InvalidBounds { .. })
        ));
        assert!(matches!(
            integrate(&f, 2.0, 1.0, 1e-9),
            Err(QuadError::InvalidBounds { .. })
        ));
        assert!(matches!(
            integrate(&f, 0.0, f64::INFINITY, 1e-9),
            Err(QuadError::InvalidBounds { .. })
        ));
        assert!(matches!(
            integrate(&f, 0.0, 1.0, 0.0),
            Err(QuadError::InvalidTolerance { .. })
        ));
    }

    #[test]
    fn ln_cumulative_of_one_is_zero() {
        let r = ln_cumulative(&parse("1").unwrap(), 5.0, 1e-9).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn ln_cumulative_of_identity() {
        // ∫_0^1 ln t dt = -1.
        let r = ln_cumulative(&parse("x").unwrap(), 1.0, 1e-9).unwrap();
        assert!((r.value + 1.0).abs() < 1e-8, "got {}", r.value);
        assert!(r.abs_error_estimate < 1e-8);
    }

    #[test]
    fn ln_cumulative_of_half_identity() {
        // ∫_0^5 ln(t/2) dt = 5 ln(5/2) - 5.
        let want = 5.0 * (2.5f64).ln() - 5.0;
        let r = ln_cumulative(&parse("x/2").unwrap(), 5.0, 1e-9).unwrap();
        assert!((r.value - want).abs() < 1e-8, "got {} want {want}", r.value);
    }

    #[test]
    fn ln_cumulative_of_exponential() {
        // ln exp(t) = t, so the integral is x²/2; smooth case, no singularity.
        let r = ln_cumulative(&parse("exp(x)").unwrap(), 3.0, 1e-9).unwrap();
        assert!((r.value - 4.5).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn ln_cumulative_flags_non_integrable_divergence() {
        // ln exp(1/t) = 1/t: every octave toward 0 adds ln 2.
        match ln_cumulative(&parse("exp(1/x)").unwrap(), 5.0, 1e-9) {
            Err(QuadError::DivergenceSuspected { partial, .. }) => {
                assert!(partial > 10.0 * std::f64::consts::LN_2);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn ln_cumulative_rejects_nonpositive_upper_limit() {
        let f = parse("x").unwrap();
        assert!(matches!(
            ln_cumulative(&f, 0.0, 1e-9),
            Err(QuadError::InvalidBounds { .. })
        ));
        assert!(matches!(
            ln_cumulative(&f, -1.0, 1e-9),
            Err(QuadError::InvalidBounds { .. })
        ));
    }
}
