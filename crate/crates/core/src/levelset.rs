//! α-level sets `{x ∈ [lo, hi] : f(x) ≥ α}` as interval unions.
//!
//! Two strategies:
//!
//! - **Declared monotone shape**: probe the endpoints (nudging inward when an
//!   endpoint itself is out of domain) and bisect the single crossing. One
//!   boundary, ~40 evaluations.
//! - **Unknown shape**: sample `scan_points` panels, classify each node as
//!   in / out / out-of-domain, then refine every run boundary by bisection to
//!   `root_tol`. Features narrower than one panel can be missed; that grid
//!   granularity is the documented contract, and the brute-force oracle in
//!   [`crate::sugeno`] shares it by construction.
//!
//! Out-of-domain handling: an isolated bad sample is treated as "out" (it
//! carries no measure), but two adjacent bad samples mean the integrand is
//! undefined on a positive-measure region — a hard error. When a *domain
//! endpoint* is out of domain and bisection never finds an in-domain "out"
//! point beyond the boundary, the boundary snaps to that endpoint: the level
//! set of e.g. exp(1/x) at 0 reaches the endpoint in closure, and the
//! endpoint itself carries no measure. Under a declared shape the same
//! reasoning extends membership across the unprobeable sliver, because
//! monotonicity bounds f there by its value at the nearest probe point.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, OutOfDomain};
use crate::measure::{Interval, IntervalUnion};

pub const DEFAULT_SCAN_POINTS: usize = 4096;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Monotonicity promise about the integrand, used to pick the strategy.
/// A wrong declaration silently yields the level set of a different
/// function; callers that guess shapes must probe first (the inequality
/// checkers do).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Unknown,
    Nondecreasing,
    Nonincreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSetOptions {
    /// Number of scan panels (so scan_points + 1 nodes).
    pub scan_points: usize,
    /// Absolute width at which boundary bisection stops.
    pub root_tol: f64,
    pub declared_shape: Shape,
}

impl Default for LevelSetOptions {
    fn default() -> Self {
        LevelSetOptions {
            scan_points: DEFAULT_SCAN_POINTS,
            root_tol: DEFAULT_ROOT_TOL,
            declared_shape: Shape::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevelSetError {
    #[error("integrand has no value on [{from}, {to}], a positive-measure region")]
    OutOfDomainRegion { from: f64, to: f64 },
    #[error("level must be a finite nonnegative number, got {alpha}")]
    BadLevel { alpha: f64 },
    #[error("options out of range: scan_points >= 2 and root_tol > 0 required")]
    BadOptions,
    #[error(transparent)]
    Eval(#[from] OutOfDomain),
}

/// Level set of an expression; see [`level_set_fn`].
pub fn level_set(
    f: &Expr,
    domain: Interval,
    alpha: f64,
    opts: &LevelSetOptions,
) -> Result<IntervalUnion, LevelSetError> {
    level_set_fn(|x| f.evaluate(x), domain, alpha, opts)
}

/// `{x ∈ domain : f(x) ≥ alpha}` as a normalized interval union, with
/// boundaries located to `root_tol`.
pub fn level_set_fn<F>(
    f: F,
    domain: Interval,
    alpha: f64,
    opts: &LevelSetOptions,
) -> Result<IntervalUnion, LevelSetError>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(LevelSetError::BadLevel { alpha });
    }
    if opts.scan_points < 2 || !(opts.root_tol > 0.0 && opts.root_tol.is_finite()) {
        return Err(LevelSetError::BadOptions);
    }
    if domain.width() == 0.0 {
        let member = matches!(f(domain.lo()), Ok(v) if v >= alpha);
        return Ok(if member {
            IntervalUnion::normalize(vec![domain])
        } else {
            IntervalUnion::empty()
        });
    }
    match opts.declared_shape {
        Shape::Unknown => scan_path(&f, domain, alpha, opts),
        shape => monotone_path(&f, domain, alpha, shape, opts),
    }
}

/// Evaluate at an endpoint, nudging inward by growing fractions of the width
/// until the function has a value. Returns the point actually used.
fn probe_inward<F>(f: &F, at: f64, inward: f64, width: f64) -> Result<(f64, f64), OutOfDomain>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    const NUDGES: [f64; 5] = [0.0, 1e-15, 1e-12, 1e-9, 1e-6];
    let mut last = None;
    for eps in NUDGES {
        let x = at + inward * eps * width;
        match f(x) {
            Ok(v) => return Ok((x, v)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one nudge attempted"))
}

/// Bisect a membership boundary between `x_out` (not in the set, or no value
/// there) and `x_in` (in the set). Returns the final (out, in) pair with
/// |in − out| ≤ root_tol or at machine width.
fn bisect<F>(f: &F, mut x_out: f64, mut x_in: f64, alpha: f64, root_tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    for _ in 0..200 {
        if (x_in - x_out).abs() <= root_tol {
            break;
        }
        let mid = 0.5 * (x_out + x_in);
        if mid == x_out || mid == x_in {
            break;
        }
        if matches!(f(mid), Ok(v) if v >= alpha) {
            x_in = mid;
        } else {
            x_out = mid;
        }
    }
    (x_out, x_in)
}

fn monotone_path<F>(
    f: &F,
    domain: Interval,
    alpha: f64,
    shape: Shape,
    opts: &LevelSetOptions,
) -> Result<IntervalUnion, LevelSetError>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let (lo, hi, w) = (domain.lo(), domain.hi(), domain.width());
    let full = || IntervalUnion::normalize(vec![domain]);
    let piece = |a: f64, b: f64| {
        let a = a.clamp(lo, hi);
        let b = b.clamp(lo, hi);
        IntervalUnion::normalize(vec![Interval::new(a, b).expect("within a valid domain")])
    };

    match shape {
        Shape::Nondecreasing => {
            // Max end is on the right; if even that is below alpha, empty.
            let (xr, vr) = probe_inward(f, hi, -1.0, w)?;
            if vr < alpha {
                return Ok(IntervalUnion::empty());
            }
            match probe_inward(f, lo, 1.0, w) {
                Ok((xl, vl)) if vl >= alpha => {
                    if xl == lo {
                        return Ok(full());
                    }
                    // The endpoint itself had no value; locate the domain
                    // edge between lo and xl, snapping to lo if membership
                    // holds all the way down.
                    let (out, inn) = bisect(f, lo, xl, alpha, opts.root_tol);
                    Ok(if out == lo { full() } else { piece(inn, hi) })
                }
                Ok((xl, _)) => {
                    // Genuine crossing between xl and xr.
                    let (_, inn) = bisect(f, xl, xr, alpha, opts.root_tol);
                    Ok(piece(inn, hi))
                }
                // No value anywhere near the low end: the crossing, if any,
                // is lost inside a dead strip.
                Err(e) => Err(LevelSetError::Eval(e)),
            }
        }
        Shape::Nonincreasing => {
            // Mirror image: max end on the left.
            let (xl, vl) = probe_inward(f, lo, 1.0, w)?;
            if vl < alpha {
                return Ok(IntervalUnion::empty());
            }
            match probe_inward(f, hi, -1.0, w) {
                Ok((xr, vr)) if vr >= alpha => {
                    if xr == hi {
                        return Ok(full());
                    }
                    let (out, inn) = bisect(f, hi, xr, alpha, opts.root_tol);
                    Ok(if out == hi { full() } else { piece(lo, inn) })
                }
                Ok((xr, _)) => {
                    let (_, inn) = bisect(f, xr, xl, alpha, opts.root_tol);
                    Ok(piece(lo, inn))
                }
                Err(e) => Err(LevelSetError::Eval(e)),
            }
        }
        Shape::Unknown => unreachable!("dispatched in level_set_fn"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    In,
    Out,
    Dead,
}

fn scan_path<F>(
    f: &F,
    domain: Interval,
    alpha: f64,
    opts: &LevelSetOptions,
) -> Result<IntervalUnion, LevelSetError>
where
    F: Fn(f64) -> Result<f64, OutOfDomain>,
{
    let n = opts.scan_points;
    let (lo, hi, w) = (domain.lo(), domain.hi(), domain.width());
    let node_x = |i: usize| {
        if i == n {
            hi
        } else {
            lo + w * (i as f64) / (n as f64)
        }
    };

    let mut nodes = Vec::with_capacity(n + 1);
    for i in 0..=n {
        nodes.push(match f(node_x(i)) {
            Ok(v) if v >= alpha => Node::In,
            Ok(_) => Node::Out,
            Err(_) => Node::Dead,
        });
    }

    // Two dead nodes in a row: the integrand is undefined across at least a
    // whole panel. Isolated dead nodes are treated as out below.
    for i in 0..n {
        if nodes[i] == Node::Dead && nodes[i + 1] == Node::Dead {
            return Err(LevelSetError::OutOfDomainRegion {
                from: node_x(i),
                to: node_x(i + 1),
            });
        }
    }

    let mut pieces = Vec::new();
    let mut i = 0;
    while i <= n {
        if nodes[i] != Node::In {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && nodes[i + 1] == Node::In {
            i += 1;
        }
        let end = i;

        let left = if start == 0 {
            lo
        } else {
            let anchor = node_x(start - 1);
            let (out, inn) = bisect(f, anchor, node_x(start), alpha, opts.root_tol);
            // Snap: the anchor is the domain's own edge, had no value, and
            // membership held at every probe on the way down.
            if start == 1 && nodes[0] == Node::Dead && out == anchor {
                lo
            } else {
                inn
            }
        };
        let right = if end == n {
            hi
        } else {
            let anchor = node_x(end + 1);
            let (out, inn) = bisect(f, anchor, node_x(end), alpha, opts.root_tol);
            if end + 1 == n && nodes[n] == Node::Dead && out == anchor {
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
    Ok(IntervalUnion::normalize(pieces))
}
