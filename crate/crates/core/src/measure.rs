//! Intervals in [0, ∞), finite unions of them, and the weighted monotone
//! measures the integrals run over.
//!
//! Three measures:
//! - `uniform`: plain length, Σ (hi − lo);
//! - `reciprocal`: ∫ dx/x = Σ ln(hi/lo), which is +∞ as soon as a piece of
//!   positive length touches 0 — callers must cope with infinite values;
//! - `density:<expr>`: ∫ w(x) dx by adaptive quadrature, with w sampled for
//!   sign violations along the way (a negative density is a hard error, not
//!   a silently signed measure).
//!
//! All three are monotone: B ⊆ A implies m(B) ≤ m(A). That is the property
//! the Sugeno fixed-point solver leans on.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::{self, Expr};
use crate::quad::{self, QuadError};

/// Closed interval `[lo, hi]` with `0 ≤ lo ≤ hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("invalid interval [{lo}, {hi}]: need finite 0 <= lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error(
        "unrecognized measure `{text}`: {detail} (expected uniform, reciprocal, or density:<expr>)"
    )]
    BadSpec { text: String, detail: String },
    #[error("density is negative at x = {x} (value {value})")]
    NegativeDensity { x: f64, value: f64 },
    #[error("density integration failed: {0}")]
    Quad(#[from] QuadError),
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval, MeasureError> {
        if lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(MeasureError::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "[{}, {}]", self.lo, self.hi)
    }
}

/// Finite union of disjoint intervals, kept sorted; the shape every α-level
/// set comes back as.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    pub fn empty() -> IntervalUnion {
        IntervalUnion(Vec::new())
    }

    /// Sort raw pieces and coalesce overlapping or touching ones. The result
    /// covers exactly the same set of points.
    pub fn normalize(mut raw: Vec<Interval>) -> IntervalUnion {
        raw.sort_by(|p, q| p.lo.total_cmp(&q.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for piece in raw {
            match out.last_mut() {
                Some(prev) if piece.lo <= prev.hi => prev.hi = prev.hi.max(piece.hi),
                _ => out.push(piece),
            }
        }
        IntervalUnion(out)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.0.iter().any(|p| p.contains(x))
    }

    /// Clip every piece to `window`.
    pub fn intersect(&self, window: &Interval) -> IntervalUnion {
        IntervalUnion(self.0.iter().filter_map(|p| p.intersect(window)).collect())
    }
}

/// Which weight the measure carries.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Lebesgue length, dx.
    Uniform,
    /// dx/x; infinite on sets reaching 0.
    Reciprocal,
    /// w(x) dx for a nonnegative expression w.
    Density(Expr),
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::Uniform => write!(out, "uniform"),
            MeasureSpec::Reciprocal => write!(out, "reciprocal"),
            MeasureSpec::Density(w) => write!(out, "density:{}", w.canonical()),
        }
    }
}

impl Serialize for MeasureSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for MeasureSpec {
    type Err = MeasureError;

    fn from_str(text: &str) -> Result<MeasureSpec, MeasureError> {
        match text {
            "uniform" => Ok(MeasureSpec::Uniform),
            "reciprocal" => Ok(MeasureSpec::Reciprocal),
            _ => {
                match text.strip_prefix("density:") {
                    Some(body) => expr::parse(body).map(MeasureSpec::Density).map_err(|e| {
                        MeasureError::BadSpec {
                            text: text.to_string(),
                            detail: e.to_string(),
                        }
                    }),
                    None => Err(MeasureError::BadSpec {
                        text: text.to_string(),
                        detail: "unknown measure name".to_string(),
                    }),
                }
            }
        }
    }
}

/// Measure of an interval union. May legitimately return +∞ (reciprocal
/// measure of a set touching 0). `tol` is the absolute quadrature budget for
/// the density branch, split across pieces; the other branches are closed
/// form and ignore it.
pub fn measure(spec: &MeasureSpec, set: &IntervalUnion, tol: f64) -> Result<f64, MeasureError> {
    match spec {
        MeasureSpec::Uniform => Ok(set.intervals().iter().map(Interval::width).sum()),
        MeasureSpec::Reciprocal => {
            let mut total = 0.0;
            for p in set.intervals() {
                if p.width() == 0.0 {
                    continue;
                }
                if p.lo == 0.0 {
                    return Ok(f64::INFINITY);
                }
                total += (p.hi / p.lo).ln();
            }
            Ok(total)
        }
        MeasureSpec::Density(w) => {
            let pieces = set.intervals().iter().filter(|p| p.width() > 0.0).count();
            let budget = tol / pieces.max(1) as f64;
            let mut total = 0.0;
            for p in set.intervals() {
                if p.width() == 0.0 {
                    continue;
                }
                scan_for_negative_density(w, p)?;
                let r = quad::integrate(w, p.lo, p.hi, budget)?;
                // Roundoff can leave a tiny negative on a near-zero piece.
                total += r.value.max(0.0);
            }
            Ok(total)
        }
    }
}

/// Sample the density across a piece (interior points only) and reject
/// clearly negative values before integrating.
fn scan_for_negative_density(w: &Expr, piece: &Interval) -> Result<(), MeasureError> {
    const SAMPLES: usize = 33;
    for i in 0..SAMPLES {
        let t = (i as f64 + 0.5) / SAMPLES as f64;
        let x = piece.lo + t * piece.width();
        if let Ok(value) = w.evaluate(x) {
            if value < -1e-12 * (1.0 + value.abs()) {
                return Err(MeasureError::NegativeDensity { x, value });
            }
        }
        // Out-of-domain sample points are left for the quadrature pass to
        // classify: isolated ones may never be hit by the open rule.
    }
    Ok(())
}
