//! Seeded random function families and parallel inequality sweeps.
//!
//! A sweep draws `count` functions from a family (deterministically from a
//! seed), runs one inequality check per draw in parallel, and aggregates
//! violations, the worst slack, and any trial errors. Trial inputs are drawn
//! sequentially before the parallel phase and results are collected in trial
//! order, so output is byte-identical at any thread count.
//!
//! `paper_examples` re-runs two published worked examples and reports the
//! printed values next to the computed ones; the published decimals do not
//! survive recomputation, which is the point of keeping them side by side.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::expr::Expr;
use crate::ineq::{
    self, hardy_knopp, jensen_probe, pk_case1, pk_case2, CheckConfig, IneqError, IneqId, IneqReport,
};
use crate::levelset::Shape;
use crate::measure::Interval;

/// A parametric family of test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// c + m·x with m > 0.
    AffineIncreasing,
    /// c + m·x^p with m > 0, p > 0.
    PowerIncreasing,
    /// c + m·exp(r·x) with m > 0, r > 0.
    ExpIncreasing,
    /// s + m·x^p with s ≥ 1, so the function never drops below one.
    Shifted,
    /// c + m₀·x plus hinge terms m_j·max(0, x − k_j).
    PiecewiseLinearIncreasing,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::AffineIncreasing => "affine_increasing",
            FamilyKind::PowerIncreasing => "power_increasing",
            FamilyKind::ExpIncreasing => "exp_increasing",
            FamilyKind::Shifted => "shifted",
            FamilyKind::PiecewiseLinearIncreasing => "piecewise_linear_increasing",
        };
        out.write_str(s)
    }
}

impl FromStr for FamilyKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "affine_increasing" => Ok(FamilyKind::AffineIncreasing),
            "power_increasing" => Ok(FamilyKind::PowerIncreasing),
            "exp_increasing" => Ok(FamilyKind::ExpIncreasing),
            "shifted" => Ok(FamilyKind::Shifted),
            "piecewise_linear_increasing" => Ok(FamilyKind::PiecewiseLinearIncreasing),
            other => Err(HarnessError::UnknownFamily {
                name: other.to_string(),
            }),
        }
    }
}

/// Parameter windows the families draw from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyRanges {
    pub slope: (f64, f64),
    pub intercept: (f64, f64),
    pub exponent: (f64, f64),
    pub rate: (f64, f64),
    pub shift: (f64, f64),
    pub knots: (usize, usize),
}

impl Default for FamilyRanges {
    fn default() -> Self {
        FamilyRanges {
            slope: (0.1, 2.0),
            intercept: (0.0, 2.0),
            exponent: (0.5, 3.0),
            rate: (0.05, 0.7),
            shift: (1.0, 3.0),
            knots: (2, 5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: FamilyKind,
    pub ranges: FamilyRanges,
    pub count: usize,
    pub seed: u64,
    /// Upper end of the window members are validated on.
    pub probe_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("unknown family: {name}")]
    UnknownFamily { name: String },
    #[error("{id} cannot be swept: {detail}")]
    Unsupported { id: IneqId, detail: String },
    #[error("invalid sweep domain: {detail}")]
    InvalidDomain { detail: String },
    #[error("family {family} ran out of attempts after {attempts} draws per member")]
    FamilyExhausted { family: FamilyKind, attempts: usize },
    #[error(transparent)]
    Check(#[from] IneqError),
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// max(0, x − k) without branching: (t + √(t²))/2.
fn hinge(k: f64) -> Expr {
    let t = Expr::sub(Expr::var(), Expr::constant(k));
    Expr::div(
        Expr::add(
            t.clone(),
            Expr::pow(Expr::pow(t, Expr::constant(2.0)), Expr::constant(0.5)),
        ),
        Expr::constant(2.0),
    )
}

fn draw_member(family: FamilyKind, ranges: &FamilyRanges, rng: &mut ChaCha8Rng, hi: f64) -> Expr {
    let lin =
        |m: f64, c: f64| Expr::add(Expr::mul(Expr::constant(m), Expr::var()), Expr::constant(c));
    match family {
        FamilyKind::AffineIncreasing => lin(draw(rng, ranges.slope), draw(rng, ranges.intercept)),
        FamilyKind::PowerIncreasing => Expr::add(
            Expr::mul(
                Expr::constant(draw(rng, ranges.slope)),
                Expr::pow(Expr::var(), Expr::constant(draw(rng, ranges.exponent))),
            ),
            Expr::constant(draw(rng, ranges.intercept)),
        ),
        FamilyKind::ExpIncreasing => Expr::add(
            Expr::mul(
                Expr::constant(draw(rng, ranges.slope)),
                Expr::exp_of(Expr::mul(
                    Expr::constant(draw(rng, ranges.rate)),
                    Expr::var(),
                )),
            ),
            Expr::constant(draw(rng, ranges.intercept)),
        ),
        FamilyKind::Shifted => Expr::add(
            Expr::mul(
                Expr::constant(draw(rng, ranges.slope)),
                Expr::pow(Expr::var(), Expr::constant(draw(rng, ranges.exponent))),
            ),
            Expr::constant(draw(rng, ranges.shift)),
        ),
        FamilyKind::PiecewiseLinearIncreasing => {
            let (kmin, kmax) = ranges.knots;
            let n = kmin + (rng.random::<u64>() as usize) % (kmax.saturating_sub(kmin) + 1);
            let mut knots: Vec<f64> = (0..n).map(|_| draw(rng, (0.0, hi))).collect();
            knots.sort_by(f64::total_cmp);
            let mut f = lin(draw(rng, ranges.slope), draw(rng, ranges.intercept));
            for k in knots {
                f = Expr::add(
                    f,
                    Expr::mul(Expr::constant(draw(rng, ranges.slope)), hinge(k)),
                );
            }
            f
        }
    }
}

/// Requirements a drawn member must pass on [0, probe_hi].
fn acceptable(family: FamilyKind, f: &Expr, hi: f64) -> bool {
    const N: usize = 256;
    let mut min = f64::INFINITY;
    for i in 0..=N {
        let x = hi * i as f64 / N as f64;
        match f.evaluate(x) {
            Ok(v) if v.is_finite() => min = min.min(v),
            _ => return false,
        }
    }
    let shape_ok = ineq::probe_shape(f, 0.0, hi) == Shape::Nondecreasing;
    match family {
        FamilyKind::Shifted => shape_ok && min >= 1.0 - 1e-9,
        // Positive on (0, hi]; a zero exactly at the origin is fine (its
        // logarithm stays integrable).
        _ => shape_ok && min >= 0.0 && f.evaluate(hi * 1e-3).map(|v| v > 0.0).unwrap_or(false),
    }
}

/// Draw `spec.count` members deterministically from the seed.
pub fn generate(spec: &FamilySpec) -> Result<Vec<Expr>, HarnessError> {
    const ATTEMPTS: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let mut found = None;
        for _ in 0..ATTEMPTS {
            let f = draw_member(spec.family, &spec.ranges, &mut rng, spec.probe_hi);
            if acceptable(spec.family, &f, spec.probe_hi) {
                found = Some(f);
                break;
            }
        }
        out.push(found.ok_or(HarnessError::FamilyExhausted {
            family: spec.family,
            attempts: ATTEMPTS,
        })?);
    }
    Ok(out)
}

/// One sweep trial, flattened for tabular output.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub f: String,
    pub phi: Option<String>,
    pub a: f64,
    pub b: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub trial: usize,
    pub f: String,
    pub phi: Option<String>,
    pub a: f64,
    pub b: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialError {
    pub trial: usize,
    pub f: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub id: IneqId,
    pub trials: usize,
    pub successes: usize,
    pub violations: usize,
    pub min_slack: Option<f64>,
    pub worst_case: Option<WorstCase>,
    pub seed: u64,
    pub errors: Vec<TrialError>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub report: SweepReport,
    pub rows: Vec<TrialRow>,
}

struct TrialInput {
    idx: usize,
    f: Expr,
    phi: Option<Expr>,
    a: f64,
    b: f64,
}

/// Run `spec.count` checks of one inequality over functions drawn from the
/// family. The domain is [0, b] for the geometric-mean checks and the probe,
/// and the envelope sub-domains are drawn from for the reciprocal-weighted
/// check (which also rotates its kernel through exp(x), x², and a random
/// power x^p).
pub fn sweep(
    id: IneqId,
    spec: &FamilySpec,
    domain: Interval,
    cfg: &CheckConfig,
) -> Result<SweepOutcome, HarnessError> {
    match id {
        IneqId::Gpk1 | IneqId::Gpk2 => {
            return Err(HarnessError::Unsupported {
                id,
                detail: "the generalized form needs an explicit map; run it as a single check"
                    .to_string(),
            });
        }
        IneqId::Pk1 | IneqId::Pk2 | IneqId::JensenProbe => {
            if domain.lo() != 0.0 {
                return Err(HarnessError::InvalidDomain {
                    detail: format!("{id} sweeps run on [0, b]; got lower end {}", domain.lo()),
                });
            }
        }
        IneqId::Hk => {
            if domain.lo() <= 0.0 {
                return Err(HarnessError::InvalidDomain {
                    detail: format!(
                        "{id} sweeps need an envelope bounded away from zero; got lower end {}",
                        domain.lo()
                    ),
                });
            }
        }
    }

    let members = generate(spec)?;
    // Distinct stream from the member generator so kernel/sub-domain draws
    // don't alias the function draws.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9E37_79B9_7F4A_7C15);
    let trials: Vec<TrialInput> = members
        .into_iter()
        .enumerate()
        .map(|(idx, f)| {
            if id == IneqId::Hk {
                let phi = match idx % 3 {
                    0 => Expr::exp_of(Expr::var()),
                    1 => Expr::pow(Expr::var(), Expr::constant(2.0)),
                    _ => Expr::pow(Expr::var(), Expr::constant(draw(&mut rng, (1.5, 4.0)))),
                };
                let (lo, hi) = (domain.lo(), domain.hi());
                let min_gap = 0.02 * (hi - lo);
                let mut a = lo;
                let mut b = hi;
                for _ in 0..50 {
                    let p = draw(&mut rng, (lo, hi));
                    let q = draw(&mut rng, (lo, hi));
                    let (p, q) = if p <= q { (p, q) } else { (q, p) };
                    if q - p >= min_gap {
                        a = p;
                        b = q;
                        break;
                    }
                }
                TrialInput {
                    idx,
                    f,
                    phi: Some(phi),
                    a,
                    b,
                }
            } else {
                TrialInput {
                    idx,
                    f,
                    phi: None,
                    a: 0.0,
                    b: domain.hi(),
                }
            }
        })
        .collect();

    let rows: Vec<TrialRow> = trials
        .par_iter()
        .map(|t| {
            let run: Result<IneqReport, IneqError> = match id {
                IneqId::Pk1 => pk_case1(&t.f, t.b, cfg),
                IneqId::Pk2 => pk_case2(&t.f, t.b, cfg),
                IneqId::JensenProbe => jensen_probe(&t.f, t.b, cfg),
                IneqId::Hk => hardy_knopp(&t.f, t.phi.as_ref().expect("set above"), t.a, t.b, cfg),
                IneqId::Gpk1 | IneqId::Gpk2 => unreachable!("rejected above"),
            };
            let base = TrialRow {
                trial: t.idx,
                f: t.f.canonical(),
                phi: t.phi.as_ref().map(Expr::canonical),
                a: t.a,
                b: t.b,
                lhs: f64::NAN,
                rhs: f64::NAN,
                slack: f64::NAN,
                holds: false,
                error: None,
            };
            match run {
                Ok(rep) => TrialRow {
                    lhs: rep.lhs,
                    rhs: rep.rhs,
                    slack: rep.slack,
                    holds: rep.holds,
                    ..base
                },
                Err(e) => TrialRow {
                    error: Some(e.to_string()),
                    ..base
                },
            }
        })
        .collect();

    let successes = rows.iter().filter(|r| r.error.is_none()).count();
    let violations = rows
        .iter()
        .filter(|r| r.error.is_none() && !r.holds)
        .count();
    let worst = rows
        .iter()
        .filter(|r| r.error.is_none())
        .min_by(|a, b| a.slack.total_cmp(&b.slack));
    let report = SweepReport {
        id,
        trials: rows.len(),
        successes,
        violations,
        min_slack: worst.map(|r| r.slack),
        worst_case: worst.map(|r| WorstCase {
            trial: r.trial,
            f: r.f.clone(),
            phi: r.phi.clone(),
            a: r.a,
            b: r.b,
            slack: r.slack,
        }),
        seed: spec.seed,
        errors: rows
            .iter()
            .filter_map(|r| {
                r.error.as_ref().map(|e| TrialError {
                    trial: r.trial,
                    f: r.f.clone(),
                    error: e.clone(),
                })
            })
            .collect(),
    };
    Ok(SweepOutcome { report, rows })
}

/// Note attached when an integral invocation reproduces a published worked
/// example whose printed value disagrees with the arithmetic. Matching is by
/// canonical form, so equivalent spellings of the same input are caught.
pub fn published_example_note(
    f: &Expr,
    domain: Interval,
    m: &crate::measure::MeasureSpec,
) -> Option<String> {
    use std::f64::consts::E;
    if *m != crate::measure::MeasureSpec::Uniform || domain.lo() != 0.0 || domain.hi() != 5.0 {
        return None;
    }
    let canon = f.canonical();
    let half_over_e: Expr = "x/(2*exp(1))".parse().expect("static");
    let exp_recip: Expr = "exp(1/x)".parse().expect("static");
    if canon == half_over_e.canonical() {
        return Some(format!(
            "this integral appears as a published worked example that prints 0.781; the \
             crossing is 5/(1+2e) = {} — both values kept side by side for the audit",
            5.0 / (1.0 + 2.0 * E)
        ));
    }
    if canon == exp_recip.canonical() {
        return Some(format!(
            "this integral appears as a published worked example that claims the value \
             e = {E}; the crossing actually solves α·ln α = 1 ≈ 1.7632228343518967"
        ));
    }
    None
}

/// Re-run of the published worked examples with the printed values quoted
/// next to what the arithmetic gives.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleAudit {
    pub reports: Vec<IneqReport>,
    pub audit: Vec<String>,
}

pub fn paper_examples(cfg: &CheckConfig) -> Result<ExampleAudit, IneqError> {
    use std::f64::consts::E;

    let half_x: Expr = "x/2".parse().expect("static");
    let exp_recip: Expr = "exp(1/x)".parse().expect("static");

    let mut r1 = pk_case1(&half_x, 5.0, cfg)?;
    let mut r2 = pk_case2(&exp_recip, 5.0, cfg)?;

    // Independent crossing for the exp(1/x) integral: α·ln α = 1.
    let root = {
        let g = |a: f64| a * a.ln() - 1.0;
        let (mut lo, mut hi) = (1.5, 2.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let exact1 = 5.0 / (1.0 + 2.0 * E);
    let audit = vec![
        format!(
            "published worked example prints 0.781 for the geometric-mean side with f(x) = x/2 \
             on [0, 5]; the crossing is 5/(1+2e) = {exact1:.7} (this run: {:.7}), so the printed \
             decimal overstates it by about {:.4}",
            r1.lhs,
            0.781 - exact1
        ),
        format!(
            "published worked example prints 1.6 for the fuzzy integral of x/2 on [0, 5]; the \
             crossing is 5/3 = {:.7} (this run: {:.7})",
            5.0 / 3.0,
            r1.rhs
        ),
        format!(
            "published worked example claims the fuzzy integral of exp(1/x) on [0, 5] equals \
             e = {E:.7}; the crossing actually solves α·ln α = 1, giving α = {:.7} (independent \
             bisection: {root:.7}) — the left side of the same check lands on the identical \
             crossing ({:.7})",
            r2.rhs / E,
            r2.lhs
        ),
    ];
    r1.notes.push_str("; audit: ");
    r1.notes.push_str(&audit[0]);
    r1.notes.push_str("; audit: ");
    r1.notes.push_str(&audit[1]);
    r2.notes.push_str("; audit: ");
    r2.notes.push_str(&audit[2]);

    Ok(ExampleAudit {
        reports: vec![r1, r2],
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn spec(family: FamilyKind, count: usize, seed: u64) -> FamilySpec {
        FamilySpec {
            family,
            ranges: FamilyRanges::default(),
            count,
            seed,
            probe_hi: 5.0,
        }
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let a = generate(&spec(FamilyKind::AffineIncreasing, 8, 42)).unwrap();
        let b = generate(&spec(FamilyKind::AffineIncreasing, 8, 42)).unwrap();
        let c = generate(&spec(FamilyKind::AffineIncreasing, 8, 43)).unwrap();
        let canon = |v: &[Expr]| v.iter().map(Expr::canonical).collect::<Vec<_>>();
        assert_eq!(canon(&a), canon(&b));
        assert_ne!(canon(&a), canon(&c));
    }

    #[test]
    fn members_satisfy_their_family_contract() {
        for kind in [
            FamilyKind::AffineIncreasing,
            FamilyKind::PowerIncreasing,
            FamilyKind::ExpIncreasing,
            FamilyKind::Shifted,
            FamilyKind::PiecewiseLinearIncreasing,
        ] {
            let members = generate(&spec(kind, 6, 7)).unwrap();
            assert_eq!(members.len(), 6);
            for f in &members {
                assert_eq!(
                    ineq::probe_shape(f, 0.0, 5.0),
                    Shape::Nondecreasing,
                    "{kind}: {}",
                    f.canonical()
                );
                if kind == FamilyKind::Shifted {
                    assert!(f.evaluate(0.0).unwrap() >= 1.0 - 1e-9);
                }
            }
        }
    }

    #[test]
    fn hinge_encodes_relu() {
        let h = hinge(2.0);
        assert_eq!(h.evaluate(1.0).unwrap(), 0.0);
        assert_eq!(h.evaluate(2.0).unwrap(), 0.0);
        assert!((h.evaluate(3.5).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn family_names_round_trip() {
        for kind in [
            FamilyKind::AffineIncreasing,
            FamilyKind::PowerIncreasing,
            FamilyKind::ExpIncreasing,
            FamilyKind::Shifted,
            FamilyKind::PiecewiseLinearIncreasing,
        ] {
            assert_eq!(kind.to_string().parse::<FamilyKind>().unwrap(), kind);
        }
        assert!(matches!(
            "bogus".parse::<FamilyKind>(),
            Err(HarnessError::UnknownFamily { .. })
        ));
    }

    #[test]
    fn pk1_sweep_over_affine_family_has_no_violations() {
        let domain = Interval::new(0.0, 5.0).unwrap();
        let out = sweep(
            IneqId::Pk1,
            &spec(FamilyKind::AffineIncreasing, 24, 11),
            domain,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(out.report.trials, 24);
        assert_eq!(out.report.successes, 24, "errors: {:?}", out.report.errors);
        assert_eq!(out.report.violations, 0);
        assert!(out.report.min_slack.unwrap() > 0.0);
        assert!(out.report.worst_case.is_some());
    }

    #[test]
    fn pk2_sweep_over_shifted_family_has_no_violations() {
        let domain = Interval::new(0.0, 5.0).unwrap();
        let out = sweep(
            IneqId::Pk2,
            &spec(FamilyKind::Shifted, 10, 3),
            domain,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(out.report.successes, 10, "errors: {:?}", out.report.errors);
        assert_eq!(out.report.violations, 0);
    }

    #[test]
    fn hk_sweep_rotates_kernels_and_holds() {
        let domain = Interval::new(0.5, 6.0).unwrap();
        let out = sweep(
            IneqId::Hk,
            &spec(FamilyKind::AffineIncreasing, 9, 19),
            domain,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(out.report.successes, 9, "errors: {:?}", out.report.errors);
        assert_eq!(out.report.violations, 0);
        let kernels: Vec<_> = out.rows.iter().filter_map(|r| r.phi.clone()).collect();
        assert!(kernels.iter().any(|p| p.contains("exp")));
        assert!(kernels.iter().any(|p| p == "(x ^ 2)"));
        for r in &out.rows {
            assert!(r.a > 0.0 && r.b > r.a);
        }
    }

    #[test]
    fn jensen_sweep_records_violations_as_data() {
        let domain = Interval::new(0.0, 5.0).unwrap();
        let out = sweep(
            IneqId::JensenProbe,
            &spec(FamilyKind::AffineIncreasing, 8, 5),
            domain,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(out.report.successes, 8);
        // The composition step fails for garden-variety increasing g; the
        // sweep's job is to count that, not to hide it.
        assert!(out.report.violations > 0);
        assert!(out.report.min_slack.unwrap() < 0.0);
    }

    #[test]
    fn sweep_output_is_identical_across_thread_counts() {
        let domain = Interval::new(0.0, 5.0).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                sweep(
                    IneqId::Pk1,
                    &spec(FamilyKind::PowerIncreasing, 12, 77),
                    domain,
                    &CheckConfig::default(),
                )
                .unwrap()
            })
        };
        let one = serde_json::to_string(&run(1).report).unwrap();
        let four = serde_json::to_string(&run(4).report).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn sweeps_validate_their_domains() {
        let cfg = CheckConfig::default();
        let shifted = Interval::new(1.0, 5.0).unwrap();
        assert!(matches!(
            sweep(
                IneqId::Pk1,
                &spec(FamilyKind::AffineIncreasing, 2, 1),
                shifted,
                &cfg
            ),
            Err(HarnessError::InvalidDomain { .. })
        ));
        let from_zero = Interval::new(0.0, 5.0).unwrap();
        assert!(matches!(
            sweep(
                IneqId::Hk,
                &spec(FamilyKind::AffineIncreasing, 2, 1),
                from_zero,
                &cfg
            ),
            Err(HarnessError::InvalidDomain { .. })
        ));
        assert!(matches!(
            sweep(
                IneqId::Gpk1,
                &spec(FamilyKind::AffineIncreasing, 2, 1),
                from_zero,
                &cfg
            ),
            Err(HarnessError::Unsupported { .. })
        ));
    }

    #[test]
    fn worked_example_audit_quotes_published_and_computed_values() {
        let audit = paper_examples(&CheckConfig::default()).unwrap();
        assert_eq!(audit.reports.len(), 2);
        let joined = audit.audit.join("\n");
        assert!(joined.contains("0.781"), "{joined}");
        assert!(joined.contains("0.7768120"), "{joined}");
        assert!(joined.contains("1.6"), "{joined}");
        assert!(joined.contains("1.6666667"), "{joined}");
        assert!(joined.contains("2.7182818"), "{joined}");
        assert!(joined.contains("1.7632228"), "{joined}");
        assert!((audit.reports[0].lhs - 5.0 / (1.0 + 2.0 * E)).abs() < 1e-6);
        assert!((audit.reports[1].rhs / E - 1.7632228343518967).abs() < 1e-6);
        // The audit lines travel with the reports too.
        assert!(audit.reports[0].notes.contains("0.781"));
        assert!(audit.reports[1].notes.contains("α·ln α = 1"));
    }
}
