//! Command-line front end.
//!
//! Five commands: `integrate` (sugeno | riemann), `check`, `sweep`,
//! `paper-examples`, and `emit-plot`. Reports are JSON envelopes on stdout
//! with top-level fields {version, command, config, result, notes}; the
//! config echoes every effective value (defaults made explicit), so
//! re-running the printed config reproduces the report. `--format csv`
//! switches sweep output to a flat table, and `emit-plot` writes the
//! distribution curve as CSV with header `alpha,F_alpha,min_alpha_F`.
//!
//! Exit codes: 0 success / inequality holds, 1 inequality violated,
//! 2 input error, 3 numerical failure.

use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::expr::Expr;
use crate::harness::{self, FamilyKind, FamilyRanges, FamilySpec, HarnessError};
use crate::ineq::{self, CheckConfig, IneqError, IneqId, IneqReport, InnerKind};
use crate::levelset::{LevelSetError, DEFAULT_ROOT_TOL, DEFAULT_SCAN_POINTS};
use crate::measure::{Interval, MeasureError, MeasureSpec};
use crate::quad::{self, QuadError};
use crate::sugeno::{self, SugenoError};

const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_OK: i32 = 0;
const EXIT_VIOLATED: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "sugeno",
    version,
    about = "Fuzzy (Sugeno) integrals over weighted interval domains, with inequality checks",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one integral of f over a domain.
    Integrate {
        #[command(subcommand)]
        kind: IntegrateKind,
    },
    /// Check one inequality and report lhs, rhs, and slack.
    Check {
        #[arg(value_enum)]
        id: CheckId,
        #[command(flatten)]
        args: CheckArgs,
    },
    /// Run a seeded family of checks in parallel.
    Sweep {
        #[arg(value_enum)]
        id: SweepId,
        #[command(flatten)]
        args: SweepArgs,
    },
    /// Re-run the published worked examples and audit their printed values.
    PaperExamples {
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Write the distribution curve F(α) and min(α, F(α)) as CSV.
    EmitPlot(EmitPlotArgs),
}

#[derive(Subcommand)]
enum IntegrateKind {
    /// Fixed point of min(α, μ(domain ∩ {f ≥ α})).
    Sugeno(IntegrateArgs),
    /// Classical adaptive quadrature (unweighted).
    Riemann(IntegrateArgs),
}

#[derive(Args)]
struct IntegrateArgs {
    /// Integrand, e.g. "x/2" or "exp(1/x)".
    #[arg(long)]
    f: String,
    /// Domain endpoints.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    domain: Vec<f64>,
    /// uniform | reciprocal | density:<expr>  (sugeno only)
    #[arg(long, default_value = "uniform")]
    measure: String,
    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Args)]
struct CheckArgs {
    /// The function under test.
    #[arg(long)]
    f: String,
    /// Convex kernel for hk [default: exp(x)].
    #[arg(long)]
    phi: Option<String>,
    /// Strictly monotone map for gpk [default: exp(x)].
    #[arg(long)]
    bij: Option<String>,
    /// Inner integral flavor for gpk.
    #[arg(long, value_enum, default_value_t = InnerFlag::Riemann)]
    inner: InnerFlag,
    /// Domain endpoints ([0, b] for pk1/pk2/gpk/jensen; 0 < a < b for hk).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    domain: Vec<f64>,
    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Function family to draw from: affine_increasing | power_increasing |
    /// exp_increasing | shifted | piecewise_linear_increasing.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Domain envelope ([0, b] for pk1/pk2/jensen; sub-domains are drawn
    /// inside it for hk).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    domain: Vec<f64>,
    /// Worker threads for the trial loop [default: all cores].
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatFlag::Json)]
    format: FormatFlag,
    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Args)]
struct EmitPlotArgs {
    #[arg(long)]
    f: String,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    domain: Vec<f64>,
    /// uniform | reciprocal | density:<expr>
    #[arg(long, default_value = "uniform")]
    measure: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Number of α samples.
    #[arg(long, default_value_t = 257)]
    points: usize,
    #[command(flatten)]
    tols: TolArgs,
}

/// Tolerances shared by every command, defaulting to the library defaults.
#[derive(Args)]
struct TolArgs {
    /// α-bracket width for Sugeno solves.
    #[arg(long, default_value_t = sugeno::DEFAULT_TOL)]
    tol: f64,
    /// Absolute budget for classical quadrature.
    #[arg(long = "quad-tol", default_value_t = quad::DEFAULT_TOL)]
    quad_tol: f64,
    /// Level-set boundary bisection tolerance.
    #[arg(long = "root-tol", default_value_t = DEFAULT_ROOT_TOL)]
    root_tol: f64,
    /// Level-set scan resolution for unknown shapes.
    #[arg(long = "scan-points", default_value_t = DEFAULT_SCAN_POINTS)]
    scan_points: usize,
    /// How negative the slack may go before a check counts as violated.
    #[arg(long = "violation-tol", default_value_t = ineq::DEFAULT_VIOLATION_TOL)]
    violation_tol: f64,
}

impl TolArgs {
    fn check_config(&self) -> CheckConfig {
        CheckConfig {
            solver_tol: self.tol,
            quad_tol: self.quad_tol,
            violation_tol: self.violation_tol,
            scan_points: self.scan_points,
            root_tol: self.root_tol,
        }
    }

    fn config_json(&self) -> serde_json::Value {
        json!({
            "tol": self.tol,
            "quad_tol": self.quad_tol,
            "root_tol": self.root_tol,
            "scan_points": self.scan_points,
            "violation_tol": self.violation_tol,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckId {
    Pk1,
    Pk2,
    Gpk,
    Hk,
    Jensen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepId {
    Pk1,
    Pk2,
    Hk,
    Jensen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InnerFlag {
    Riemann,
    Sugeno,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatFlag {
    Json,
    Csv,
}

pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Integrate { kind } => match kind {
            IntegrateKind::Sugeno(args) => integrate_sugeno(&args),
            IntegrateKind::Riemann(args) => integrate_riemann(&args),
        },
        Command::Check { id, args } => check(id, &args),
        Command::Sweep { id, args } => sweep(id, &args),
        Command::PaperExamples { tols } => paper_examples(&tols),
        Command::EmitPlot(args) => emit_plot(&args),
    }
}

fn fail(code: i32, msg: impl Display) -> i32 {
    eprintln!("error: {msg}");
    code
}

fn emit(command: &str, config: serde_json::Value, result: serde_json::Value, notes: Vec<String>) {
    let envelope = json!({
        "version": VERSION,
        "command": command,
        "config": config,
        "result": result,
        "notes": notes,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&envelope).expect("serializable")
    );
}

fn parse_expr(text: &str, what: &str) -> Result<Expr, String> {
    text.parse::<Expr>()
        .map_err(|e| format!("cannot parse {what} `{text}`: {e}"))
}

fn parse_domain(domain: &[f64]) -> Result<Interval, String> {
    Interval::new(domain[0], domain[1])
        .map_err(|e| format!("invalid --domain {} {}: {e}", domain[0], domain[1]))
}

fn exit_for_measure(e: &MeasureError) -> i32 {
    match e {
        MeasureError::InvalidInterval { .. }
        | MeasureError::BadSpec { .. }
        | MeasureError::NegativeDensity { .. } => EXIT_INPUT,
        MeasureError::Quad(q) => exit_for_quad(q),
    }
}

fn exit_for_quad(e: &QuadError) -> i32 {
    match e {
        QuadError::InvalidBounds { .. } | QuadError::InvalidTolerance { .. } => EXIT_INPUT,
        QuadError::DivergenceSuspected { .. } | QuadError::Eval(_) => EXIT_NUMERICAL,
    }
}

fn exit_for_sugeno(e: &SugenoError) -> i32 {
    match e {
        SugenoError::BadTolerance { .. } | SugenoError::BadGrid { .. } => EXIT_INPUT,
        SugenoError::Measure(m) => exit_for_measure(m),
        SugenoError::LevelSet(LevelSetError::BadOptions) => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

fn exit_for_ineq(e: &IneqError) -> i32 {
    match e {
        IneqError::InvalidDomain { .. } | IneqError::NotMonotone { .. } => EXIT_INPUT,
        IneqError::Sugeno(s) => exit_for_sugeno(s),
        IneqError::Quad(q) => exit_for_quad(q),
        IneqError::Eval(_) => EXIT_NUMERICAL,
        IneqError::Measure(m) => exit_for_measure(m),
    }
}

fn exit_for_harness(e: &HarnessError) -> i32 {
    match e {
        HarnessError::UnknownFamily { .. }
        | HarnessError::Unsupported { .. }
        | HarnessError::InvalidDomain { .. }
        | HarnessError::FamilyExhausted { .. } => EXIT_INPUT,
        HarnessError::Check(c) => exit_for_ineq(c),
    }
}

fn integrate_sugeno(args: &IntegrateArgs) -> i32 {
    let f = match parse_expr(&args.f, "--f") {
        Ok(f) => f,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let domain = match parse_domain(&args.domain) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let measure: MeasureSpec = match args.measure.parse() {
        Ok(m) => m,
        Err(e) => return fail(EXIT_INPUT, format!("invalid --measure: {e}")),
    };
    let shape = ineq::probe_shape(&f, domain.lo(), domain.hi());
    let opts = args.tols.check_config().level(shape);
    let mut config = args.tols.config_json();
    config["f"] = json!(f.canonical());
    config["domain"] = json!([domain.lo(), domain.hi()]);
    config["measure"] = json!(measure.to_string());
    config["declared_shape"] = serde_json::to_value(shape).expect("serializable");

    match sugeno::sugeno_integral(&f, domain, &measure, args.tols.tol, &opts) {
        Ok(value) => {
            let mut notes = vec![
                "value is the fixed point of min(α, F(α)); F_at_lower/F_at_upper certify the \
                 bracket"
                    .to_string(),
            ];
            if let Some(note) = harness::published_example_note(&f, domain, &measure) {
                notes.push(note);
            }
            emit(
                "integrate sugeno",
                config,
                serde_json::to_value(value).expect("serializable"),
                notes,
            );
            EXIT_OK
        }
        Err(e) => fail(exit_for_sugeno(&e), e),
    }
}

fn integrate_riemann(args: &IntegrateArgs) -> i32 {
    let f = match parse_expr(&args.f, "--f") {
        Ok(f) => f,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    if args.measure != "uniform" {
        return fail(
            EXIT_INPUT,
            "riemann integration is unweighted; drop --measure",
        );
    }
    let (a, b) = (args.domain[0], args.domain[1]);
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return fail(
            EXIT_INPUT,
            format!("invalid --domain {a} {b}: need finite a ≤ b"),
        );
    }
    let mut config = args.tols.config_json();
    config["f"] = json!(f.canonical());
    config["domain"] = json!([a, b]);

    match quad::integrate(&f, a, b, args.tols.quad_tol) {
        Ok(r) => {
            emit(
                "integrate riemann",
                config,
                serde_json::to_value(r).expect("serializable"),
                vec![],
            );
            EXIT_OK
        }
        Err(e) => fail(exit_for_quad(&e), e),
    }
}

fn report_exit(report: &IneqReport) -> i32 {
    if report.holds {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    }
}

fn check(id: CheckId, args: &CheckArgs) -> i32 {
    let f = match parse_expr(&args.f, "--f") {
        Ok(f) => f,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let (lo, hi) = (args.domain[0], args.domain[1]);
    let cfg = args.tols.check_config();
    let needs_zero_lo = matches!(
        id,
        CheckId::Pk1 | CheckId::Pk2 | CheckId::Gpk | CheckId::Jensen
    );
    if needs_zero_lo && lo != 0.0 {
        return fail(
            EXIT_INPUT,
            format!("this check runs on [0, b]; got --domain {lo} {hi} (lower end must be 0)"),
        );
    }

    let mut config = args.tols.config_json();
    config["f"] = json!(f.canonical());
    config["domain"] = json!([lo, hi]);

    let outcome: Result<IneqReport, IneqError> = match id {
        CheckId::Pk1 => {
            config["id"] = json!("pk1");
            ineq::pk_case1(&f, hi, &cfg)
        }
        CheckId::Pk2 => {
            config["id"] = json!("pk2");
            ineq::pk_case2(&f, hi, &cfg)
        }
        CheckId::Jensen => {
            config["id"] = json!("jensen");
            ineq::jensen_probe(&f, hi, &cfg)
        }
        CheckId::Gpk => {
            let bij_text = args.bij.as_deref().unwrap_or("exp(x)");
            let bij = match parse_expr(bij_text, "--bij") {
                Ok(b) => b,
                Err(e) => return fail(EXIT_INPUT, e),
            };
            let kind = match args.inner {
                InnerFlag::Riemann => InnerKind::Riemann,
                InnerFlag::Sugeno => InnerKind::Sugeno,
            };
            config["id"] = json!("gpk");
            config["bij"] = json!(bij.canonical());
            config["inner"] = json!(match kind {
                InnerKind::Riemann => "riemann",
                InnerKind::Sugeno => "sugeno",
            });
            ineq::generalized_pk(&f, &bij, kind, hi, &cfg)
        }
        CheckId::Hk => {
            let phi_text = args.phi.as_deref().unwrap_or("exp(x)");
            let phi = match parse_expr(phi_text, "--phi") {
                Ok(p) => p,
                Err(e) => return fail(EXIT_INPUT, e),
            };
            config["id"] = json!("hk");
            config["phi"] = json!(phi.canonical());
            ineq::hardy_knopp(&f, &phi, lo, hi, &cfg)
        }
    };

    match outcome {
        Ok(report) => {
            let code = report_exit(&report);
            emit(
                "check",
                config,
                serde_json::to_value(&report).expect("serializable"),
                vec![],
            );
            code
        }
        Err(e) => fail(exit_for_ineq(&e), e),
    }
}

/// Minimal CSV quoting: wrap fields containing separators or quotes.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn sweep(id: SweepId, args: &SweepArgs) -> i32 {
    let family: FamilyKind = match args.family.parse() {
        Ok(f) => f,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let domain = match parse_domain(&args.domain) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let ineq_id = match id {
        SweepId::Pk1 => IneqId::Pk1,
        SweepId::Pk2 => IneqId::Pk2,
        SweepId::Hk => IneqId::Hk,
        SweepId::Jensen => IneqId::JensenProbe,
    };
    let spec = FamilySpec {
        family,
        ranges: FamilyRanges::default(),
        count: args.trials,
        seed: args.seed,
        probe_hi: domain.hi(),
    };
    let cfg = args.tols.check_config();

    let run_sweep = || harness::sweep(ineq_id, &spec, domain, &cfg);
    let outcome = match args.jobs {
        Some(jobs) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                Ok(p) => p,
                Err(e) => {
                    return fail(
                        EXIT_INPUT,
                        format!("cannot build a {jobs}-thread pool: {e}"),
                    )
                }
            };
            pool.install(run_sweep)
        }
        None => run_sweep(),
    };

    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return fail(exit_for_harness(&e), e),
    };

    let code = if outcome.report.violations == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    };
    match args.format {
        FormatFlag::Json => {
            let mut config = args.tols.config_json();
            config["id"] = serde_json::to_value(ineq_id).expect("serializable");
            config["family"] = json!(family.to_string());
            config["trials"] = json!(args.trials);
            config["seed"] = json!(args.seed);
            config["domain"] = json!([domain.lo(), domain.hi()]);
            config["jobs"] = json!(args.jobs.unwrap_or_else(rayon::current_num_threads));
            config["format"] = json!("json");
            emit(
                "sweep",
                config,
                serde_json::to_value(&outcome.report).expect("serializable"),
                vec![],
            );
        }
        FormatFlag::Csv => {
            println!("trial,f,phi,a,b,lhs,rhs,slack,holds,error");
            for r in &outcome.rows {
                println!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.trial,
                    csv_field(&r.f),
                    csv_field(r.phi.as_deref().unwrap_or("")),
                    r.a,
                    r.b,
                    r.lhs,
                    r.rhs,
                    r.slack,
                    r.holds,
                    csv_field(r.error.as_deref().unwrap_or("")),
                );
            }
        }
    }
    code
}

fn paper_examples(tols: &TolArgs) -> i32 {
    let cfg = tols.check_config();
    match harness::paper_examples(&cfg) {
        Ok(audit) => {
            let all_hold = audit.reports.iter().all(|r| r.holds);
            emit(
                "paper-examples",
                tols.config_json(),
                json!({ "reports": audit.reports }),
                audit.audit.clone(),
            );
            if all_hold {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            }
        }
        Err(e) => fail(exit_for_ineq(&e), e),
    }
}

fn emit_plot(args: &EmitPlotArgs) -> i32 {
    let f = match parse_expr(&args.f, "--f") {
        Ok(f) => f,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let domain = match parse_domain(&args.domain) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let measure: MeasureSpec = match args.measure.parse() {
        Ok(m) => m,
        Err(e) => return fail(EXIT_INPUT, format!("invalid --measure: {e}")),
    };
    let shape = ineq::probe_shape(&f, domain.lo(), domain.hi());
    let opts = args.tols.check_config().level(shape);

    let (rows, solved) = match sugeno::distribution_curve(&f, domain, &measure, args.points, &opts)
    {
        Ok(r) => r,
        Err(e) => return fail(exit_for_sugeno(&e), e),
    };

    let mut csv = String::from("alpha,F_alpha,min_alpha_F\n");
    for p in &rows {
        csv.push_str(&format!("{},{},{}\n", p.alpha, p.f_alpha, p.min_alpha_f));
    }
    if let Err(e) = std::fs::write(&args.out, csv) {
        return fail(
            EXIT_INPUT,
            format!("cannot write {}: {e}", args.out.display()),
        );
    }

    let mut config = args.tols.config_json();
    config["f"] = json!(f.canonical());
    config["domain"] = json!([domain.lo(), domain.hi()]);
    config["measure"] = json!(measure.to_string());
    config["points"] = json!(args.points);
    config["out"] = json!(args.out.display().to_string());
    emit(
        "emit-plot",
        config,
        json!({
            "path": args.out.display().to_string(),
            "rows": rows.len(),
            "alpha_star": solved.alpha_star,
            "value": solved.value,
        }),
        vec![
            "curve columns: level α, distribution F(α) = μ(domain ∩ {f ≥ α}), and min(α, F(α)) \
             whose peak is the integral"
                .to_string(),
        ],
    );
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(args.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_args(&["sugeno", "--help"]), EXIT_OK);
    }

    #[test]
    fn unknown_subcommand_is_an_input_error() {
        assert_eq!(run_args(&["sugeno", "frobnicate"]), EXIT_INPUT);
    }

    #[test]
    fn parse_error_is_an_input_error() {
        assert_eq!(
            run_args(&[
                "sugeno",
                "integrate",
                "sugeno",
                "--f",
                "x +",
                "--domain",
                "0",
                "5"
            ]),
            EXIT_INPUT
        );
    }

    #[test]
    fn constant_integral_succeeds() {
        assert_eq!(
            run_args(&[
                "sugeno",
                "integrate",
                "sugeno",
                "--f",
                "7",
                "--domain",
                "0",
                "3"
            ]),
            EXIT_OK
        );
    }

    #[test]
    fn divergent_reciprocal_measure_is_a_numerical_failure() {
        assert_eq!(
            run_args(&[
                "sugeno",
                "integrate",
                "sugeno",
                "--f",
                "exp(1/x)",
                "--domain",
                "0",
                "5",
                "--measure",
                "reciprocal",
            ]),
            EXIT_NUMERICAL
        );
    }

    #[test]
    fn jensen_violation_exits_one() {
        assert_eq!(
            run_args(&["sugeno", "check", "jensen", "--f", "1/x", "--domain", "0", "5"]),
            EXIT_VIOLATED
        );
    }

    #[test]
    fn checks_reject_shifted_lower_end() {
        assert_eq!(
            run_args(&["sugeno", "check", "pk1", "--f", "x", "--domain", "1", "5"]),
            EXIT_INPUT
        );
    }

    #[test]
    fn csv_quoting_covers_separators() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
