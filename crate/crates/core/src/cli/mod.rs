//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error or a failed check,
//! 2 on a usage error.

mod svg;
mod table;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::area::{self, AreaBreakdown};
use crate::curve::{self, CurveParams, PlanePoint};
use crate::elliptic::SeriesTarget;
use crate::error::Error;
use crate::format::sig17;
use crate::taylor::{effective_beta, first_taylor, second_taylor, verify_chain, ApproxKind};
use crate::verify;

pub use table::Table;

/// 1/π to 30 significant digits.
pub const INV_PI_REFERENCE: &str = "0.318309886183790671537767526745";
/// π to 30 significant digits.
pub const PI_REFERENCE: &str = "3.14159265358979323846264338328";

#[derive(Debug, Parser)]
#[command(name = "eggarea", version, about = "Areas of Hügelschäffer egg curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Area of the egg and its two subareas.
    Area(AreaArgs),
    /// Two-sided bound certificate for the area.
    Bounds(BoundsArgs),
    /// Points of the egg for plotting.
    Sample(SampleArgs),
    /// Taylor coefficient dump and approximation table.
    ApproxTable(ApproxArgs),
    /// Partial sums of the 1/π series.
    PiSeries(PiArgs),
    /// Runs the cross-check battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct CurveArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Series,
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "K", alias = "k")]
    K,
    #[value(name = "E", alias = "e")]
    E,
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "A", alias = "a")]
    A,
}

impl From<Target> for SeriesTarget {
    fn from(t: Target) -> Self {
        match t {
            Target::K => SeriesTarget::K,
            Target::E => SeriesTarget::E,
            Target::D => SeriesTarget::D,
            Target::A => SeriesTarget::Area,
        }
    }
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Degree of the Taylor approximation.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Kind::First)]
    pub kind: Kind,
    /// Matching point of the second approximation, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Series truncation: stop once a term drops below this.
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Number of points on [0, 2π], at least 2.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Also emit the two construction circles.
    #[arg(long)]
    pub circles: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long, default_value_t = 10)]
    pub max_degree: usize,
    /// Matching point of the second approximations, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Number of interior grid points of (0, β).
    #[arg(long, default_value_t = 9)]
    pub grid_size: usize,
    /// With CSV output, emit the coefficient dump instead of the grid table.
    #[arg(long)]
    pub coefficients: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct PiArgs {
    #[arg(long)]
    pub terms: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Loosens every check to at least this tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

/// Why a command did not produce a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Compute(Error::InvalidParameter { .. } | Error::InvalidSpec(_)) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

/// Rendered output of a command and whether its checks held.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub passed: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, passed: true }
    }
}

type CmdResult = Result<Report, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            if out.write_all(report.body.as_bytes()).is_err() {
                return 1;
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

pub fn execute(command: &Command) -> CmdResult {
    match command {
        Command::Area(a) => cmd_area(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Sample(a) => cmd_sample(a),
        Command::ApproxTable(a) => cmd_approx_table(a),
        Command::PiSeries(a) => cmd_pi_series(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn no_svg(format: OutputFormat) -> Result<(), Failure> {
    if format == OutputFormat::Svg {
        Err(Failure::Usage("svg output is only available for `sample`".into()))
    } else {
        Ok(())
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

impl CurveArgs {
    fn params(&self) -> Result<CurveParams, Failure> {
        Ok(CurveParams::new(self.a, self.b, self.w)?)
    }
}

#[derive(Debug, Serialize)]
struct AreaReport {
    total: f64,
    part1: f64,
    part2: f64,
    q: f64,
    k: f64,
    u: f64,
    gamma: f64,
    method: String,
}

fn cmd_area(args: &AreaArgs) -> CmdResult {
    no_svg(args.format)?;
    let p = args.curve.params()?;
    let d = p.derive();
    let scale = d.scale(&p);
    let (breakdown, method) = match args.method {
        Method::Exact => (area::area_exact(&p)?, "exact".to_string()),
        Method::Series => {
            if !(args.tol.is_finite() && args.tol > 0.0) {
                return Err(Failure::Usage(format!("--tol must be positive, got {}", args.tol)));
            }
            let total = area::area_series(&p, args.tol)?;
            (
                AreaBreakdown::from_total(total, scale, d.k),
                format!("series(tol={:e})", args.tol),
            )
        }
        Method::Taylor => {
            let (kind, label) = match args.kind {
                Kind::First => (ApproxKind::First, format!("taylor(first, n={})", args.n)),
                Kind::Second => (
                    ApproxKind::Second { beta: args.beta },
                    format!("taylor(second, n={}, beta={})", args.n, sig17(args.beta)),
                ),
            };
            let total = area::area_taylor(&p, args.n, kind)?;
            (AreaBreakdown::from_total(total, scale, d.k), label)
        }
    };
    let r = AreaReport {
        total: breakdown.total,
        part1: breakdown.part1,
        part2: breakdown.part2,
        q: d.q,
        k: d.k,
        u: d.u,
        gamma: d.gamma,
        method,
    };
    let fields = [
        ("total", sig17(r.total)),
        ("part1", sig17(r.part1)),
        ("part2", sig17(r.part2)),
        ("q", sig17(r.q)),
        ("k", sig17(r.k)),
        ("u", sig17(r.u)),
        ("gamma", sig17(r.gamma)),
        ("method", r.method.clone()),
    ];
    Ok(Report::ok(render_record(args.format, &fields, &r)))
}

/// One record as `key value` text, a one-row CSV, or JSON.
fn render_record<T: Serialize>(format: OutputFormat, fields: &[(&str, String)], value: &T) -> String {
    match format {
        OutputFormat::Json => json(value),
        OutputFormat::Csv => {
            let mut t = Table::new(fields.iter().map(|(k, _)| *k));
            t.push(fields.iter().map(|(_, v)| v.clone()).collect());
            t.to_csv()
        }
        _ => table::key_values(fields),
    }
}

#[derive(Debug, Serialize)]
struct BoundsReport {
    k: f64,
    scale: f64,
    area: f64,
    lower_coarse: f64,
    lower_refined: f64,
    upper_refined: f64,
    upper_coarse: f64,
    delta_q: f64,
    nabla_q: f64,
    nabla_q_piecewise: f64,
    delta_q_alt: f64,
    lower_alt: f64,
    alt_consistent: bool,
    ordering_holds: bool,
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    no_svg(args.format)?;
    let p = args.curve.params()?;
    let exact = area::area_exact(&p)?;
    let c = area::bounds(&p)?;
    let r = BoundsReport {
        k: exact.k,
        scale: exact.scale,
        area: exact.total,
        lower_coarse: c.lower_coarse,
        lower_refined: c.lower_refined,
        upper_refined: c.upper_refined,
        upper_coarse: c.upper_coarse,
        delta_q: c.delta_q,
        nabla_q: c.nabla_q,
        nabla_q_piecewise: c.nabla_q_piecewise,
        delta_q_alt: c.delta_q_alt,
        lower_alt: c.lower_alt,
        alt_consistent: c.alt_consistent(exact.total),
        ordering_holds: c.orders(exact.total),
    };
    let fields = [
        ("k", sig17(r.k)),
        ("scale", sig17(r.scale)),
        ("area", sig17(r.area)),
        ("lower_coarse", sig17(r.lower_coarse)),
        ("lower_refined", sig17(r.lower_refined)),
        ("upper_refined", sig17(r.upper_refined)),
        ("upper_coarse", sig17(r.upper_coarse)),
        ("delta_q", sig17(r.delta_q)),
        ("nabla_q", sig17(r.nabla_q)),
        ("nabla_q_piecewise", sig17(r.nabla_q_piecewise)),
        ("delta_q_alt", sig17(r.delta_q_alt)),
        ("lower_alt", sig17(r.lower_alt)),
        ("alt_consistent", r.alt_consistent.to_string()),
        ("ordering_holds", r.ordering_holds.to_string()),
    ];
    Ok(Report {
        body: render_record(args.format, &fields, &r),
        passed: r.ordering_holds,
    })
}

#[derive(Debug, Serialize)]
struct SamplePoint {
    t: f64,
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize)]
struct Circles {
    k1: Vec<PlanePoint>,
    k2: Vec<PlanePoint>,
}

#[derive(Debug, Serialize)]
struct SampleReport {
    a: f64,
    b: f64,
    w: f64,
    q: f64,
    k: f64,
    points: Vec<SamplePoint>,
    circles: Option<Circles>,
}

fn cmd_sample(args: &SampleArgs) -> CmdResult {
    let p = args.curve.params()?;
    if args.n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {}", args.n)));
    }
    let ts = curve::egg_parameters(args.n);
    let egg = curve::sample_egg(&p, args.n);
    if args.format == OutputFormat::Svg {
        return Ok(Report::ok(svg::render(&p, &egg, args.circles)));
    }
    let circles = args.circles.then(|| curve::construction_circles(&p, args.n));
    match args.format {
        OutputFormat::Json => {
            let d = p.derive();
            let r = SampleReport {
                a: p.a(),
                b: p.b(),
                w: p.w(),
                q: d.q,
                k: d.k,
                points: ts
                    .iter()
                    .zip(&egg)
                    .map(|(&t, pt)| SamplePoint { t, x: pt.x, y: pt.y })
                    .collect(),
                circles: circles.map(|(k1, k2)| Circles { k1, k2 }),
            };
            Ok(Report::ok(json(&r)))
        }
        _ => {
            let mut header = vec!["t", "x", "y"];
            if circles.is_some() {
                header.extend(["k1_x", "k1_y", "k2_x", "k2_y"]);
            }
            let mut t = Table::new(header);
            for (i, (&ti, pt)) in ts.iter().zip(&egg).enumerate() {
                let mut row = vec![sig17(ti), sig17(pt.x), sig17(pt.y)];
                if let Some((k1, k2)) = &circles {
                    row.extend([sig17(k1[i].x), sig17(k1[i].y), sig17(k2[i].x), sig17(k2[i].y)]);
                }
                t.push(row);
            }
            Ok(Report::ok(if args.format == OutputFormat::Csv {
                t.to_csv()
            } else {
                t.to_text()
            }))
        }
    }
}

#[derive(Debug, Serialize)]
struct ApproxRow {
    x: f64,
    f: f64,
    first: Vec<f64>,
    second: Vec<f64>,
    first_errors: Vec<f64>,
    second_errors: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct ApproxReport {
    target: &'static str,
    beta: f64,
    max_degree: usize,
    chain_holds: bool,
    chain_detail: String,
    /// Coefficients of `x⁰ … xⁿ` in the first approximation of degree `max_degree`.
    first_coefficients: Vec<String>,
    /// Coefficient of `xʲ` in the second approximation of degree `j`.
    second_leading: Vec<String>,
    rows: Vec<ApproxRow>,
}

const MAX_TABLE_DEGREE: usize = 200;

fn cmd_approx_table(args: &ApproxArgs) -> CmdResult {
    no_svg(args.format)?;
    if args.max_degree > MAX_TABLE_DEGREE {
        return Err(Failure::Usage(format!(
            "--max-degree must be at most {MAX_TABLE_DEGREE}"
        )));
    }
    if args.grid_size == 0 {
        return Err(Failure::Usage("--grid-size must be at least 1".into()));
    }
    let target: SeriesTarget = args.target.into();
    let n = args.max_degree;
    let beta = effective_beta(target, args.beta)?;
    let first: Vec<_> = (0..=n).map(|j| first_taylor(target, j)).collect();
    let second = (0..=n)
        .map(|j| second_taylor(target, j, beta))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let grid: Vec<f64> = (1..=args.grid_size)
        .map(|j| args.beta * j as f64 / (args.grid_size + 1) as f64)
        .filter(|&x| x <= beta)
        .collect();

    let (chain_holds, chain_detail) = match verify_chain(target, n, beta, &grid) {
        Ok(report) => (true, format!("holds, min margin {}", sig17(report.min_margin()))),
        Err(e @ Error::ChainViolation { .. }) => (false, e.to_string()),
        Err(e) => return Err(e.into()),
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let f = target.value(x)?;
        let fs = first
            .iter()
            .map(|t| t.eval(x))
            .collect::<crate::error::Result<Vec<_>>>()?;
        let ss = second
            .iter()
            .map(|t| t.eval(x))
            .collect::<crate::error::Result<Vec<_>>>()?;
        rows.push(ApproxRow {
            x,
            f,
            first_errors: fs.iter().map(|v| v - f).collect(),
            second_errors: ss.iter().map(|v| v - f).collect(),
            first: fs,
            second: ss,
        });
    }
    let report = ApproxReport {
        target: target.name(),
        beta,
        max_degree: n,
        chain_holds,
        chain_detail,
        first_coefficients: first[n].coefficients().iter().map(ToString::to_string).collect(),
        second_leading: second
            .iter()
            .map(|t| t.coefficients()[t.degree()].to_string())
            .collect(),
        rows,
    };

    let body = match args.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv if args.coefficients => coefficient_table(&report).to_csv(),
        OutputFormat::Csv => grid_table(&report).to_csv(),
        _ => {
            let mut s = table::key_values(&[
                ("target", report.target.to_string()),
                ("beta", sig17(report.beta)),
                ("max_degree", report.max_degree.to_string()),
                ("chain", report.chain_detail.clone()),
            ]);
            s.push('\n');
            s.push_str(&coefficient_table(&report).to_text());
            s.push('\n');
            s.push_str(&grid_table(&report).to_text());
            s
        }
    };
    Ok(Report {
        body,
        passed: report.chain_holds,
    })
}

fn coefficient_table(r: &ApproxReport) -> Table {
    let mut t = Table::new(["j", "first_coefficient", "second_leading"]);
    for (j, (c1, c2)) in r.first_coefficients.iter().zip(&r.second_leading).enumerate() {
        t.push(vec![j.to_string(), c1.clone(), c2.clone()]);
    }
    t
}

fn grid_table(r: &ApproxReport) -> Table {
    let n = r.max_degree;
    let mut header = vec!["x".to_string(), "f".to_string()];
    header.extend((0..=n).map(|j| format!("T{j}")));
    header.extend((0..=n).map(|j| format!("S{j}")));
    header.extend((0..=n).map(|j| format!("err_T{j}")));
    header.extend((0..=n).map(|j| format!("err_S{j}")));
    let mut t = Table::new(header);
    for row in &r.rows {
        let mut cells = vec![sig17(row.x), sig17(row.f)];
        for col in [&row.first, &row.second, &row.first_errors, &row.second_errors] {
            cells.extend(col.iter().map(|&v| sig17(v)));
        }
        t.push(cells);
    }
    t
}

#[derive(Debug, Serialize)]
struct PiReport {
    terms: usize,
    partial_sum: f64,
    reference: &'static str,
    error: f64,
    last_term: f64,
}

fn cmd_pi_series(args: &PiArgs) -> CmdResult {
    no_svg(args.format)?;
    if args.terms == 0 {
        return Err(Failure::Usage("--terms must be at least 1".into()));
    }
    let (partial, last) = area::inv_pi_partial_with_last(args.terms)?;
    let reference: f64 = INV_PI_REFERENCE.parse().expect("reference literal");
    let r = PiReport {
        terms: args.terms,
        partial_sum: partial,
        reference: INV_PI_REFERENCE,
        error: (partial - reference).abs(),
        last_term: last,
    };
    let fields = [
        ("terms", r.terms.to_string()),
        ("partial_sum", sig17(r.partial_sum)),
        ("reference", r.reference.to_string()),
        ("error", sig17(r.error)),
        ("last_term", sig17(r.last_term)),
    ];
    Ok(Report::ok(render_record(args.format, &fields, &r)))
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    passed: bool,
    checks: Vec<verify::Check>,
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    no_svg(args.format)?;
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let checks = verify::run(args.tol);
    let passed = checks.iter().all(|c| c.passed);
    let body = match args.format {
        OutputFormat::Json => json(&VerifyReport { passed, checks }),
        format => {
            let mut t = Table::new(["status", "check", "margin", "tolerance", "detail"]);
            for c in &checks {
                t.push(vec![
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.name.to_string(),
                    sig17(c.margin),
                    sig17(c.tolerance),
                    c.detail.clone(),
                ]);
            }
            if format == OutputFormat::Csv {
                t.to_csv()
            } else {
                t.to_text()
            }
        }
    };
    Ok(Report { body, passed })
}
