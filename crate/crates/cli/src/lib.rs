//! Command-line front-end: argument parsing, configuration and output.
//!
//! [`run`] is pure with respect to the process: arguments and the environment
//! lookup are passed in and the rendered streams come back in an [`Outcome`].

pub mod format;

use bm3_core::batch::Execution;
use bm3_core::bingles::{bingle_chart, bingle_from_invariants, invariants, reciprocal_bingle, xi_from_invariants};
use bm3_core::bispace::biproject;
use bm3_core::error::Error;
use bm3_core::geodesic::{q2_principal, Geodesic, Sign, UnitPoint};
use bm3_core::poly::Poly3;
use bm3_core::quad::QuadratureCfg;
use bm3_core::relative::{cfh_branch, psi, Branch, Component};
use bm3_core::sampling::{sample_circle, sample_geodesic, sample_mesh};
use bm3_core::selftest::{self, Ctx, SelftestReport, DEFAULT_SEED};
use bm3_core::tringle::{compare_closed, tringle, tringle_closed, tringle_pencil_any, tringle_quadrature, Agreement};
use clap::{Args, Parser, Subcommand, ValueEnum};

use format::Json;

pub const ENV_ABS_TOL: &str = "BM3_ABS_TOL";
pub const ENV_REL_TOL: &str = "BM3_REL_TOL";
pub const ENV_MAX_DEPTH: &str = "BM3_MAX_DEPTH";

#[derive(Debug, Parser)]
#[command(name = "bm3", version, about = "Berwald-Moor geometry of 3-numbers: bingles, tringles, extremals")]
struct Cli {
    #[command(flatten)]
    quad: QuadArgs,
    /// Output format; scalar verbs default to json, curve verbs to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Absolute quadrature tolerance [env: BM3_ABS_TOL]
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance [env: BM3_REL_TOL]
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Maximum bisection depth [env: BM3_MAX_DEPTH]
    #[arg(long, global = true)]
    max_depth: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Log-chart shoelace formula
    Shoelace,
    /// Nested quadrature in the original chart
    Quadrature,
    /// Printed closed formula (signed)
    Closed,
    /// Pencil integral from a vertex
    Pencil,
    /// Closed formula against the shoelace value
    Compare,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Quasi-norm |a1 a2 a3|^(1/3)
    Norm {
        #[arg(num_args = 3, required = true, allow_negative_numbers = true, value_names = ["A1", "A2", "A3"])]
        a: Vec<f64>,
    },
    /// Exponential angles of a first-octant vector
    Biproject {
        #[arg(num_args = 3, required = true, allow_negative_numbers = true, value_names = ["A1", "A2", "A3"])]
        a: Vec<f64>,
    },
    /// Reciprocal bingle of two first-octant vectors
    Bingle {
        #[arg(num_args = 6, required = true, allow_negative_numbers = true, value_names = ["A1", "A2", "A3", "B1", "B2", "B3"])]
        ab: Vec<f64>,
    },
    /// Relative bingle of B seen from A
    Psi {
        #[arg(num_args = 6, required = true, allow_negative_numbers = true, value_names = ["A1", "A2", "A3", "B1", "B2", "B3"])]
        ab: Vec<f64>,
    },
    /// Inverse of the relative bingle on a unit circle
    Cfh {
        #[arg(allow_negative_numbers = true)]
        psi: f64,
        #[arg(long, value_enum, default_value = "upper")]
        branch: BranchArg,
    },
    /// Conformal invariants of a pair and the ratios they determine
    Invariants {
        #[arg(num_args = 6, required = true, allow_negative_numbers = true, value_names = ["A1", "A2", "A3", "B1", "B2", "B3"])]
        ab: Vec<f64>,
    },
    /// Tringle (metric area) of three first-octant vectors
    Tringle {
        #[arg(num_args = 9, required = true, allow_negative_numbers = true,
              value_names = ["A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3"])]
        abc: Vec<f64>,
        #[arg(long, value_enum, default_value = "shoelace")]
        method: Method,
    },
    /// Sample an extremal of the unit indicatrix
    Geodesic {
        /// Base point chart coordinates X1 X2
        #[arg(long, num_args = 2, value_names = ["X1", "X2"], allow_negative_numbers = true, default_values_t = [1.0, 1.0])]
        base: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        q1: f64,
        /// Second exponent; defaults to the principal solution of the constraint
        #[arg(long, allow_negative_numbers = true)]
        q2: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        from: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        to: f64,
        #[arg(short, long, default_value_t = 101)]
        n: usize,
        /// Map coordinates by x -> tanh(x ln3 / 2)
        #[arg(long)]
        compact: bool,
    },
    /// Sample a unit-circle component about (1,1,1)
    Circle {
        /// Component label such as 3+ or 1-
        #[arg(long, default_value = "3+")]
        component: String,
        #[arg(long, default_value_t = 0.1)]
        from: f64,
        #[arg(long, default_value_t = 10.0)]
        to: f64,
        #[arg(short, long, default_value_t = 101)]
        n: usize,
        #[arg(long)]
        compact: bool,
    },
    /// Triangle-strip mesh of the indicatrix over a log-uniform grid
    Mesh {
        /// Grid half-width in log coordinates
        #[arg(long, default_value_t = 3.0)]
        extent: f64,
        #[arg(short, long, default_value_t = 32)]
        n: usize,
        #[arg(long)]
        compact: bool,
    },
    /// Run the seeded identity suites
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Evaluate cases on the calling thread only
        #[arg(long)]
        sequential: bool,
    },
}

/// Exit status and rendered streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of an invocation: exit code 2 for input problems, 1 for numerical ones.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure { code: 2, kind: kind.into(), message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_numerical() { 1 } else { 2 }, kind: e.kind().into(), message: e.to_string() }
    }
}

enum Output {
    Scalar { value: Json, meta: Json },
    Table { columns: Vec<&'static str>, rows: Vec<Vec<Json>>, meta: Json },
}

pub fn run<I, S>(args: I, env: impl Fn(&str) -> Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => failure(Failure::usage("ParseError", text.trim_end())),
            };
        }
    };
    match execute(&cli, &env) {
        Ok((code, out)) => Outcome { code, stdout: render(out, cli.format), stderr: String::new() },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    let body = Json::obj([("error", Json::obj([("kind", Json::str(f.kind)), ("message", Json::str(f.message))]))]);
    Outcome { code: f.code, stdout: String::new(), stderr: body.render() + "\n" }
}

fn render(out: Output, format: Option<Format>) -> String {
    match out {
        Output::Scalar { value, meta } => match format.unwrap_or(Format::Json) {
            Format::Json => Json::obj([("value", value), ("meta", meta)]).render() + "\n",
            Format::Csv => match value {
                Json::Arr(items) => {
                    let names: Vec<String> = (1..=items.len()).map(|i| format!("value{i}")).collect();
                    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
                    format::csv(&cols, &[items])
                }
                v => format::csv(&["value"], &[vec![v]]),
            },
        },
        Output::Table { columns, rows, meta } => match format.unwrap_or(Format::Csv) {
            Format::Csv => format::csv(&columns, &rows),
            Format::Json => {
                let value = Json::obj([
                    ("columns", Json::Arr(columns.iter().map(|c| Json::str(*c)).collect())),
                    ("rows", Json::Arr(rows.into_iter().map(Json::Arr).collect())),
                ]);
                Json::obj([("value", value), ("meta", meta)]).render() + "\n"
            }
        },
    }
}

/// Flag, then environment variable, then default.
fn layered<T: std::str::FromStr>(
    flag: Option<T>,
    name: &str,
    default: T,
    env: &dyn Fn(&str) -> Option<String>,
) -> Result<T, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match env(name) {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::usage("InvalidEnvironment", format!("{name}={text:?} is not a valid value"))),
        None => Ok(default),
    }
}

fn quadrature(q: &QuadArgs, env: &dyn Fn(&str) -> Option<String>) -> Result<QuadratureCfg, Failure> {
    let d = QuadratureCfg::default();
    let cfg = QuadratureCfg::new(
        layered(q.abs_tol, ENV_ABS_TOL, d.abs_tol, env)?,
        layered(q.rel_tol, ENV_REL_TOL, d.rel_tol, env)?,
        layered(q.max_depth, ENV_MAX_DEPTH, d.max_depth, env)?,
    )?;
    Ok(cfg)
}

fn cfg_fields(cfg: &QuadratureCfg) -> [(&'static str, Json); 3] {
    [
        ("abs_tol", Json::Num(cfg.abs_tol)),
        ("rel_tol", Json::Num(cfg.rel_tol)),
        ("max_depth", Json::Int(i64::from(cfg.max_depth))),
    ]
}

fn poly(v: &[f64]) -> Poly3 {
    Poly3::new(v[0], v[1], v[2])
}

fn finite(v: &[f64]) -> Result<(), Failure> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite.into())
    }
}

fn parse_component(text: &str) -> Result<Component, Failure> {
    let bad = || Failure::usage("InvalidComponent", format!("component {text:?} is not one of 1+ 1- 2+ 2- 3+ 3-"));
    let mut chars = text.trim().chars();
    let index = match chars.next() {
        Some(c @ '1'..='3') => c as u8 - b'0',
        _ => return Err(bad()),
    };
    let sign = match (chars.next(), chars.next()) {
        (Some('+'), None) => Sign::Plus,
        (Some('-'), None) => Sign::Minus,
        _ => return Err(bad()),
    };
    Ok(Component { index, sign })
}

fn pair_meta(ab: &[f64]) -> [(&'static str, Json); 2] {
    [("a", Json::nums(&ab[..3])), ("b", Json::nums(&ab[3..]))]
}

fn execute(cli: &Cli, env: &dyn Fn(&str) -> Option<String>) -> Result<(i32, Output), Failure> {
    let cfg = quadrature(&cli.quad, env)?;
    let scalar = |value: Json, meta: Json| Ok((0, Output::Scalar { value, meta }));
    match &cli.verb {
        Verb::Norm { a } => {
            finite(a)?;
            scalar(Json::Num(poly(a).norm()), Json::obj([("verb", Json::str("norm")), ("a", Json::nums(a))]))
        }
        Verb::Biproject { a } => {
            let p = poly(a);
            let u = biproject(&p)?;
            scalar(
                Json::nums(&u.components()),
                Json::obj([("verb", Json::str("biproject")), ("a", Json::nums(a)), ("norm", Json::Num(p.norm()))]),
            )
        }
        Verb::Bingle { ab } => {
            let (a, b) = (poly(&ab[..3]), poly(&ab[3..]));
            let phi = reciprocal_bingle(&a, &b)?;
            let chart = bingle_chart(&a, &b)?;
            let mut meta = vec![("verb", Json::str("bingle"))];
            meta.extend(pair_meta(ab));
            meta.push(("signed", Json::Num(chart)));
            scalar(Json::Num(phi), Json::obj(meta))
        }
        Verb::Psi { ab } => {
            let r = psi(&poly(&ab[..3]), &poly(&ab[3..]), &cfg)?;
            let mut meta = vec![("verb", Json::str("psi"))];
            meta.extend(pair_meta(ab));
            meta.push(("component", Json::str(r.component.to_string())));
            meta.push(("param", Json::Num(r.param)));
            meta.extend(cfg_fields(&cfg));
            scalar(Json::Num(r.value), Json::obj(meta))
        }
        Verb::Cfh { psi, branch } => {
            let (b, name) = match branch {
                BranchArg::Upper => (Branch::Upper, "upper"),
                BranchArg::Lower => (Branch::Lower, "lower"),
            };
            let x = cfh_branch(*psi, &cfg, b)?;
            let mut meta = vec![("verb", Json::str("cfh")), ("psi", Json::Num(*psi)), ("branch", Json::str(name))];
            meta.extend(cfg_fields(&cfg));
            scalar(Json::Num(x), Json::obj(meta))
        }
        Verb::Invariants { ab } => {
            let inv = invariants(&poly(&ab[..3]), &poly(&ab[3..]))?;
            let xi = xi_from_invariants(&inv)?;
            let phi = bingle_from_invariants(&inv)?;
            let mut meta = vec![("verb", Json::str("invariants"))];
            meta.extend(pair_meta(ab));
            meta.push(("xi", Json::nums(&xi)));
            meta.push(("bingle", Json::Num(phi)));
            scalar(Json::nums(&[inv.i1, inv.i2, inv.i3]), Json::obj(meta))
        }
        Verb::Tringle { abc, method } => tringle_verb(abc, *method, &cfg),
        Verb::Geodesic { base, q1, q2, from, to, n, compact } => {
            let p = UnitPoint::from_chart(base[0], base[1])?;
            let q2 = match q2 {
                Some(q) => *q,
                None => q2_principal(*q1)?,
            };
            let (a1, a2) = p.chart();
            let g = Geodesic::new(a1, a2, *q1, q2)?;
            let rows = sample_geodesic(&g, *from, *to, *n, *compact)?;
            let meta = Json::obj([
                ("verb", Json::str("geodesic")),
                ("base", Json::nums(base)),
                ("q1", Json::Num(*q1)),
                ("q2", Json::Num(q2)),
                ("compact", Json::Bool(*compact)),
            ]);
            let rows = rows.iter().map(|r| r.iter().map(|&x| Json::Num(x)).collect()).collect();
            Ok((0, Output::Table { columns: vec!["s", "x1", "x2", "x3"], rows, meta }))
        }
        Verb::Circle { component, from, to, n, compact } => {
            let c = parse_component(component)?;
            let rows = sample_circle(c, *from, *to, *n, *compact)?;
            let meta = Json::obj([
                ("verb", Json::str("circle")),
                ("component", Json::str(c.to_string())),
                ("compact", Json::Bool(*compact)),
            ]);
            let rows = rows
                .iter()
                .map(|(xi, x)| vec![Json::Num(*xi), Json::Num(x[0]), Json::Num(x[1]), Json::Num(x[2])])
                .collect();
            Ok((0, Output::Table { columns: vec!["xi", "x1", "x2", "x3"], rows, meta }))
        }
        Verb::Mesh { extent, n, compact } => {
            let verts = sample_mesh(*extent, *n, *compact, Execution::Parallel)?;
            let meta = Json::obj([
                ("verb", Json::str("mesh")),
                ("extent", Json::Num(*extent)),
                ("n", Json::Int(*n as i64)),
                ("compact", Json::Bool(*compact)),
            ]);
            let rows = verts
                .iter()
                .map(|v| {
                    vec![
                        Json::Int(v.strip as i64),
                        Json::Num(v.u1),
                        Json::Num(v.u2),
                        Json::Num(v.x[0]),
                        Json::Num(v.x[1]),
                        Json::Num(v.x[2]),
                    ]
                })
                .collect();
            Ok((0, Output::Table { columns: vec!["strip", "u1", "u2", "x1", "x2", "x3"], rows, meta }))
        }
        Verb::Selftest { seed, sequential } => {
            let mode = if *sequential { Execution::Sequential } else { Execution::Parallel };
            let report = selftest::run(&Ctx { seed: *seed, cfg, mode });
            Ok(selftest_output(&report, &cfg))
        }
    }
}

fn tringle_verb(abc: &[f64], method: Method, cfg: &QuadratureCfg) -> Result<(i32, Output), Failure> {
    let [a, b, c] = [poly(&abc[..3]), poly(&abc[3..6]), poly(&abc[6..])];
    let name = method.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut meta = vec![
        ("verb", Json::str("tringle")),
        ("a", Json::nums(&abc[..3])),
        ("b", Json::nums(&abc[3..6])),
        ("c", Json::nums(&abc[6..])),
        ("method", Json::str(name)),
    ];
    let value = match method {
        Method::Shoelace => tringle(&a, &b, &c)?,
        Method::Quadrature => tringle_quadrature(&a, &b, &c, cfg)?,
        Method::Closed => tringle_closed(&a, &b, &c, cfg)?,
        Method::Pencil => tringle_pencil_any(&a, &b, &c, cfg)
            .ok_or_else(|| Failure::from(Error::DomainError("no vertex admits the pencil integral".into())))?,
        Method::Compare => {
            let cmp = compare_closed(&a, &b, &c, cfg)?;
            let opt = |x: Option<f64>| x.map_or(Json::Null, Json::Num);
            meta.push(("closed", opt(cmp.closed)));
            meta.push(("pencil", opt(cmp.pencil)));
            meta.push(("rel_diff", opt(cmp.rel_diff)));
            let class = match cmp.class {
                Agreement::Agree => "agree",
                Agreement::Disagree => "disagree",
            };
            meta.push(("class", Json::str(class)));
            meta.push(("note", cmp.note.map_or(Json::Null, Json::Str)));
            cmp.definitional
        }
    };
    if matches!(method, Method::Quadrature | Method::Closed | Method::Pencil | Method::Compare) {
        meta.extend(cfg_fields(cfg));
    }
    Ok((0, Output::Scalar { value: Json::Num(value), meta: Json::obj(meta) }))
}

fn selftest_output(report: &SelftestReport, cfg: &QuadratureCfg) -> (i32, Output) {
    let suites: Vec<Json> = report
        .suites
        .iter()
        .map(|s| {
            Json::obj([
                ("name", Json::str(s.name)),
                ("module", Json::str(s.module)),
                ("passed", Json::Bool(s.passed)),
                ("cases", Json::Int(s.cases as i64)),
                ("residual", Json::Num(s.residual)),
                ("bound", Json::str(s.bound.symbol())),
                ("tolerance", Json::Num(s.tolerance)),
                ("extra", Json::obj(s.extra.iter().map(|(k, v)| (*k, Json::Num(*v))))),
            ])
        })
        .collect();
    let failed = report.suites.iter().filter(|s| !s.passed).count();
    let mut meta = vec![
        ("verb", Json::str("selftest")),
        ("seed", Json::Int(report.seed as i64)),
        ("suites_run", Json::Int(report.suites.len() as i64)),
        ("suites_failed", Json::Int(failed as i64)),
    ];
    meta.extend(cfg_fields(cfg));
    meta.push(("suites", Json::Arr(suites)));
    let code = if report.passed() { 0 } else { 1 };
    (code, Output::Scalar { value: Json::Bool(report.passed()), meta: Json::obj(meta) })
}
