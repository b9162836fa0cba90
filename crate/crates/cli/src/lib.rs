//! Command-line front end for `imagearc`.
//!
//! [`run`] takes the argument vector and two sinks and returns the process
//! exit code: 0 on success or PASS, 1 on FAIL or a numerical failure, 2 when
//! a hypothesis does not hold or the numerics are inconclusive, 3 on usage
//! and parse errors. Data goes to stdout (or `--output`), diagnostics to
//! stderr.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use imagearc::funcspec::{self, GRAMMAR};
use imagearc::geodesics::{area, growth_csv, length_profile, GrowthSample, QuadConfig, RadialArc};
use imagearc::maps::MapExpr;
use imagearc::metrics::{deriv_norm, MetricId, SpherePoint};
use imagearc::nevanlinna::{
    fatou_decompose, fatou_decompose_auto, origin_identity_t, uniform_characteristic_delta,
    uniform_characteristic_delta_pair, CharacteristicCurve, Decomposition,
};
use imagearc::verifier::{
    alpha_growth_check, check_area_derivative_bound, check_localized_bound, check_spherical_bound,
    check_uniform_char_length_bound, default_probe_grid, length_trend, probe_grid, scenario_annulus,
    scenario_blaschke_quotient, scenario_symmetric_blaschke, GrowthFit, Status, VerdictReport,
};
use imagearc::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INAPPLICABLE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

fn grammar_help() -> String {
    format!("Map expressions (--func, --f0, --finf) use this grammar:\n\n{GRAMMAR}")
}

#[derive(Parser, Debug)]
#[command(
    name = "imagearc",
    version,
    about = "Derivative norms, image lengths and areas, and characteristics of analytic maps",
    after_help = grammar_help()
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Absolute quadrature tolerance (default depends on the command).
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance (default depends on the command).
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Write data to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Print CSV headers and summary comments.
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    header: Switch,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Switch {
    On,
    Off,
}

/// Target metric. `H` is the hyperbolic metric of the map's codomain, the
/// half-plane when the map lands there and the disc otherwise.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    #[value(name = "E", alias = "e")]
    Euclidean,
    #[value(name = "H", alias = "h")]
    Hyperbolic,
    #[value(name = "S", alias = "s")]
    Spherical,
}

impl Target {
    fn metric(self, f: &MapExpr) -> MetricId {
        match self {
            Target::Euclidean => MetricId::Euclidean,
            Target::Spherical => MetricId::Spherical,
            Target::Hyperbolic if f.codomain() == MetricId::HyperbolicHalfPlane => MetricId::HyperbolicHalfPlane,
            Target::Hyperbolic => MetricId::HyperbolicDisc,
        }
    }
}

#[derive(Args, Debug)]
struct Ray {
    /// Angle of the disc ray.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    /// Real-part offset of the half-plane ray `base + i e^t`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    base: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value, derivative and derivative norms at a point.
    Eval {
        #[arg(long)]
        func: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Image length profile `rho,length` along a ray.
    Length {
        #[arg(long)]
        func: String,
        #[command(flatten)]
        ray: Ray,
        #[arg(long)]
        rho_max: f64,
        #[arg(long, value_enum)]
        target: Target,
        /// Number of equispaced radii in (0, rho_max].
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Image area of the hyperbolic ball of radius `rho` (`inf` allowed).
    Area {
        #[arg(long)]
        func: String,
        #[arg(long)]
        rho: f64,
        #[arg(long, value_enum)]
        target: Target,
    },
    /// Characteristic curve `r,S,T`.
    Nevanlinna {
        #[arg(long)]
        func: String,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
    },
    /// Quotient decomposition manifest and its identities.
    Decompose {
        #[arg(long)]
        func: String,
        /// Boundary samples, a power of two; chosen automatically if absent.
        #[arg(long)]
        boundary_samples: Option<usize>,
    },
    /// Run one inequality check and print its verdict line.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Run a named construction and print its length profile.
    Scenario {
        #[command(subcommand)]
        which: Scenario,
    },
}

#[derive(Args, Debug)]
struct Trend {
    #[arg(long)]
    func: String,
    #[command(flatten)]
    ray: Ray,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,12")]
    rhos: Vec<f64>,
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Derivative norm against the image area.
    Prop21 {
        #[arg(long)]
        func: String,
        #[arg(long, value_enum, default_value_t = Target::Euclidean)]
        target: Target,
    },
    /// The same bound localized to a hyperbolic ball.
    Prop22 {
        #[arg(long)]
        func: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Spherical derivative against the spherical image area.
    Prop23 {
        #[arg(long)]
        func: String,
    },
    /// Euclidean `L/√ρ` trend.
    Keogh(Trend),
    /// Hyperbolic `L/√ρ` trend.
    Thm32(Trend),
    /// Spherical `L/√ρ` trend.
    Thm33(Trend),
    /// Uniform length bound for a bounded pair `f₀/f_∞`.
    Thm43 {
        /// Decompose this map; alternative to --f0/--finf.
        #[arg(long, conflicts_with_all = ["f0", "finf"], required_unless_present_all = ["f0", "finf"])]
        func: Option<String>,
        #[arg(long, requires = "finf")]
        f0: Option<String>,
        #[arg(long, requires = "f0")]
        finf: Option<String>,
        /// Lower bound on the pair norm; measured on the probe grid if absent.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        rho_max: f64,
        #[arg(long, default_value_t = 8)]
        arcs: usize,
    },
    /// Area growth against the `α`-weighted tail integral.
    Alpha {
        #[arg(long)]
        func: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
}

#[derive(Subcommand, Debug)]
enum Scenario {
    /// Universal cover of the annulus `1/R < |w| < R`.
    Annulus {
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 40.0)]
        rho_max: f64,
    },
    /// Product with zeros `2ⁿ i`, `|n| ≤ N`.
    SymmetricBlaschke {
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 20.0)]
        rho_max: f64,
    },
    /// `B(z + 1)/B(z − 1)` with zeros `i n²`.
    BlaschkeQuotient {
        #[arg(long = "n-max", default_value_t = 40)]
        n_max: usize,
    },
}

/// A failed run: exit code and message for stderr.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Composition { .. }
            | Error::Argument(_)
            | Error::Construction(_)
            | Error::Domain { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<i32, Failure>;

/// Collected output of a command.
struct Sink {
    data: String,
    diag: String,
    header: bool,
}

impl Sink {
    fn data(&mut self, s: &str) {
        self.data.push_str(s);
    }

    fn line(&mut self, s: &str) {
        self.data.push_str(s);
        self.data.push('\n');
    }

    fn diag(&mut self, s: &str) {
        self.diag.push_str(s);
        self.diag.push('\n');
    }

    /// Summary text: a `#` comment in the data when headers are on, stderr
    /// otherwise, so piped CSV stays clean.
    fn summary(&mut self, s: &str) {
        if self.header {
            self.line(&format!("# {s}"));
        } else {
            self.diag(s);
        }
    }
}

fn parse_func(src: &str) -> Result<MapExpr, Failure> {
    funcspec::parse(src).map_err(|e| match e {
        Error::Parse(p) => {
            let col = if src.is_char_boundary(p.position.min(src.len())) {
                src[..p.position.min(src.len())].chars().count()
            } else {
                p.position
            };
            Failure { code: EXIT_USAGE, message: format!("{p}\n  {src}\n  {}^", " ".repeat(col)) }
        }
        other => other.into(),
    })
}

fn parse_point(src: &str) -> Result<Complex64, Failure> {
    funcspec::parse_complex(src).map_err(|e| Failure { code: EXIT_USAGE, message: format!("--at/--base: {e}") })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::Inapplicable | Status::Inconclusive => EXIT_INAPPLICABLE,
    }
}

fn verdict(out: &mut Sink, report: &VerdictReport) -> i32 {
    out.line(&report.line());
    for d in &report.details {
        out.diag(d);
    }
    status_code(report.status)
}

fn ray(f: &MapExpr, ray: &Ray, rho_max: f64) -> Result<RadialArc, Failure> {
    Ok(match f.domain() {
        MetricId::HyperbolicHalfPlane => RadialArc::half_plane(parse_point(&ray.base)?, rho_max)?,
        _ => RadialArc::disc(ray.theta, rho_max)?,
    })
}

fn tolerances(global: &Global, base: QuadConfig) -> Result<QuadConfig, Failure> {
    Ok(QuadConfig::new(global.abs_tol.unwrap_or(base.abs_tol), global.rel_tol.unwrap_or(base.rel_tol), base.max_depth)?)
}

fn fit_summary(out: &mut Sink, fit: &GrowthFit) {
    out.summary(&format!(
        "fit model={:?} exponent={} constant={} residual={}",
        fit.model,
        num(fit.exponent),
        num(fit.constant),
        num(fit.residual)
    ));
}

fn samples_csv(out: &mut Sink, samples: &[GrowthSample]) {
    let csv = growth_csv(samples, out.header);
    out.data(&csv);
}

fn eval(out: &mut Sink, func: &str, at: &str) -> Outcome {
    let f = parse_func(func)?;
    let z = parse_point(at)?;
    let jet = f.evaluate(z)?;
    match jet.value {
        SpherePoint::Finite(v) => {
            out.line(&format!("value,{},{}", num(v.re), num(v.im)));
            out.line(&format!("derivative,{},{}", num(jet.derivative.re), num(jet.derivative.im)));
        }
        SpherePoint::Infinity => {
            out.line("value,inf");
            out.line(&format!("reciprocal_derivative,{},{}", num(jet.derivative.re), num(jet.derivative.im)));
        }
    }
    for (label, target) in [
        ("norm_euclidean", MetricId::Euclidean),
        ("norm_hyperbolic_disc", MetricId::HyperbolicDisc),
        ("norm_hyperbolic_half_plane", MetricId::HyperbolicHalfPlane),
        ("norm_spherical", MetricId::Spherical),
    ] {
        match deriv_norm(&f, z, target) {
            Ok(n) => out.line(&format!("{label},{}", num(n))),
            Err(e) => {
                out.line(&format!("{label},nan"));
                out.diag(&format!("{label}: {e}"));
            }
        }
    }
    Ok(EXIT_OK)
}

fn length(out: &mut Sink, g: &Global, func: &str, r: &Ray, rho_max: f64, target: Target, samples: usize) -> Outcome {
    if samples < 2 {
        return Err(Error::Argument(format!("--samples {samples} must be at least 2")).into());
    }
    let f = parse_func(func)?;
    let arc = ray(&f, r, rho_max)?;
    let rhos: Vec<f64> = (1..=samples).map(|k| rho_max * k as f64 / samples as f64).collect();
    let q = tolerances(g, QuadConfig::lengths())?;
    let profile = length_profile(&f, &arc, &rhos, target.metric(&f), &q)?;
    samples_csv(out, &profile);
    Ok(EXIT_OK)
}

fn area_cmd(out: &mut Sink, g: &Global, func: &str, rho: f64, target: Target) -> Outcome {
    let f = parse_func(func)?;
    let q = tolerances(g, QuadConfig::areas())?;
    let est = match area(&f, rho, target.metric(&f), &q) {
        Ok(est) => est,
        Err(Error::Divergence { partial }) => {
            out.diag(&format!("area diverges; partial value {}", num(partial)));
            return Ok(EXIT_INAPPLICABLE);
        }
        Err(e) => return Err(e.into()),
    };
    if out.header {
        out.line("rho,area,error_bound");
    }
    out.line(&format!("{},{},{}", num(rho), num(est.value), num(est.error_bound)));
    Ok(EXIT_OK)
}

fn nevanlinna(out: &mut Sink, g: &Global, func: &str, radii: &[f64]) -> Outcome {
    let f = parse_func(func)?;
    let q = tolerances(g, QuadConfig::areas())?;
    let curve = CharacteristicCurve::compute(&f, radii, &q)?;
    let csv = curve.to_csv(out.header);
    out.data(&csv);
    Ok(EXIT_OK)
}

/// Largest residual allowed in the decomposition identities.
const IDENTITY_TOL: f64 = 1e-6;

fn decompose(out: &mut Sink, func: &str, m: Option<usize>) -> Outcome {
    let f = parse_func(func)?;
    let dec = match m {
        Some(m) => fatou_decompose(&f, m)?,
        None => fatou_decompose_auto(&f)?,
    };
    out.data(&dec.to_manifest());
    let (boundary, quotient, origin) = identities(&f, &dec)?;
    out.line(&format!("identity boundary_norm {}", num(boundary)));
    out.line(&format!("identity quotient {}", num(quotient)));
    out.line(&format!("identity origin {}", num(origin)));
    let ok = boundary <= IDENTITY_TOL && quotient <= IDENTITY_TOL && origin <= IDENTITY_TOL;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

/// Residuals of `|F|² = 1` on the circle, `f₀/f_∞ = f` inside, and
/// `|F(0)|² = exp(−2T(1))`.
fn identities(f: &MapExpr, dec: &Decomposition) -> Result<(f64, f64, f64), Error> {
    let mut boundary = 0.0f64;
    for k in 0..256 {
        let zeta = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / 256.0);
        boundary = boundary.max((dec.norm_at(zeta)?.powi(2) - 1.0).abs());
    }
    let mut quotient = 0.0f64;
    for z in probe_grid(5, 20, 6.0) {
        if let (Some(want), Some(got)) = (f.evaluate(z)?.value.finite(), dec.quotient(z)?.finite()) {
            quotient = quotient.max((got - want).norm() / want.norm().max(1e-300));
        }
    }
    let t1 = origin_identity_t(f, dec.boundary_samples)?;
    let origin = (dec.norm_at(Complex64::new(0.0, 0.0))?.powi(2) - (-2.0 * t1).exp()).abs();
    Ok((boundary, quotient, origin))
}

fn trend(out: &mut Sink, g: &Global, t: &Trend, target: MetricId, name: &str) -> Outcome {
    let f = parse_func(&t.func)?;
    let last = t.rhos.last().copied().unwrap_or(0.0);
    let arc = ray(&f, &t.ray, last)?;
    let q = tolerances(g, QuadConfig::lengths())?;
    let trend = length_trend(&f, &arc, &t.rhos, target, &q)?;
    Ok(verdict(out, &trend.verdict(name)))
}

fn verify(out: &mut Sink, g: &Global, check: &Check) -> Outcome {
    match check {
        Check::Prop21 { func, target } => {
            let f = parse_func(func)?;
            let q = tolerances(g, QuadConfig::areas())?;
            let r = check_area_derivative_bound(&f, target.metric(&f), &default_probe_grid(), &q)?;
            Ok(verdict(out, &r))
        }
        Check::Prop22 { func, at, delta } => {
            let f = parse_func(func)?;
            let q = tolerances(g, QuadConfig::areas())?;
            Ok(verdict(out, &check_localized_bound(&f, parse_point(at)?, *delta, &q)?))
        }
        Check::Prop23 { func } => {
            let f = parse_func(func)?;
            let q = tolerances(g, QuadConfig::areas())?;
            Ok(verdict(out, &check_spherical_bound(&f, &default_probe_grid(), &q)?))
        }
        Check::Keogh(t) => trend(out, g, t, MetricId::Euclidean, "euclidean_length_trend"),
        Check::Thm32(t) => trend(out, g, t, MetricId::HyperbolicDisc, "hyperbolic_length_trend"),
        Check::Thm33(t) => trend(out, g, t, MetricId::Spherical, "spherical_length_trend"),
        Check::Thm43 { func, f0, finf, delta, rho_max, arcs } => {
            if *arcs == 0 {
                return Err(Error::Argument("--arcs must be positive".into()).into());
            }
            let q = tolerances(g, QuadConfig::lengths())?;
            let grid = default_probe_grid();
            let rays: Vec<RadialArc> = (0..*arcs)
                .map(|k| RadialArc::disc(2.0 * PI * k as f64 / *arcs as f64, *rho_max))
                .collect::<Result<_, _>>()?;
            let report = match (func, f0, finf) {
                (Some(func), _, _) => {
                    let dec = fatou_decompose_auto(&parse_func(func)?)?;
                    let d = match delta {
                        Some(d) => *d,
                        None => uniform_characteristic_delta(&dec, &grid)?,
                    };
                    out.diag(&format!("delta {}", num(d)));
                    check_uniform_char_length_bound(&dec, d, &rays, &grid, &q)?
                }
                (None, Some(a), Some(b)) => {
                    let pair = (parse_func(a)?, parse_func(b)?);
                    let d = match delta {
                        Some(d) => *d,
                        None => uniform_characteristic_delta_pair(&pair.0, &pair.1, &grid)?,
                    };
                    out.diag(&format!("delta {}", num(d)));
                    check_uniform_char_length_bound(&pair, d, &rays, &grid, &q)?
                }
                _ => return Err(Error::Argument("give --func or both --f0 and --finf".into()).into()),
            };
            Ok(verdict(out, &report))
        }
        Check::Alpha { func, alpha, delta } => {
            let f = parse_func(func)?;
            let q = tolerances(g, QuadConfig::areas())?;
            Ok(verdict(out, &alpha_growth_check(&f, *alpha, *delta, &q)?))
        }
    }
}

/// Exponent window and periodicity tolerance for the annulus cover.
const ANNULUS_EXPONENT: (f64, f64) = (0.95, 1.05);
const ANNULUS_PERIODICITY: f64 = 1e-8;

fn scenario(out: &mut Sink, g: &Global, which: &Scenario) -> Outcome {
    let q = tolerances(g, QuadConfig::lengths())?;
    match which {
        Scenario::Annulus { r, rho_max } => {
            let rep = scenario_annulus(*r, *rho_max, &q)?;
            samples_csv(out, &rep.samples);
            fit_summary(out, &rep.fit);
            out.summary(&format!(
                "period={} circuit_length={} periodicity_residual={}",
                num(rep.period),
                num(rep.circuit_length),
                num(rep.periodicity_residual)
            ));
            let ok = (ANNULUS_EXPONENT.0..=ANNULUS_EXPONENT.1).contains(&rep.fit.exponent)
                && rep.periodicity_residual <= ANNULUS_PERIODICITY;
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }
        Scenario::SymmetricBlaschke { n, rho_max } => {
            let rep = scenario_symmetric_blaschke(*n, *rho_max, &q)?;
            samples_csv(out, &rep.samples);
            fit_summary(out, &rep.fit);
            out.summary(&rep.verdict.line());
            Ok(status_code(rep.verdict.status))
        }
        Scenario::BlaschkeQuotient { n_max } => {
            let rep = scenario_blaschke_quotient(*n_max, &q)?;
            samples_csv(out, &rep.samples);
            fit_summary(out, &rep.fit);
            out.summary(&format!("truncation={} tail_bound={}", rep.truncation, num(rep.tail_bound)));
            out.summary(&rep.verdict.line());
            Ok(status_code(rep.verdict.status))
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Sink) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { func, at } => eval(out, func, at),
        Command::Length { func, ray, rho_max, target, samples } => length(out, g, func, ray, *rho_max, *target, *samples),
        Command::Area { func, rho, target } => area_cmd(out, g, func, *rho, *target),
        Command::Nevanlinna { func, radii } => nevanlinna(out, g, func, radii),
        Command::Decompose { func, boundary_samples } => decompose(out, func, *boundary_samples),
        Command::Verify { check } => verify(out, g, check),
        Command::Scenario { which } => scenario(out, g, which),
    }
}

/// Run the command line `argv` (including the program name) and return the
/// exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut sink = Sink { data: String::new(), diag: String::new(), header: cli.global.header == Switch::On };
    let code = match dispatch(&cli, &mut sink) {
        Ok(code) => code,
        Err(f) => {
            sink.diag(&format!("error: {}", f.message));
            f.code
        }
    };
    let _ = stderr.write_all(sink.diag.as_bytes());
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, sink.data.as_bytes()),
        None => stdout.write_all(sink.data.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_FAIL;
    }
    code
}
