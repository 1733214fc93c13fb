//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcricci_core::dsl::FieldExpr;
use lcricci_core::jet::{DerivMode, JetOptions};
use lcricci_core::metric::{parse_spec, MetricSpec, ZOO};
use lcricci_core::point::ChartPoint;
use lcricci_core::quadrature::{integrand_density, weighted_sum, Integrand, IntegrationGrid};
use lcricci_core::C64;
use rayon::prelude::*;
use serde_json::json;

use crate::suite::{default_metric_set, run_suite, SuiteConfig, SuiteError, SuiteName};
use crate::tensor::tensor_dump;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lcricci", version, about = "Chern and Levi-Civita curvature of Hermitian metrics on local charts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in metrics.
    ListMetrics,
    /// Print every tensor at one point as JSON.
    Tensor {
        #[arg(long)]
        metric: String,
        /// Comma-separated complex coordinates, e.g. `1+0i,0.5-2i`.
        #[arg(long)]
        at: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run one suite or one check id.
    Check {
        /// Suite name or check id.
        name: String,
        #[arg(long, required = true)]
        metric: Vec<String>,
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        common: Common,
    },
    /// Run a suite over several metrics.
    Suite {
        name: String,
        #[arg(long)]
        metric: Vec<String>,
        #[arg(long, value_enum)]
        metric_set: Option<MetricSet>,
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate a top form over the Hopf fundamental domain `1/2 < |z| ≤ 1`.
    Integrate {
        #[arg(long)]
        metric: String,
        #[arg(long, value_enum, default_value = "scalar")]
        integrand: IntegrandArg,
        /// Test function for `--integrand ddbar-f`.
        #[arg(long)]
        function: Option<String>,
        #[arg(long, default_value_t = 8)]
        resolution: usize,
        #[arg(long, value_enum, default_value = "omega-n")]
        convention: Convention,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Finite-difference step.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum, default_value = "analytic")]
    pub deriv: DerivArg,
    /// Conformal factor `f`; the metric becomes `e^f g`.
    #[arg(long)]
    pub factor: Option<String>,
    /// Also write the JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides every upper tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Base quadrature resolution for integral checks.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DerivArg {
    Analytic,
    Fd,
}

impl From<DerivArg> for DerivMode {
    fn from(d: DerivArg) -> Self {
        match d {
            DerivArg::Analytic => DerivMode::Analytic,
            DerivArg::Fd => DerivMode::FiniteDifference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricSet {
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegrandArg {
    Constant,
    Scalar,
    RicciWedge,
    DbarStarNorm,
    DdbarF,
}

/// Which top form stands for the volume in raw integral values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// `ω^n`.
    OmegaN,
    /// `ω^n/n!`.
    OmegaNFactorial,
}

impl Convention {
    fn label(self) -> &'static str {
        match self {
            Convention::OmegaN => "omega^n",
            Convention::OmegaNFactorial => "omega^n/n!",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `a+bi` coordinates separated by commas.
pub fn parse_point(s: &str) -> Result<ChartPoint, String> {
    let coords = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            C64::from_str(t).map_err(|_| format!("cannot parse complex coordinate `{t}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ChartPoint::new(coords).map_err(|e| e.to_string())
}

fn check_step(step: Option<f64>) -> Result<(), Failure> {
    match step {
        Some(h) if !(h > 0.0 && h.is_finite()) => Err(usage(format!("--step must be positive, got {h}"))),
        _ => Ok(()),
    }
}

fn apply_factor(spec: String, factor: &Option<String>) -> Result<String, Failure> {
    match factor {
        None => Ok(spec),
        Some(f) => {
            FieldExpr::from_str(f).map_err(|e| usage(format!("--factor: {e}")))?;
            Ok(format!("conformal({spec}; f={f})"))
        }
    }
}

fn resolve_spec(s: &str, common: &Common) -> Result<MetricSpec, Failure> {
    let s = apply_factor(s.to_string(), &common.factor)?;
    let spec = parse_spec(&s).map_err(|e| usage(format!("metric `{s}`: {e}")))?;
    if DerivMode::from(common.deriv) == DerivMode::Analytic && !spec.has_analytic_jet() {
        return Err(usage(format!("metric `{s}` has no analytic jet; use --deriv fd")));
    }
    Ok(spec)
}

fn opts(common: &Common) -> JetOptions {
    JetOptions { step: common.step, ..JetOptions::new(common.deriv.into()) }
}

fn write_out(path: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, body).map_err(|e| Failure::Runtime(format!("writing {}: {e}", p.display())))?;
    }
    Ok(())
}

fn suite_error(e: SuiteError) -> Failure {
    usage(e.to_string())
}

fn run_config(config: SuiteConfig, sweep: &Sweep, common: &Common) -> Result<i32, Failure> {
    let report = run_suite(&config).map_err(suite_error)?;
    let body = report.to_json();
    write_out(&common.out, &body)?;
    let stdout = match sweep.format {
        Format::Table => report.render_table(),
        Format::Json => body,
    };
    print!("{stdout}");
    let _ = std::io::stdout().flush();
    Ok(if report.overall_pass { EXIT_PASS } else { EXIT_FAIL })
}

fn fill(config: &mut SuiteConfig, sweep: &Sweep, common: &Common) -> Result<(), Failure> {
    check_step(common.step)?;
    config.points = sweep.points;
    config.seed = sweep.seed;
    config.tolerance = sweep.tol;
    config.mode = common.deriv.into();
    config.step = common.step;
    config.resolution = sweep.resolution;
    config.metrics = config
        .metrics
        .drain(..)
        .map(|m| apply_factor(m, &common.factor))
        .collect::<Result<_, _>>()?;
    config.validate().map_err(suite_error)?;
    Ok(())
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::ListMetrics => {
            println!("{:<16} {:<10} description", "name", "dimension");
            for (name, dim, desc) in ZOO {
                println!("{name:<16} {dim:<10} {desc}");
            }
            Ok(EXIT_PASS)
        }
        Command::Tensor { metric, at, common } => {
            check_step(common.step)?;
            let spec = resolve_spec(&metric, &common)?;
            if spec.is_line_bundle_weight() {
                return Err(usage(format!("`{metric}` is a line-bundle weight; tensors need a tangent metric")));
            }
            let p = parse_point(&at).map_err(|e| usage(format!("--at: {e}")))?;
            if p.dim() != spec.dim() {
                return Err(usage(format!("--at has {} coordinates, metric needs {}", p.dim(), spec.dim())));
            }
            let v = tensor_dump(&spec, &p, &opts(&common)).map_err(|e| Failure::Runtime(e.to_string()))?;
            let body = serde_json::to_string_pretty(&v).expect("json") + "\n";
            write_out(&common.out, &body)?;
            print!("{body}");
            Ok(EXIT_PASS)
        }
        Command::Check { name, metric, sweep, common } => {
            let mut config = match SuiteName::from_str(&name) {
                Ok(s) => SuiteConfig::new(s, metric),
                Err(_) => SuiteConfig::for_check(&name, metric).map_err(suite_error)?,
            };
            fill(&mut config, &sweep, &common)?;
            run_config(config, &sweep, &common)
        }
        Command::Suite { name, mut metric, metric_set, sweep, common } => {
            let suite = SuiteName::from_str(&name).map_err(suite_error)?;
            if metric_set == Some(MetricSet::Default) {
                metric.extend(default_metric_set());
            }
            if metric.is_empty() {
                return Err(usage("give --metric or --metric-set default"));
            }
            let mut config = SuiteConfig::new(suite, metric);
            fill(&mut config, &sweep, &common)?;
            run_config(config, &sweep, &common)
        }
        Command::Integrate { metric, integrand, function, resolution, convention, common } => {
            check_step(common.step)?;
            if resolution == 0 {
                return Err(usage("--resolution must be at least 1"));
            }
            let spec = resolve_spec(&metric, &common)?;
            if !spec.is_hopf_family() {
                return Err(usage(format!("`{metric}` has no built-in fundamental domain; use a Hopf metric")));
            }
            let integrand = match (integrand, function) {
                (IntegrandArg::DdbarF, Some(f)) => {
                    Integrand::DdbarF(FieldExpr::from_str(&f).map_err(|e| usage(format!("--function: {e}")))?)
                }
                (IntegrandArg::DdbarF, None) => return Err(usage("--integrand ddbar-f needs --function")),
                (_, Some(_)) => return Err(usage("--function only applies to --integrand ddbar-f")),
                (IntegrandArg::Constant, None) => Integrand::Constant(1.0),
                (IntegrandArg::Scalar, None) => Integrand::ScalarOmegaN,
                (IntegrandArg::RicciWedge, None) => Integrand::RicciWedgeOmega,
                (IntegrandArg::DbarStarNorm, None) => Integrand::DbarStarNormSq,
            };
            let n = spec.dim();
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            // native volume of each density: ω^n, except the norm (ω^n/n!) and the constant (Euclidean)
            let scale = match (&integrand, convention) {
                (Integrand::Constant(_), _) => 1.0,
                (Integrand::DbarStarNormSq, Convention::OmegaN) => fact,
                (Integrand::DbarStarNormSq, Convention::OmegaNFactorial) => 1.0,
                (_, Convention::OmegaN) => 1.0,
                (_, Convention::OmegaNFactorial) => 1.0 / fact,
            };
            let grid = IntegrationGrid::new(n, resolution).map_err(|e| usage(e.to_string()))?;
            let o = opts(&common);
            let dens: Vec<C64> = (0..grid.len())
                .into_par_iter()
                .map(|i| integrand_density(&spec, &integrand, &grid.node(i).0, &o))
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            let r = weighted_sum(&grid, &dens);
            let v = json!({
                "metric": spec.to_string(),
                "integrand": integrand.name(),
                "resolution": resolution,
                "convention": convention.label(),
                "domain": "1/2 < |z| <= 1",
                "nodes": r.nodes,
                "value": r.value * scale,
                "imag": r.imag * scale,
                "summation": "sequential in node order",
            });
            let body = serde_json::to_string_pretty(&v).expect("json") + "\n";
            write_out(&common.out, &body)?;
            print!("{body}");
            Ok(EXIT_PASS)
        }
    }
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            EXIT_FAIL
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points() {
        let p = parse_point("1+0i, 0.5-2i").unwrap();
        assert_eq!(p.coords(), &[C64::new(1.0, 0.0), C64::new(0.5, -2.0)]);
        assert!(parse_point("1+0i,abc").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
