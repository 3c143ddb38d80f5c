//! `nearfield`: boundary distances, switch angles, sweeps and oracle checks
//! from the command line.

mod config;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nearfield::atlas::{self, AngleSummary, Model, SvgStyle};
use nearfield::oracle::{defining_equation_residual, diagnose, validate_all_with};
use nearfield::single::{fraunhofer_single, fresnel_single};
use nearfield::{BoundaryValue, Error, ObservationAngle, PhasedArray};
use serde_json::{json, Value};

use config::{Common, Extra, Format, Resolved, Style, Units};

#[derive(Debug, Parser)]
#[command(name = "nearfield", version, about = "Fraunhofer and Fresnel boundaries of antennas and phased arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary distance at one observation angle.
    Boundary(BoundaryArgs),
    /// Array switch angles and maximum boundary distances.
    Angles(AnglesArgs),
    /// All four boundaries over an angle range as CSV, JSON or SVG.
    Sweep(SweepArgs),
    /// Region of a point at range r and angle theta.
    Classify(ClassifyArgs),
    /// Compare closed forms with the numeric oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Fraunhofer,
    Fresnel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Single,
    Array,
}

impl ModelArg {
    fn model(self) -> Model {
        match self {
            ModelArg::Single => Model::Single,
            ModelArg::Array => Model::Array,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModelArg::Single => "single",
            ModelArg::Array => "array",
        }
    }
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, value_enum, default_value = "array")]
    model: ModelArg,
    /// Observation angle in degrees, [0, 180].
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct AnglesArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// First angle in degrees.
    #[arg(long, allow_negative_numbers = true)]
    theta_start: Option<f64>,
    /// Last angle in degrees.
    #[arg(long, allow_negative_numbers = true)]
    theta_end: Option<f64>,
    /// Number of samples including both ends.
    #[arg(long)]
    steps: Option<usize>,
    /// SVG layout.
    #[arg(long, value_enum)]
    style: Option<Style>,
    /// Distance unit of the output.
    #[arg(long, value_enum)]
    units: Option<Units>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Range in wavelengths.
    #[arg(long, conflicts_with = "r_m", required_unless_present = "r_m", allow_negative_numbers = true)]
    r: Option<f64>,
    /// Range in meters (needs --lambda-m).
    #[arg(long = "r-m", allow_negative_numbers = true)]
    r_m: Option<f64>,
    /// Observation angle in degrees.
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_enum, default_value = "array")]
    model: ModelArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Angle grid size over [0, 180] degrees.
    #[arg(long)]
    grid: Option<usize>,
    /// Also compare against the exact-residual boundary.
    #[arg(long)]
    diagnostic: bool,
    #[command(flatten)]
    common: Common,
}

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub const VALIDATION: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const PRECONDITION: u8 = 3;

    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: Self::USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ArrayPrecondition(_) => Self::PRECONDITION,
            Error::InvalidInput(_) | Error::Degenerate { .. } | Error::NoBoundary { .. } => Self::USAGE,
            Error::InternalBranch(_) | Error::Solve(_) => Self::VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

fn angle(deg: f64) -> Result<ObservationAngle, Failure> {
    ObservationAngle::from_degrees(deg).map_err(Failure::from)
}

fn text_or_json(format: Option<Format>, command: &str) -> Result<Format, Failure> {
    match format.unwrap_or(Format::Text) {
        f @ (Format::Text | Format::Json) => Ok(f),
        other => Err(Failure::usage(format!("{command} prints text or json, not {other:?}").to_lowercase())),
    }
}

fn with_meters(obj: &mut serde_json::Map<String, Value>, key: &str, lambda_m: Option<f64>, lambdas: f64) {
    if let Some(l) = lambda_m {
        obj.insert(format!("{key}_m"), json!(lambdas * l));
    }
}

fn boundary(args: BoundaryArgs) -> Result<(), Failure> {
    let cfg = config::resolve(args.common, Extra::default())?;
    let format = text_or_json(cfg.format, "boundary")?;
    let theta = angle(args.theta)?;
    let spec = &cfg.spec;
    let value: BoundaryValue = match (args.model, args.kind) {
        (ModelArg::Single, Kind::Fraunhofer) => fraunhofer_single(theta, spec),
        (ModelArg::Single, Kind::Fresnel) => fresnel_single(theta, spec),
        (ModelArg::Array, kind) => {
            let array = PhasedArray::with_tolerance(spec, cfg.tolerance)?;
            match kind {
                Kind::Fraunhofer => array.fraunhofer(theta)?,
                Kind::Fresnel => array.fresnel(theta)?,
            }
        }
    };
    let lambdas = value.distance / spec.wavelength();
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), json!(format!("{:?}", args.kind).to_lowercase()));
    obj.insert("model".into(), json!(args.model.name()));
    obj.insert("theta_deg".into(), json!(args.theta));
    obj.insert("D_over_lambda".into(), json!(spec.d_over_lambda()));
    obj.insert("distance_lambda".into(), json!(lambdas));
    with_meters(&mut obj, "distance", cfg.lambda_m, lambdas);
    obj.insert("branch".into(), json!(value.branch.as_str()));
    obj.insert("residual".into(), json!(defining_equation_residual(value.kind, theta, spec, value.distance)));
    render::emit(&Value::Object(obj), format, cfg.out.as_deref())
}

fn angles(args: AnglesArgs) -> Result<(), Failure> {
    let cfg = config::resolve(args.common, Extra::default())?;
    let format = text_or_json(cfg.format, "angles")?;
    let array = PhasedArray::with_tolerance(&cfg.spec, cfg.tolerance)?;
    let summary = AngleSummary::new(&array);
    let Value::Object(mut obj) = serde_json::to_value(summary).expect("summary serializes") else {
        unreachable!("summary is a struct");
    };
    obj.insert("F_inverse_deg".into(), json!(summary.fraunhofer_switch_deg()));
    with_meters(&mut obj, "dF_max", cfg.lambda_m, summary.df_max);
    with_meters(&mut obj, "dN_max", cfg.lambda_m, summary.dn_max);
    render::emit(&Value::Object(obj), format, cfg.out.as_deref())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let flags = Extra {
        style: args.style,
        units: args.units,
        theta_start: args.theta_start,
        theta_end: args.theta_end,
        steps: args.steps,
        grid: None,
    };
    let cfg: Resolved = config::resolve(args.common, flags)?;
    let x = &cfg.extra;
    let array = PhasedArray::with_tolerance(&cfg.spec, cfg.tolerance)?;
    let mut rows = atlas::sweep_with(
        &array,
        x.theta_start.unwrap_or(0.0),
        x.theta_end.unwrap_or(180.0),
        x.steps.unwrap_or(181),
    )?;
    if x.units == Some(Units::M) {
        let Some(l) = cfg.lambda_m else {
            return Err(Failure::usage("--units m needs --lambda-m"));
        };
        rows = rows.into_iter().map(|r| r.scaled(l)).collect();
    }
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => atlas::to_csv(&rows),
        Format::Json => atlas::to_json(&rows)? + "\n",
        Format::Svg => {
            let style = match x.style.unwrap_or(Style::Cartesian) {
                Style::Cartesian => SvgStyle::Cartesian,
                Style::Polar => SvgStyle::Polar,
            };
            atlas::to_svg(&rows, style)?
        }
        Format::Text => return Err(Failure::usage("sweep prints csv, json or svg, not text")),
    };
    render::write(&body, cfg.out.as_deref())
}

fn classify(args: ClassifyArgs) -> Result<(), Failure> {
    let cfg = config::resolve(args.common, Extra::default())?;
    let format = text_or_json(cfg.format, "classify")?;
    let spec = &cfg.spec;
    let lambda = spec.wavelength();
    let r_lambda = match (args.r, args.r_m) {
        (Some(r), _) => r,
        (None, Some(r_m)) => match cfg.lambda_m {
            Some(l) => r_m / l,
            None => return Err(Failure::usage("--r-m needs --lambda-m")),
        },
        (None, None) => return Err(Failure::usage("give --r or --r-m")),
    };
    let theta = angle(args.theta)?;
    let label = atlas::classify(r_lambda * lambda, theta, spec, args.model.model())?;
    let (f, n) = atlas::boundaries_at(theta, spec, args.model.model())?;
    let mut obj = serde_json::Map::new();
    obj.insert("model".into(), json!(args.model.name()));
    obj.insert("theta_deg".into(), json!(args.theta));
    obj.insert("r_lambda".into(), json!(r_lambda));
    with_meters(&mut obj, "r", cfg.lambda_m, r_lambda);
    obj.insert("label".into(), json!(label.as_str()));
    obj.insert("fraunhofer_lambda".into(), json!(f / lambda));
    with_meters(&mut obj, "fraunhofer", cfg.lambda_m, f / lambda);
    obj.insert("fresnel_lambda".into(), json!(n / lambda));
    with_meters(&mut obj, "fresnel", cfg.lambda_m, n / lambda);
    render::emit(&Value::Object(obj), format, cfg.out.as_deref())
}

/// Angles for the exact-residual diagnostic, clear of end-fire and broadside.
fn diagnostic_angles() -> Result<Vec<ObservationAngle>, Failure> {
    (1..18).filter(|k| *k != 9).map(|k| angle(10.0 * k as f64)).collect()
}

fn validate(args: ValidateArgs) -> Result<bool, Failure> {
    let flags = Extra { grid: args.grid, ..Extra::default() };
    let cfg = config::resolve(args.common, flags)?;
    let format = text_or_json(cfg.format, "validate")?;
    let mut report = validate_all_with(&cfg.spec, cfg.extra.grid.unwrap_or(1000), cfg.tolerance)?;
    if args.diagnostic {
        let rows = diagnose(&cfg.spec, &diagnostic_angles()?)?;
        report.pass &= rows.iter().all(|r| r.pass);
        report.diagnostic = Some(rows);
    }
    let value = serde_json::to_value(&report).expect("report serializes");
    render::emit(&value, format, cfg.out.as_deref())?;
    Ok(report.pass)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Boundary(a) => boundary(a).map(|_| 0),
        Command::Angles(a) => angles(a).map(|_| 0),
        Command::Sweep(a) => sweep(a).map(|_| 0),
        Command::Classify(a) => classify(a).map(|_| 0),
        Command::Validate(a) => validate(a).map(|pass| if pass { 0 } else { Failure::VALIDATION }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
