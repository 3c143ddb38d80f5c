use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use nearfield::atlas::figure_preset;
use nearfield::numerics::DEFAULT_REL_TOL;
use nearfield::ApertureSpec;
use serde::Deserialize;

use crate::Failure;

pub const TOLERANCE_ENV: &str = "NEARFIELD_TOLERANCE";
const MAX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Cartesian,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Lambda,
    M,
}

/// Flags shared by every subcommand. Each one may also come from `--config`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    /// Aperture in wavelengths.
    #[arg(long = "D-lambda", value_name = "D/LAMBDA")]
    #[serde(rename = "D-lambda", alias = "D_lambda")]
    pub d_lambda: Option<f64>,

    /// Aperture in meters (needs --lambda-m).
    #[arg(long = "D-m", value_name = "METERS")]
    #[serde(rename = "D-m", alias = "D_m")]
    pub d_m: Option<f64>,

    /// Wavelength in meters; distances are then also reported in meters.
    #[arg(long = "lambda-m", value_name = "METERS")]
    #[serde(rename = "lambda-m", alias = "lambda_m")]
    pub lambda_m: Option<f64>,

    /// Number of array elements (needs --spacing).
    #[arg(long)]
    pub elements: Option<u32>,

    /// Element spacing in wavelengths.
    #[arg(long)]
    pub spacing: Option<f64>,

    /// Relative solver tolerance in (0, 1e-6].
    #[arg(long)]
    pub tolerance: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Common {
    fn has_input(&self) -> bool {
        self.d_lambda.is_some() || self.d_m.is_some() || self.elements.is_some() || self.spacing.is_some()
    }

    /// Fills unset fields from `file`. The aperture inputs are taken as a
    /// group so a flag-given style is never mixed with a file-given one.
    fn merge(mut self, file: Common) -> Common {
        if !self.has_input() {
            self.d_lambda = file.d_lambda;
            self.d_m = file.d_m;
            self.elements = file.elements;
            self.spacing = file.spacing;
        }
        self.lambda_m = self.lambda_m.or(file.lambda_m);
        self.tolerance = self.tolerance.or(file.tolerance);
        self.format = self.format.or(file.format);
        self.out = self.out.or(file.out);
        self
    }
}

/// Subcommand-specific keys a config file may carry alongside [`Common`].
#[derive(Debug, Clone, Default, Deserialize)]
pub struct Extra {
    pub style: Option<Style>,
    pub units: Option<Units>,
    #[serde(alias = "theta-start")]
    pub theta_start: Option<f64>,
    #[serde(alias = "theta-end")]
    pub theta_end: Option<f64>,
    pub steps: Option<usize>,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: ApertureSpec,
    /// Wavelength in meters when the input was physical.
    pub lambda_m: Option<f64>,
    pub tolerance: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub extra: Extra,
}

fn read_config(path: &Path) -> Result<(Common, Extra), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    let serde_json::Value::Object(mut map) = value else {
        return Err(Failure::usage(format!("config {} must be a JSON object", path.display())));
    };
    let mut extra_map = serde_json::Map::new();
    for key in ["style", "units", "theta_start", "theta-start", "theta_end", "theta-end", "steps", "grid"] {
        if let Some(v) = map.remove(key) {
            extra_map.insert(key.to_string(), v);
        }
    }
    let bad = |e: serde_json::Error| Failure::usage(format!("config {}: {e}", path.display()));
    let common: Common = serde_json::from_value(serde_json::Value::Object(map)).map_err(bad)?;
    let extra: Extra = serde_json::from_value(serde_json::Value::Object(extra_map)).map_err(bad)?;
    Ok((common, extra))
}

fn tolerance_from_env() -> Result<Option<f64>, Failure> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|e| Failure::usage(format!("{TOLERANCE_ENV}={s:?} is not a number: {e}"))),
        Err(_) => Ok(None),
    }
}

fn aperture(c: &Common) -> Result<ApertureSpec, Failure> {
    let styles = [c.d_lambda.is_some(), c.d_m.is_some(), c.elements.is_some() || c.spacing.is_some()];
    match styles.iter().filter(|s| **s).count() {
        0 => return Err(Failure::usage("give the aperture with --D-lambda, --D-m with --lambda-m, or --elements with --spacing")),
        1 => {}
        _ => return Err(Failure::usage("--D-lambda, --D-m and --elements/--spacing are mutually exclusive")),
    }
    let lambda = c.lambda_m.unwrap_or(1.0);
    let spec = if let Some(a) = c.d_lambda {
        ApertureSpec::new(a * lambda, lambda)
    } else if let Some(d) = c.d_m {
        let Some(lambda) = c.lambda_m else {
            return Err(Failure::usage("--D-m needs --lambda-m"));
        };
        ApertureSpec::new(d, lambda)
    } else {
        match (c.elements, c.spacing) {
            (Some(n), Some(s)) => figure_preset(n, s, lambda),
            _ => return Err(Failure::usage("--elements and --spacing must be given together")),
        }
    };
    spec.map_err(Failure::from)
}

pub fn resolve(flags: Common, extra_flags: Extra) -> Result<Resolved, Failure> {
    let (common, file_extra) = match &flags.config {
        Some(path) => read_config(path)?,
        None => Default::default(),
    };
    let merged = flags.merge(common);
    let extra = Extra {
        style: extra_flags.style.or(file_extra.style),
        units: extra_flags.units.or(file_extra.units),
        theta_start: extra_flags.theta_start.or(file_extra.theta_start),
        theta_end: extra_flags.theta_end.or(file_extra.theta_end),
        steps: extra_flags.steps.or(file_extra.steps),
        grid: extra_flags.grid.or(file_extra.grid),
    };
    let tolerance = match merged.tolerance {
        Some(t) => t,
        None => tolerance_from_env()?.unwrap_or(DEFAULT_REL_TOL),
    };
    if !(tolerance > 0.0 && tolerance <= MAX_TOLERANCE) {
        return Err(Failure::usage(format!("tolerance must lie in (0, 1e-6], got {tolerance}")));
    }
    let spec = aperture(&merged)?;
    Ok(Resolved {
        spec,
        lambda_m: merged.lambda_m,
        tolerance,
        format: merged.format,
        out: merged.out,
        extra,
    })
}
