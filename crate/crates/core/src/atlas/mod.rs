//! Angle sweeps, region classification and their serialized forms.

mod csv;
mod json;
mod svg;

use serde::{Deserialize, Serialize};

use crate::array::{AngleMode, PhasedArray};
use crate::error::{Error, Result};
use crate::model::{ApertureSpec, Branch, ObservationAngle};
use crate::single::{fraunhofer_single, fresnel_single};

pub use self::csv::{format_significant, parse_csv, to_csv, CSV_HEADER};
pub use self::json::to_json;
pub use self::svg::{to_svg, CartesianFrame, PolarFrame, SvgStyle};

/// One sample of the four boundary functions, distances in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_deg: f64,
    #[serde(rename = "dF_array")]
    pub df_array: f64,
    #[serde(rename = "dN_array")]
    pub dn_array: f64,
    #[serde(rename = "dF_single")]
    pub df_single: f64,
    #[serde(rename = "dN_single")]
    pub dn_single: f64,
    #[serde(rename = "branch_F")]
    pub branch_f: Branch,
    #[serde(rename = "branch_N")]
    pub branch_n: Branch,
}

impl SweepRow {
    /// Multiplies every distance by `factor` (e.g. the wavelength in meters).
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            df_array: self.df_array * factor,
            dn_array: self.dn_array * factor,
            df_single: self.df_single * factor,
            dn_single: self.dn_single * factor,
            ..self
        }
    }
}

/// Which antenna model [`classify`] measures against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    Single,
    Array,
}

/// Region of a point `(r, theta)` around the antenna.
///
/// `NonRadiativeMarker` is a fixed `r < lambda/2` heuristic, not a computed
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    NonRadiativeMarker,
    BelowFresnel,
    FresnelRegion,
    FarField,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::NonRadiativeMarker => "NonRadiativeMarker",
            RegionLabel::BelowFresnel => "BelowFresnel",
            RegionLabel::FresnelRegion => "FresnelRegion",
            RegionLabel::FarField => "FarField",
        }
    }
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Aperture for the N-element half-wavelength figure families.
///
/// `N = 1` has no inter-element span, so it stands for a single element one
/// spacing wide.
pub fn figure_preset(elements: u32, spacing_wavelengths: f64, wavelength: f64) -> Result<ApertureSpec> {
    match elements {
        0 => Err(Error::invalid("element count must be at least 1")),
        1 => ApertureSpec::new(spacing_wavelengths * wavelength, wavelength),
        n => ApertureSpec::ula(n, spacing_wavelengths, wavelength),
    }
}

/// Samples all four boundaries on a uniform degree grid that includes both ends.
pub fn sweep(spec: &ApertureSpec, theta_start_deg: f64, theta_end_deg: f64, steps: usize) -> Result<Vec<SweepRow>> {
    sweep_with(&PhasedArray::new(spec)?, theta_start_deg, theta_end_deg, steps)
}

pub fn sweep_with(
    array: &PhasedArray,
    theta_start_deg: f64,
    theta_end_deg: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if !(0.0 <= theta_start_deg && theta_start_deg < theta_end_deg && theta_end_deg <= 180.0) {
        return Err(Error::invalid(format!(
            "sweep range must satisfy 0 <= start < end <= 180, got [{theta_start_deg}, {theta_end_deg}]"
        )));
    }
    if steps < 2 {
        return Err(Error::invalid(format!("sweep needs at least 2 steps, got {steps}")));
    }
    let spec = array.spec();
    let lambda = spec.wavelength();
    let span = theta_end_deg - theta_start_deg;
    (0..steps)
        .map(|i| {
            let theta_deg = if i == steps - 1 {
                theta_end_deg
            } else {
                theta_start_deg + span * i as f64 / (steps - 1) as f64
            };
            let theta = ObservationAngle::from_degrees(theta_deg)?;
            let f = array.fraunhofer(theta)?;
            let n = array.fresnel(theta)?;
            Ok(SweepRow {
                theta_deg,
                df_array: f.distance / lambda,
                dn_array: n.distance / lambda,
                df_single: fraunhofer_single(theta, spec).distance / lambda,
                dn_single: fresnel_single(theta, spec).distance / lambda,
                branch_f: f.branch,
                branch_n: n.branch,
            })
        })
        .collect()
}

/// Boundaries that bracket a point: `(fraunhofer, fresnel)` in the aperture's length unit.
pub fn boundaries_at(theta: ObservationAngle, spec: &ApertureSpec, model: Model) -> Result<(f64, f64)> {
    match model {
        Model::Single => Ok((fraunhofer_single(theta, spec).distance, fresnel_single(theta, spec).distance)),
        Model::Array => {
            let array = PhasedArray::new(spec)?;
            Ok((array.fraunhofer(theta)?.distance, array.fresnel(theta)?.distance))
        }
    }
}

/// Region of the point at range `r` (the aperture's length unit) and angle `theta`.
///
/// The Fraunhofer test runs first, so where the Fresnel boundary exceeds the
/// Fraunhofer boundary (near end-fire) the Fresnel region is empty.
pub fn classify(r: f64, theta: ObservationAngle, spec: &ApertureSpec, model: Model) -> Result<RegionLabel> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("range must be non-negative and finite, got {r}")));
    }
    let (fraunhofer, fresnel) = boundaries_at(theta, spec, model)?;
    Ok(label_for(r, spec.wavelength(), fraunhofer, fresnel))
}

pub(crate) fn label_for(r: f64, wavelength: f64, fraunhofer: f64, fresnel: f64) -> RegionLabel {
    if r < wavelength / 2.0 {
        RegionLabel::NonRadiativeMarker
    } else if r >= fraunhofer {
        RegionLabel::FarField
    } else if r >= fresnel {
        RegionLabel::FresnelRegion
    } else {
        RegionLabel::BelowFresnel
    }
}

/// Switch angles and maxima in presentation units (degrees, wavelengths).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSummary {
    pub d_over_lambda: f64,
    #[serde(rename = "theta_F_deg")]
    pub theta_f_deg: f64,
    #[serde(rename = "theta_F_approx_deg")]
    pub theta_f_approx_deg: f64,
    #[serde(rename = "theta_F_diff_deg")]
    pub theta_f_diff_deg: f64,
    #[serde(rename = "theta_FE_deg")]
    pub theta_fe_deg: f64,
    #[serde(rename = "theta_N1_deg")]
    pub theta_n1_deg: f64,
    #[serde(rename = "theta_N2_deg")]
    pub theta_n2_deg: f64,
    #[serde(rename = "theta_N1_mirror_deg")]
    pub theta_n1_mirror_deg: f64,
    #[serde(rename = "theta_N2_mirror_deg")]
    pub theta_n2_mirror_deg: f64,
    #[serde(rename = "dF_max")]
    pub df_max: f64,
    #[serde(rename = "dN_max")]
    pub dn_max: f64,
}

impl AngleSummary {
    pub fn new(array: &PhasedArray) -> Self {
        let sw = array.switch_angles();
        let lambda = array.spec().wavelength();
        let exact = array.array_angle(AngleMode::Exact).to_degrees();
        let approx = array.array_angle(AngleMode::Approximate).to_degrees();
        Self {
            d_over_lambda: array.spec().d_over_lambda(),
            theta_f_deg: exact,
            theta_f_approx_deg: approx,
            theta_f_diff_deg: exact - approx,
            theta_fe_deg: sw.theta_fe.to_degrees(),
            theta_n1_deg: sw.theta_n1.to_degrees(),
            theta_n2_deg: sw.theta_n2.to_degrees(),
            theta_n1_mirror_deg: sw.theta_n1_mirror.to_degrees(),
            theta_n2_mirror_deg: sw.theta_n2_mirror.to_degrees(),
            df_max: array.max_fraunhofer() / lambda,
            dn_max: array.max_fresnel() / lambda,
        }
    }

    /// Broadside-referenced Fraunhofer switch, `90 - theta_F` (F^-1 in degrees).
    pub fn fraunhofer_switch_deg(&self) -> f64 {
        90.0 - self.theta_f_deg
    }
}
