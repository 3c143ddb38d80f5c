//! Shared geometry: aperture description, observation angle, the exact
//! source-to-element path length and its binomial phase expansion.
//!
//! Lengths are plain `f64` in any consistent unit; the aperture and the
//! wavelength must use the same one. The boundary modules work on `D / lambda`
//! internally and scale back to the caller's unit on return.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles closer than this to 0, pi/2 or pi are snapped onto the degeneracy.
const SNAP_RAD: f64 = 1e-15;

/// Smallest `D / lambda` the phased-array formulas accept.
pub const MIN_ARRAY_D_OVER_LAMBDA: f64 = 0.5;

/// Antenna aperture and carrier wavelength, optionally with the ULA layout
/// that produced the aperture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApertureSpec {
    aperture: f64,
    wavelength: f64,
    elements: Option<u32>,
    spacing: Option<f64>,
}

impl ApertureSpec {
    pub fn new(aperture: f64, wavelength: f64) -> Result<Self> {
        if !(aperture > 0.0 && aperture.is_finite()) {
            return Err(Error::invalid(format!("aperture must be positive and finite, got {aperture}")));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::invalid(format!("wavelength must be positive and finite, got {wavelength}")));
        }
        Ok(Self { aperture, wavelength, elements: None, spacing: None })
    }

    /// Aperture given directly in wavelengths (`lambda = 1`).
    pub fn normalized(d_over_lambda: f64) -> Result<Self> {
        Self::new(d_over_lambda, 1.0)
    }

    /// Uniform linear array: `D = (N - 1) * spacing * lambda`, spacing in wavelengths.
    pub fn ula(elements: u32, spacing_wavelengths: f64, wavelength: f64) -> Result<Self> {
        if elements < 2 {
            return Err(Error::invalid("a ULA needs at least 2 elements"));
        }
        if !(spacing_wavelengths > 0.0 && spacing_wavelengths.is_finite()) {
            return Err(Error::invalid(format!(
                "element spacing must be positive, got {spacing_wavelengths}"
            )));
        }
        let aperture = f64::from(elements - 1) * spacing_wavelengths * wavelength;
        let spec = Self::new(aperture, wavelength)?;
        Ok(Self { elements: Some(elements), spacing: Some(spacing_wavelengths), ..spec })
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn elements(&self) -> Option<u32> {
        self.elements
    }

    /// Inter-element spacing in wavelengths.
    pub fn spacing(&self) -> Option<f64> {
        self.spacing
    }

    pub fn d_over_lambda(&self) -> f64 {
        self.aperture / self.wavelength
    }

    /// Rejects apertures below half a wavelength for the array formulas.
    pub fn check_array(&self) -> Result<()> {
        let a = self.d_over_lambda();
        if a < MIN_ARRAY_D_OVER_LAMBDA {
            return Err(Error::ArrayPrecondition(a));
        }
        Ok(())
    }
}

/// Angle between the antenna plane and the line to the observation point,
/// in radians on `[0, pi]`. `pi/2` is broadside.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObservationAngle(f64);

impl ObservationAngle {
    pub const BROADSIDE: Self = Self(FRAC_PI_2);

    pub fn new(radians: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radians) {
            return Err(Error::invalid(format!("observation angle {radians} rad is outside [0, pi]")));
        }
        Ok(Self(radians))
    }

    /// Converts from degrees; 0, 90 and 180 map exactly onto 0, pi/2 and pi.
    pub fn from_degrees(degrees: f64) -> Result<Self> {
        if !(0.0..=180.0).contains(&degrees) {
            return Err(Error::invalid(format!("observation angle {degrees} deg is outside [0, 180]")));
        }
        let radians = match degrees {
            d if d == 90.0 => FRAC_PI_2,
            d if d == 180.0 => PI,
            d => d.to_radians().min(PI),
        };
        Ok(Self(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// `pi - theta`, the reflection about broadside.
    pub fn mirror(self) -> Self {
        Self(PI - self.0)
    }

    /// `(sin, cos)` with exact zeros at the snapped degeneracies.
    pub fn sin_cos(self) -> (f64, f64) {
        let t = self.0;
        if t <= SNAP_RAD || PI - t <= SNAP_RAD {
            (0.0, if t < FRAC_PI_2 { 1.0 } else { -1.0 })
        } else if (t - FRAC_PI_2).abs() <= SNAP_RAD {
            (1.0, 0.0)
        } else {
            t.sin_cos()
        }
    }

    /// `(sin, |cos|)` evaluated on the angle folded into `[0, pi/2]`, so that
    /// `theta` and `pi - theta` give identical values.
    pub(crate) fn folded_sin_abs_cos(self) -> (f64, f64) {
        let folded = if self.0 > FRAC_PI_2 { Self(PI - self.0) } else { self };
        let (s, c) = folded.sin_cos();
        (s, c.abs())
    }
}

/// The first three terms of the binomial expansion of the phase delay
/// `(2 pi / lambda)(r' - r)` between an aperture point and the reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseExpansionTerms {
    /// Linear term, independent of `r`.
    pub t1: f64,
    /// Quadratic (Fraunhofer) term, never negative.
    pub t2: f64,
    /// Cubic (Fresnel) term, same sign as `cos theta`.
    pub t3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    CappedClosedForm,
    PolynomialRoot,
    Degenerate,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::CappedClosedForm => "CappedClosedForm",
            Branch::PolynomialRoot => "PolynomialRoot",
            Branch::Degenerate => "Degenerate",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CappedClosedForm" => Ok(Branch::CappedClosedForm),
            "PolynomialRoot" => Ok(Branch::PolynomialRoot),
            "Degenerate" => Ok(Branch::Degenerate),
            other => Err(Error::invalid(format!("unknown branch tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryKind {
    FraunhoferSingle,
    FresnelSingle,
    FraunhoferArray,
    FresnelArray,
}

/// A boundary distance together with the formula branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryValue {
    /// Distance in the unit of the [`ApertureSpec`] it was computed for.
    pub distance: f64,
    pub branch: Branch,
    pub kind: BoundaryKind,
}

fn check_length(name: &str, value: f64, allow_zero: bool) -> Result<()> {
    let ok = value.is_finite() && if allow_zero { value >= 0.0 } else { value > 0.0 };
    if !ok {
        let bound = if allow_zero { "non-negative" } else { "positive" };
        return Err(Error::invalid(format!("{name} must be {bound} and finite, got {value}")));
    }
    Ok(())
}

/// Distance from a point source at range `r` to an aperture point offset by
/// `d_prime` from the reference, `sqrt(r^2 - 2 r d' cos theta + d'^2)`.
pub fn exact_path_length(r: f64, theta: ObservationAngle, d_prime: f64) -> Result<f64> {
    check_length("r", r, false)?;
    check_length("d_prime", d_prime, true)?;
    let (s, c) = theta.sin_cos();
    Ok((r - d_prime * c).hypot(d_prime * s))
}

pub fn expansion_terms(
    r: f64,
    theta: ObservationAngle,
    d_prime: f64,
    wavelength: f64,
) -> Result<PhaseExpansionTerms> {
    check_length("r", r, false)?;
    check_length("d_prime", d_prime, true)?;
    check_length("wavelength", wavelength, false)?;
    let (s, c) = theta.sin_cos();
    let k = PI / wavelength;
    let quad = k * s * s * d_prime * d_prime / r;
    Ok(PhaseExpansionTerms {
        t1: -2.0 * k * c * d_prime,
        t2: quad,
        t3: quad * c * d_prime / r,
    })
}

/// Exact phase delay left after removing the linear term,
/// `(2 pi / lambda)(r' - r + d' cos theta)`.
///
/// Evaluated as `(2 pi / lambda) d'^2 sin^2 / (r' + r - d' cos)`, which is the
/// same quantity without the `r' - r` cancellation at large `r`.
pub fn exact_residual_after_linear(
    r: f64,
    theta: ObservationAngle,
    d_prime: f64,
    wavelength: f64,
) -> Result<f64> {
    check_length("wavelength", wavelength, false)?;
    let r_prime = exact_path_length(r, theta, d_prime)?;
    let (s, c) = theta.sin_cos();
    let k = 2.0 * PI / wavelength;
    let denom = r_prime + r - d_prime * c;
    if denom > 0.0 && s != 0.0 {
        Ok(k * d_prime * d_prime * s * s / denom)
    } else {
        Ok(k * (r_prime - r + d_prime * c))
    }
}
