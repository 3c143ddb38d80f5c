//! Fraunhofer and Fresnel boundaries for phased arrays.
//!
//! Every element has its own feed, so the worst-case phase difference is
//! measured between elements rather than against the aperture centre. The
//! effective offset becomes `D/2 + min(|r cos|, D/2)` and the boundary
//! equations pick up a factor `(1 + min(1, 2 d |cos| / D))^k` with `k = 2`
//! (Fraunhofer) or `k = 3` (Fresnel). When the `min` saturates the result is
//! a closed form (4x and sqrt(8)x the single-element values); otherwise the
//! boundary is the root of a quadratic (Fraunhofer) or cubic (Fresnel).
//!
//! All arithmetic runs on `a = D / lambda`; distances are scaled by the
//! wavelength on the way out.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ApertureSpec, BoundaryKind, BoundaryValue, Branch, ObservationAngle};
use crate::numerics::{bisect_relative, solve_quadratic, Bracket, SolveError, DEFAULT_MAX_ITER, DEFAULT_REL_TOL};
use crate::single::fresnel_maximizer;

/// Slack allowed when a branch root lands a hair past the cap through rounding.
const CAP_SLACK: f64 = 1e-9;

/// How [`fraunhofer_array_angle`] evaluates the Fraunhofer array angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleMode {
    /// Bisection of `F(theta) = lambda / (2D)` near broadside.
    Exact,
    /// `asin(lambda / (8D)) / 2`.
    Approximate,
}

/// `F(theta) = 8 |cos| sin^2`; the Fraunhofer branch switches where `F = lambda / (2D)`.
pub fn fraunhofer_switch_function(theta: ObservationAngle) -> f64 {
    let (s, c) = theta.folded_sin_abs_cos();
    8.0 * c * s * s
}

/// `G(theta) = 16 |cos|^3 sin^2`; the Fresnel branch switches where `G = lambda / (2D)`.
pub fn fresnel_switch_function(theta: ObservationAngle) -> f64 {
    let (s, c) = theta.folded_sin_abs_cos();
    16.0 * c * c * c * s * s
}

/// Interior maximizer of `G` on `(0, pi/2)`: `atan(sqrt(2/3))`, about 39.23 deg.
pub fn fresnel_switch_peak() -> f64 {
    (2.0f64 / 3.0).sqrt().atan()
}

/// Branch switch angles in radians.
///
/// The Fraunhofer boundary follows the quadratic root for
/// `|theta - pi/2| <= theta_f` and, near end-fire, for `theta <= theta_fe` or
/// `theta >= pi - theta_fe`; elsewhere it is `8 D^2 sin^2 / lambda`. The
/// Fresnel boundary is the capped closed form on `[theta_n1, theta_n2]` and
/// on the mirrored interval, and the cubic root outside them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchAngles {
    /// Fraunhofer array angle, measured from broadside.
    pub theta_f: f64,
    /// End-fire Fraunhofer switch, measured from the array axis.
    pub theta_fe: f64,
    pub theta_n1: f64,
    pub theta_n2: f64,
    /// `pi - theta_n2`.
    pub theta_n1_mirror: f64,
    /// `pi - theta_n1`.
    pub theta_n2_mirror: f64,
}

/// `Delta D = min(|r cos theta|, D/2)`, the extra offset of the farthest element.
pub fn delta_d(r: f64, theta: ObservationAngle, spec: &ApertureSpec) -> f64 {
    let (_, c) = theta.sin_cos();
    (r * c).abs().min(spec.aperture() / 2.0)
}

/// Phased-array boundary evaluator for one aperture.
///
/// Construction solves for the switch angles once; the evaluator is `Copy`
/// and can be shared freely across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasedArray {
    spec: ApertureSpec,
    a: f64,
    rel_tol: f64,
    angles: SwitchAngles,
}

impl PhasedArray {
    pub fn new(spec: &ApertureSpec) -> Result<Self> {
        Self::with_tolerance(spec, DEFAULT_REL_TOL)
    }

    pub fn with_tolerance(spec: &ApertureSpec, rel_tol: f64) -> Result<Self> {
        spec.check_array()?;
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::invalid(format!("solver tolerance must lie in (0, 1), got {rel_tol}")));
        }
        let a = spec.d_over_lambda();
        let angles = solve_switch_angles(a, rel_tol)?;
        Ok(Self { spec: *spec, a, rel_tol, angles })
    }

    pub fn spec(&self) -> &ApertureSpec {
        &self.spec
    }

    pub fn switch_angles(&self) -> &SwitchAngles {
        &self.angles
    }

    pub fn tolerance(&self) -> f64 {
        self.rel_tol
    }

    /// Fraunhofer array angle; `Exact` is the value the branch logic uses.
    pub fn array_angle(&self, mode: AngleMode) -> f64 {
        match mode {
            AngleMode::Exact => self.angles.theta_f,
            AngleMode::Approximate => 0.5 * (1.0 / (8.0 * self.a)).asin(),
        }
    }

    fn in_fraunhofer_polynomial_branch(&self, theta: ObservationAngle) -> bool {
        let t = fold(theta);
        t >= FRAC_PI_2 - self.angles.theta_f || t <= self.angles.theta_fe
    }

    fn in_fresnel_capped_branch(&self, theta: ObservationAngle) -> bool {
        let t = fold(theta);
        (self.angles.theta_n1..=self.angles.theta_n2).contains(&t)
    }

    pub fn fraunhofer(&self, theta: ObservationAngle) -> Result<BoundaryValue> {
        let kind = BoundaryKind::FraunhoferArray;
        let (s, _) = theta.folded_sin_abs_cos();
        if s == 0.0 {
            return Ok(BoundaryValue { distance: 0.0, branch: Branch::Degenerate, kind });
        }
        if self.in_fraunhofer_polynomial_branch(theta) {
            let distance = self.fraunhofer_quadratic_root(theta)?;
            return Ok(BoundaryValue { distance, branch: Branch::PolynomialRoot, kind });
        }
        let distance = 8.0 * self.a * self.a * s * s * self.spec.wavelength();
        Ok(BoundaryValue { distance, branch: Branch::CappedClosedForm, kind })
    }

    /// Root of `(2 sin^2 / lambda)(D + 2 d |cos|)^2 = d` below the cap `D / (2 |cos|)`.
    ///
    /// The uncapped map `d -> (pi/lambda) sin^2 (D/2 + d|cos|)^2 / d` is
    /// strictly decreasing up to the cap, where it is stationary, so only the
    /// smaller of the two quadratic roots can lie in the branch.
    pub fn fraunhofer_quadratic_root(&self, theta: ObservationAngle) -> Result<f64> {
        let (s, c) = theta.folded_sin_abs_cos();
        if s == 0.0 {
            return Err(Error::Degenerate { theta: theta.radians() });
        }
        let a = self.a;
        let s2 = s * s;
        if c == 0.0 {
            return Ok(2.0 * a * a * s2 * self.spec.wavelength());
        }
        let cap = a / (2.0 * c);
        let (qa, qb, qc) = (8.0 * s2 * c * c, 8.0 * s2 * a * c - 1.0, 2.0 * s2 * a * a);
        let root = match solve_quadratic(qa, qb, qc) {
            Ok(roots) => roots[0],
            // The double root at the switch angle can round to a slightly
            // negative discriminant.
            Err(SolveError::NoRealRoots { discriminant }) if discriminant >= -CAP_SLACK * qb * qb => {
                -qb / (2.0 * qa)
            }
            Err(SolveError::NoRealRoots { .. }) => {
                return Err(Error::InternalBranch(format!(
                    "no quadratic root below the cap at theta = {} rad; boundary is on the capped branch",
                    theta.radians()
                )))
            }
            Err(e) => return Err(e.into()),
        };
        if !(root > 0.0) || root > cap * (1.0 + CAP_SLACK) {
            return Err(Error::InternalBranch(format!(
                "quadratic root {root} lies outside (0, {cap}] at theta = {} rad",
                theta.radians()
            )));
        }
        Ok(root.min(cap) * self.spec.wavelength())
    }

    pub fn fresnel(&self, theta: ObservationAngle) -> Result<BoundaryValue> {
        let kind = BoundaryKind::FresnelArray;
        let (s, c) = theta.folded_sin_abs_cos();
        if s == 0.0 || c == 0.0 {
            return Ok(BoundaryValue { distance: 0.0, branch: Branch::Degenerate, kind });
        }
        if self.in_fresnel_capped_branch(theta) {
            let a = self.a;
            let distance = (8.0 * c * s * s * a * a * a).sqrt() * self.spec.wavelength();
            return Ok(BoundaryValue { distance, branch: Branch::CappedClosedForm, kind });
        }
        let distance = self.fresnel_cubic_root(theta)?;
        Ok(BoundaryValue { distance, branch: Branch::PolynomialRoot, kind })
    }

    /// Root `y` of `(1/lambda)|cos| sin^2 (D + 2y|cos|)^3 = y^2` with `2y|cos| <= D`.
    ///
    /// Solved in `u = 2y|cos|/D`, where the equation reads
    /// `u^2 = m (1 + u)^3` with `m = 4 (D/lambda) |cos|^3 sin^2`. The ratio
    /// `m (1+u)^3 / u^2` is strictly decreasing on `(0, 2)`, so the root on
    /// `(0, 1]` is unique and bracketed by `[0, 1]`.
    pub fn fresnel_cubic_root(&self, theta: ObservationAngle) -> Result<f64> {
        let (s, c) = theta.folded_sin_abs_cos();
        if s == 0.0 {
            return Err(Error::Degenerate { theta: theta.radians() });
        }
        if c == 0.0 {
            return Ok(0.0);
        }
        let a = self.a;
        let m = 4.0 * a * c * c * c * s * s;
        let at_cap = 8.0 * m - 1.0;
        if at_cap > CAP_SLACK {
            return Err(Error::InternalBranch(format!(
                "cubic root lies beyond the cap at theta = {} rad; boundary is on the capped branch",
                theta.radians()
            )));
        }
        let u = if at_cap >= 0.0 {
            1.0
        } else {
            let phi = |u: f64| m * (1.0 + u).powi(3) - u * u;
            bisect_relative(phi, Bracket::new(0.0, 1.0)?, self.rel_tol, DEFAULT_MAX_ITER)?.root
        };
        Ok(a * u / (2.0 * c) * self.spec.wavelength())
    }

    /// `8 D^2 cos^2(theta_f) / lambda`, attained at `pi/2 +/- theta_f`.
    pub fn max_fraunhofer(&self) -> f64 {
        let c = self.angles.theta_f.cos();
        8.0 * self.a * self.a * c * c * self.spec.wavelength()
    }

    /// The capped Fresnel value at `atan(sqrt 2)`, about `1.7548 sqrt(D^3 / lambda)`.
    ///
    /// `G(atan sqrt 2) = 2.05 > lambda / (2D)` for every admissible aperture,
    /// so the maximizer always sits on the capped branch.
    pub fn max_fresnel(&self) -> f64 {
        let (s, c) = fresnel_maximizer().folded_sin_abs_cos();
        let a = self.a;
        (8.0 * c * s * s * a * a * a).sqrt() * self.spec.wavelength()
    }
}

fn fold(theta: ObservationAngle) -> f64 {
    let t = theta.radians();
    if t > FRAC_PI_2 {
        PI - t
    } else {
        t
    }
}

fn solve_switch_angles(a: f64, rel_tol: f64) -> Result<SwitchAngles> {
    let level = 1.0 / (2.0 * a);
    let t_star = fresnel_maximizer().radians();
    let t_g = fresnel_switch_peak();
    let solve = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> Result<f64> {
        Ok(bisect_relative(f, Bracket::new(lo, hi)?, rel_tol, DEFAULT_MAX_ITER)?.root)
    };

    // Broadside-side roots are solved in phi = pi/2 - theta so that small
    // angles keep full relative precision.
    let theta_f = solve(&|phi: f64| 8.0 * phi.sin() * phi.cos().powi(2) - level, 0.0, FRAC_PI_2 - t_star)?;
    let theta_fe = solve(&|t: f64| 8.0 * t.cos() * t.sin().powi(2) - level, 0.0, t_star)?;
    let theta_n1 = solve(&|t: f64| 16.0 * t.cos().powi(3) * t.sin().powi(2) - level, 0.0, t_g)?;
    let phi_n2 = solve(&|phi: f64| 16.0 * phi.sin().powi(3) * phi.cos().powi(2) - level, 0.0, FRAC_PI_2 - t_g)?;
    let theta_n2 = FRAC_PI_2 - phi_n2;
    Ok(SwitchAngles {
        theta_f,
        theta_fe,
        theta_n1,
        theta_n2,
        theta_n1_mirror: PI - theta_n2,
        theta_n2_mirror: PI - theta_n1,
    })
}

pub fn fraunhofer_array(theta: ObservationAngle, spec: &ApertureSpec) -> Result<BoundaryValue> {
    PhasedArray::new(spec)?.fraunhofer(theta)
}

pub fn fraunhofer_quadratic_root(theta: ObservationAngle, spec: &ApertureSpec) -> Result<f64> {
    PhasedArray::new(spec)?.fraunhofer_quadratic_root(theta)
}

pub fn fraunhofer_array_angle(spec: &ApertureSpec, mode: AngleMode) -> Result<f64> {
    Ok(PhasedArray::new(spec)?.array_angle(mode))
}

pub fn max_fraunhofer_array(spec: &ApertureSpec) -> Result<f64> {
    Ok(PhasedArray::new(spec)?.max_fraunhofer())
}

pub fn fresnel_cubic_root(theta: ObservationAngle, spec: &ApertureSpec) -> Result<f64> {
    PhasedArray::new(spec)?.fresnel_cubic_root(theta)
}

pub fn fresnel_switch_angles(spec: &ApertureSpec) -> Result<SwitchAngles> {
    Ok(*PhasedArray::new(spec)?.switch_angles())
}

pub fn fresnel_array(theta: ObservationAngle, spec: &ApertureSpec) -> Result<BoundaryValue> {
    PhasedArray::new(spec)?.fresnel(theta)
}

pub fn max_fresnel_array(spec: &ApertureSpec) -> Result<f64> {
    Ok(PhasedArray::new(spec)?.max_fresnel())
}
