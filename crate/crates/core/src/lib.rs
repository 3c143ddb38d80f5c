//! Near-field / far-field boundary distances for single-element antennas and
//! uniform linear phased arrays.
//!
//! The Fraunhofer distance marks where the quadratic phase error across the
//! aperture drops to pi/8; the Fresnel distance marks the same for the cubic
//! term. For phased arrays the worst-case phase difference is measured
//! between elements instead of against the aperture centre, which raises the
//! Fraunhofer boundary by up to 4x and the Fresnel boundary by up to sqrt(8)x.
//!
//! ```
//! use nearfield::{ApertureSpec, ObservationAngle, PhasedArray};
//!
//! let spec = ApertureSpec::ula(3, 0.5, 1.0)?;
//! let array = PhasedArray::new(&spec)?;
//! let theta = ObservationAngle::from_degrees(45.0)?;
//! assert!((array.fraunhofer(theta)?.distance - 4.0).abs() < 1e-12);
//! # Ok::<(), nearfield::Error>(())
//! ```

pub mod array;
pub mod atlas;
mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod single;

pub use array::{AngleMode, PhasedArray, SwitchAngles};
pub use error::{Error, Result};
pub use model::{ApertureSpec, BoundaryKind, BoundaryValue, Branch, ObservationAngle, PhaseExpansionTerms};
