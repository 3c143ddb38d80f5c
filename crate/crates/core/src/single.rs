//! Classical center-fed single-element boundaries.
//!
//! The worst-case aperture point sits at `D/2` from the feed, giving
//! `2 D^2 sin^2 / lambda` for the quadratic phase term and
//! `sqrt(|cos| sin^2 D^3 / lambda)` for the cubic one.

use crate::model::{ApertureSpec, BoundaryKind, BoundaryValue, Branch, ObservationAngle};

/// Maximizer of `|cos| sin^2` on `(0, pi/2)`: `atan(sqrt 2)`, about 54.7356 deg.
pub fn fresnel_maximizer() -> ObservationAngle {
    ObservationAngle::new(std::f64::consts::SQRT_2.atan()).expect("atan(sqrt 2) lies in [0, pi]")
}

pub fn fraunhofer_single(theta: ObservationAngle, spec: &ApertureSpec) -> BoundaryValue {
    let (s, _) = theta.folded_sin_abs_cos();
    let a = spec.d_over_lambda();
    let distance = 2.0 * a * a * s * s * spec.wavelength();
    let branch = if s == 0.0 { Branch::Degenerate } else { Branch::CappedClosedForm };
    BoundaryValue { distance, branch, kind: BoundaryKind::FraunhoferSingle }
}

/// `2 D^2 / lambda`, reached at broadside.
pub fn max_fraunhofer_single(spec: &ApertureSpec) -> f64 {
    fraunhofer_single(ObservationAngle::BROADSIDE, spec).distance
}

pub fn fresnel_single(theta: ObservationAngle, spec: &ApertureSpec) -> BoundaryValue {
    let (s, c) = theta.folded_sin_abs_cos();
    let a = spec.d_over_lambda();
    let distance = (c * s * s * a * a * a).sqrt() * spec.wavelength();
    let branch = if distance == 0.0 { Branch::Degenerate } else { Branch::CappedClosedForm };
    BoundaryValue { distance, branch, kind: BoundaryKind::FresnelSingle }
}

/// `fresnel_single` at `atan(sqrt 2)`, roughly `0.6204 sqrt(D^3 / lambda)`.
pub fn max_fresnel_single(spec: &ApertureSpec) -> f64 {
    fresnel_single(fresnel_maximizer(), spec).distance
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::expansion_terms;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn deg(d: f64) -> ObservationAngle {
        ObservationAngle::from_degrees(d).unwrap()
    }

    fn norm(a: f64) -> ApertureSpec {
        ApertureSpec::normalized(a).unwrap()
    }

    #[test]
    fn fraunhofer_examples() {
        let b = fraunhofer_single(deg(90.0), &norm(1.0));
        assert_eq!(b.distance, 2.0);
        assert_eq!(b.kind, BoundaryKind::FraunhoferSingle);
        let b = fraunhofer_single(deg(0.0), &norm(1.0));
        assert_eq!((b.distance, b.branch), (0.0, Branch::Degenerate));
        let b = fraunhofer_single(ObservationAngle::new(PI / 6.0).unwrap(), &norm(2.0));
        assert!((b.distance - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fraunhofer_physical_units() {
        // D = 0.3 m at 3 cm: 2 D^2 / lambda = 6 m.
        let spec = ApertureSpec::new(0.3, 0.03).unwrap();
        assert!((max_fraunhofer_single(&spec) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn fraunhofer_maxima() {
        assert_eq!(max_fraunhofer_single(&norm(1.0)), 2.0);
        assert!((max_fraunhofer_single(&norm(19.5)) - 760.5).abs() < 1e-10);
        assert!((max_fraunhofer_single(&norm(0.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fresnel_examples() {
        let b = fresnel_single(deg(90.0), &norm(1.0));
        assert_eq!((b.distance, b.branch), (0.0, Branch::Degenerate));
        let b = fresnel_single(fresnel_maximizer(), &norm(1.0));
        assert!((b.distance - 0.62).abs() < 0.005);
        let b = fresnel_single(deg(45.0), &norm(1.0));
        assert!((b.distance - 0.594_603_557_501_360_5).abs() < 1e-12);
    }

    #[test]
    fn fresnel_maxima() {
        // 40-digit reference: sqrt(cos t* sin^2 t*) = 0.62040323940139973...
        let k = 0.620_403_239_401_399_7;
        assert!((max_fresnel_single(&norm(1.0)) - k).abs() < 1e-14);
        assert!((max_fresnel_single(&norm(4.0)) - 8.0 * k).abs() < 1e-13);
        assert!((max_fresnel_single(&norm(4.0)) - 4.963).abs() < 1e-3);
        for a in [0.1, 0.5, 3.3, 19.5, 250.0] {
            let ratio = max_fresnel_single(&norm(a)) / (a * a * a).sqrt();
            assert!((ratio - k).abs() < 1e-14, "{a}");
        }
    }

    #[test]
    fn maximizers_beat_dense_grid() {
        let spec = norm(2.7);
        let peak_f = max_fraunhofer_single(&spec);
        let peak_n = max_fresnel_single(&spec);
        for i in 0..=100_000 {
            let theta = ObservationAngle::new(PI * i as f64 / 100_000.0).unwrap();
            assert!(fraunhofer_single(theta, &spec).distance <= peak_f);
            assert!(fresnel_single(theta, &spec).distance <= peak_n * (1.0 + 1e-15));
        }
    }

    proptest! {
        #[test]
        fn mirror_symmetry(theta in 0.0f64..PI, a in 0.01f64..100.0) {
            let spec = norm(a);
            let t = ObservationAngle::new(theta).unwrap();
            let f1 = fraunhofer_single(t, &spec).distance;
            let f2 = fraunhofer_single(t.mirror(), &spec).distance;
            prop_assert!((f1 - f2).abs() <= 1e-12 * f1.max(1e-300));
            let n1 = fresnel_single(t, &spec).distance;
            let n2 = fresnel_single(t.mirror(), &spec).distance;
            prop_assert!((n1 - n2).abs() <= 1e-12 * n1.max(1e-300));
        }

        #[test]
        fn defining_equations_round_trip(theta in 1e-3f64..(PI - 1e-3), a in 0.01f64..100.0, lambda in 0.01f64..10.0) {
            let t = ObservationAngle::new(theta).unwrap();
            prop_assume!((theta - PI / 2.0).abs() > 1e-6);
            let spec = ApertureSpec::new(a * lambda, lambda).unwrap();
            let half = spec.aperture() / 2.0;
            let df = fraunhofer_single(t, &spec).distance;
            let t2 = expansion_terms(df, t, half, lambda).unwrap().t2;
            prop_assert!((t2 - PI / 8.0).abs() < 1e-12);
            let dn = fresnel_single(t, &spec).distance;
            let t3 = expansion_terms(dn, t, half, lambda).unwrap().t3;
            prop_assert!((t3.abs() - PI / 8.0).abs() < 1e-12);
        }
    }
}
