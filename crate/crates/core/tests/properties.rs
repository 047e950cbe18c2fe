//! Cross-module invariants, exercised through the public API.

use std::f64::consts::PI;

use beltrami::rays::{dbeam_lundquist_closed, xray_lundquist_closed, ytransform_lundquist_closed};
use beltrami::twistor::{incidence_eta, null_vector, trkalian_from_twistor, LaurentTerm};
use beltrami::{
    curl_fd, div_fd, moses_q, project_to_perp, radon_moses, Beam, Complex64, ContourSpec, Direction, Helicity,
    IntegrandSpec, LundquistSeriesCfg, Phase, PlaneCoord, RealVec3, SphericalFunction, TwistorFunction,
};
use proptest::prelude::*;

fn dir() -> impl Strategy<Value = Direction> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(p, a)| Direction::from_angles(p, a))
}

fn oblique_dir() -> impl Strategy<Value = Direction> {
    (0.25..PI - 0.25, 0.0..2.0 * PI).prop_map(|(p, a)| Direction::from_angles(p, a))
}

fn point(reach: f64) -> impl Strategy<Value = RealVec3> {
    (-reach..reach, -reach..reach, -reach..reach).prop_map(|(x, y, z)| RealVec3::new(x, y, z))
}

fn helicity() -> impl Strategy<Value = Helicity> {
    prop_oneof![Just(Helicity::Plus), Just(Helicity::Minus)]
}

fn complex(reach: f64) -> impl Strategy<Value = Complex64> {
    (-reach..reach, -reach..reach).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #[test]
    fn moses_q_is_transverse_and_unit_at_the_antipode(k in dir(), lam in helicity()) {
        let q = moses_q(-k, lam);
        prop_assert!(q.dot_real(k.vec()).norm() <= 1e-14);
        prop_assert!((q.norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn radon_values_are_transverse(seed in proptest::collection::vec(-1.0..1.0f64, 18), k in dir(), p in -3.0..3.0f64, lam in helicity()) {
        let coeffs = seed.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let s = SphericalFunction::new(2, coeffs).unwrap();
        let v = radon_moses(1.3, lam, &s, PlaneCoord { p, kappa: k }).unwrap();
        prop_assert!(v.dot_real(k.vec()).norm() <= 1e-12 * v.norm().max(1.0));
    }

    #[test]
    fn xray_is_even_and_y_is_odd(t in oblique_dir(), x in point(3.0), lam in helicity(), nu in 0.5..2.0f64) {
        let f0 = Complex64::new(0.6, -0.8);
        let a = xray_lundquist_closed(project_to_perp(x, t), f0, nu, lam).unwrap();
        let b = xray_lundquist_closed(project_to_perp(x, -t), f0, nu, lam).unwrap();
        prop_assert!((a - b).max_abs() <= 1e-12 * a.max_abs().max(1.0));
        let cfg = LundquistSeriesCfg::Auto;
        let y = ytransform_lundquist_closed(Beam::new(x, t), f0, nu, lam, cfg).unwrap().value;
        let ym = ytransform_lundquist_closed(Beam::new(x, -t), f0, nu, lam, cfg).unwrap().value;
        prop_assert!((y + ym).max_abs() <= 1e-12 * y.max_abs().max(1.0));
    }

    #[test]
    fn divergent_beams_decompose(t in oblique_dir(), x in point(3.0), lam in helicity(), nu in 0.5..2.0f64) {
        let f0 = Complex64::new(1.0, 0.3);
        let cfg = LundquistSeriesCfg::Auto;
        let b = Beam::new(x, t);
        let dp = dbeam_lundquist_closed(b, f0, nu, lam, cfg).unwrap().value;
        let dm = dbeam_lundquist_closed(b.reversed(), f0, nu, lam, cfg).unwrap().value;
        let xr = xray_lundquist_closed(project_to_perp(x, t), f0, nu, lam).unwrap();
        let y = ytransform_lundquist_closed(b, f0, nu, lam, cfg).unwrap().value;
        prop_assert!((dp + dm - xr).max_abs() <= 1e-10);
        prop_assert!((dp - dm - y).max_abs() <= 1e-10);
    }

    #[test]
    fn null_vector_identity(w in complex(3.0)) {
        let n = null_vector(w);
        let scale = (1.0 + w.norm_sqr()).powi(2);
        prop_assert!(n.dot(&n).norm() <= 1e-14 * scale);
    }

    #[test]
    fn incidence_rotates_with_the_plane(x in point(3.0), w in complex(2.0), psi in 0.0..2.0 * PI) {
        let (s, c) = psi.sin_cos();
        let rx = RealVec3::new(c * x.x - s * x.y, s * x.x + c * x.y, x.z);
        let rot = Complex64::from_polar(1.0, psi);
        let lhs = incidence_eta(rx, rot * w);
        prop_assert!((lhs - rot * incidence_eta(x, w)).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_laurent_tables_give_curl_eigenfields(
        raw in proptest::collection::vec((0u32..3, -3i32..3, -1.0..1.0f64, -1.0..1.0f64), 1..6),
        f2 in any::<bool>(),
        k in 0.5..2.0f64,
        x in point(1.5),
    ) {
        let terms = raw.into_iter().map(|(a, b, re, im)| LaurentTerm { eta_power: a, omega_power: b, coeff: Complex64::new(re, im) }).collect();
        let phase = if f2 { Phase::F2 } else { Phase::F1 };
        let spec = IntegrandSpec { u: TwistorFunction::Laurent { terms }, phase, k };
        let f = |y: RealVec3| trkalian_from_twistor(&spec, y, &ContourSpec::unit(32)).unwrap();
        let v = f(x) * k;
        prop_assume!(v.norm() > 1e-8);
        prop_assert!((curl_fd(f, x, 1e-3) - v).norm() <= 1e-6 * v.norm());
        prop_assert!(div_fd(f, x, 1e-3).norm() <= 1e-6 * v.norm());
    }
}
