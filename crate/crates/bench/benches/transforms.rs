use beltrami::fields::lundquist_field;
use beltrami::funk::funk_transform;
use beltrami::inversion::invert_spherical_mean;
use beltrami::rays::{moses_xray, xray_numeric};
use beltrami::twistor::{trkalian_from_twistor, LaurentTerm};
use beltrami::{
    BeamFunction, BeamKind, CircleQuadrature, Complex64, ContourSpec, CurlEigen, Direction, Helicity, IntegrandSpec,
    LundquistSeriesCfg, MosesField, OscillatoryLineQuadrature, Phase, PolarGrid, RayCoord, RealVec3, SphericalFunction,
    TwistorFunction,
};
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

fn sample_sphere_function(lmax: usize) -> SphericalFunction {
    let n = (lmax + 1) * (lmax + 1);
    let coeffs = (0..n).map(|i| Complex64::new(1.0 / (1.0 + i as f64), 0.3 * (i as f64).sin())).collect();
    SphericalFunction::new(lmax, coeffs).unwrap()
}

fn bench_line_integrals(c: &mut Criterion) {
    let theta = Direction::from_angles(0.9, 0.4);
    let foot = RealVec3::new(0.3, -0.2, 0.5);
    let ray = RayCoord::new(theta, foot - theta.vec() * foot.dot(theta.vec())).unwrap();
    let f0 = Complex64::new(1.0, 0.0);
    let cfg = OscillatoryLineQuadrature::for_wavenumber(1.0).unwrap();
    c.bench_function("xray_numeric_lundquist", |b| {
        b.iter(|| xray_numeric(|x| lundquist_field(f0, 1.0, Helicity::Plus, x), black_box(ray), &cfg).unwrap())
    });

    let m = MosesField::new(CurlEigen::new(1.0, Helicity::Plus).unwrap(), sample_sphere_function(4));
    let circle = CircleQuadrature::new(64).unwrap();
    c.bench_function("moses_xray", |b| b.iter(|| moses_xray(&m, black_box(theta), foot, &circle)));
}

fn bench_inversion(c: &mut Criterion) {
    let eig = CurlEigen::new(1.3, Helicity::Minus).unwrap();
    let xf = BeamFunction::lundquist(BeamKind::XRay, Complex64::new(1.0, 0.2), eig, LundquistSeriesCfg::Auto).unwrap();
    let grid = PolarGrid::new(64, 128).unwrap();
    let x = RealVec3::new(0.4, -0.3, 0.2);
    c.bench_function("invert_spherical_mean", |b| b.iter(|| invert_spherical_mean(&xf, black_box(x), eig, &grid).unwrap()));
}

fn bench_funk(c: &mut Criterion) {
    let s = sample_sphere_function(8);
    let theta = Direction::from_angles(1.1, 2.0);
    c.bench_function("funk_transform_l8", |b| b.iter(|| funk_transform(&s, black_box(theta), 128).unwrap()));
}

fn bench_twistor(c: &mut Criterion) {
    let terms = vec![
        LaurentTerm { eta_power: 1, omega_power: -2, coeff: Complex64::new(1.0, 0.0) },
        LaurentTerm { eta_power: 0, omega_power: 1, coeff: Complex64::new(0.0, 0.5) },
    ];
    let spec = IntegrandSpec { u: TwistorFunction::Laurent { terms }, phase: Phase::F1, k: 1.2 };
    let contour = ContourSpec::unit(32);
    let x = RealVec3::new(0.3, 0.4, -0.2);
    c.bench_function("twistor_laurent", |b| b.iter(|| trkalian_from_twistor(&spec, black_box(x), &contour).unwrap()));
}

criterion_group!(benches, bench_line_integrals, bench_inversion, bench_funk, bench_twistor);
criterion_main!(benches);
