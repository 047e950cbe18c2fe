//! Helical basis, the analytic field catalog, Moses synthesis and finite-difference curls.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{e_phi, e_r, frame_for, ComplexVec3, Direction, PlaneCoord, RealVec3};
use crate::harmonics::SphericalFunction;
use crate::quadrature::SphereQuadrature;
use crate::special::{bessel_j, bessel_j_over_x, bessel_j_prime, spherical_j1, spherical_j1_over_x};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Sign of the curl eigenvalue; serialized as `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Helicity {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

impl TryFrom<i8> for Helicity {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            _ => Err(invalid("lambda", format!("helicity must be 1 or -1, got {v}"))),
        }
    }
}

impl From<Helicity> for i8 {
    fn from(h: Helicity) -> i8 {
        h.sign() as i8
    }
}

impl fmt::Display for Helicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Helicity::Plus { "+1" } else { "-1" })
    }
}

/// Curl eigenvalue split into its magnitude `nu > 0` and its sign.
///
/// `∇×F = λ·ν F`. Moses modes oscillate as `exp(i ν κ·x)` whatever the sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlEigen {
    nu: f64,
    helicity: Helicity,
}

impl CurlEigen {
    pub fn new(nu: f64, helicity: Helicity) -> Result<Self> {
        check_positive("nu", nu)?;
        Ok(CurlEigen { nu, helicity })
    }

    /// `|eigenvalue|`.
    pub fn wavenumber(&self) -> f64 {
        self.nu
    }

    pub fn helicity(&self) -> Helicity {
        self.helicity
    }

    /// Signed eigenvalue `λν`.
    pub fn eigenvalue(&self) -> f64 {
        self.helicity.sign() * self.nu
    }
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}

/// Helical eigenvector of `κ×`: `(e1 + iλ e2)/√2` in the frame of `κ`.
///
/// Satisfies `κ×Q = −iλQ`, `κ·Q = 0`, `|Q| = 1`.
pub fn moses_q(kappa: Direction, lambda: Helicity) -> ComplexVec3 {
    let f = frame_for(kappa);
    let l = lambda.sign();
    ComplexVec3::from_parts(f.e1.vec(), f.e2.vec() * l) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex numbers in JSON: a plain number or `[re, im]`.
pub mod complex_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(r) => Complex64::new(r, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        })
    }
}

/// An analytic Trkalian field, as written in JSON config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrkalianSpec {
    /// `exp(i k0 κ0·x) Q_λ(κ0)`, eigenvalue `λ k0`.
    PlaneWave { k0: f64, kappa0: Direction, lambda: Helicity },
    /// `F0 [λ J1(νr) e_φ + J0(νr) e_z]`, eigenvalue `λν`.
    Lundquist {
        #[serde(with = "complex_json")]
        f0: Complex64,
        nu: f64,
        lambda: Helicity,
    },
    /// Cylindrical Chandrasekhar–Kendall mode of order `m`, eigenvalue `ν`.
    CkCylindrical { m: i64, nu: f64 },
    /// z-dependent Lundquist generalization, eigenvalue `σ`.
    GeneralizedLundquist { sigma: f64 },
    /// Classical spheromak, eigenvalue `k`.
    Spheromak {
        #[serde(with = "complex_json")]
        f0: Complex64,
        k: f64,
    },
    /// Moses superposition `(2π)^{-3/2} ∫ exp(iν κ·x) Q_λ(κ) s(κ) dΩ`.
    MosesBandLimited { nu: f64, lambda: Helicity, s: SphericalFunction },
}

impl TrkalianSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            TrkalianSpec::PlaneWave { k0, .. } => check_positive("k0", *k0),
            TrkalianSpec::Lundquist { f0, nu, .. } => {
                check_finite_c("f0", *f0)?;
                check_positive("nu", *nu)
            }
            TrkalianSpec::CkCylindrical { nu, .. } => check_positive("nu", *nu),
            TrkalianSpec::GeneralizedLundquist { sigma } => check_positive("sigma", *sigma),
            TrkalianSpec::Spheromak { f0, k } => {
                check_finite_c("f0", *f0)?;
                check_positive("k", *k)
            }
            TrkalianSpec::MosesBandLimited { nu, .. } => check_positive("nu", *nu),
        }
    }

    /// Signed curl eigenvalue.
    pub fn eigenvalue(&self) -> f64 {
        match self {
            TrkalianSpec::PlaneWave { k0, lambda, .. } => lambda.sign() * k0,
            TrkalianSpec::Lundquist { nu, lambda, .. } | TrkalianSpec::MosesBandLimited { nu, lambda, .. } => {
                lambda.sign() * nu
            }
            TrkalianSpec::CkCylindrical { nu, .. } => *nu,
            TrkalianSpec::GeneralizedLundquist { sigma } => *sigma,
            TrkalianSpec::Spheromak { k, .. } => *k,
        }
    }

    /// Validates and prepares the field for repeated evaluation.
    pub fn build(&self) -> Result<Trkalian> {
        self.validate()?;
        let moses = match self {
            TrkalianSpec::MosesBandLimited { nu, lambda, s } => {
                Some(MosesField::new(CurlEigen::new(*nu, *lambda)?, s.clone()))
            }
            _ => None,
        };
        Ok(Trkalian { spec: self.clone(), moses })
    }
}

fn check_finite_c(name: &'static str, c: Complex64) -> Result<()> {
    if c.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, "must be finite"))
    }
}

/// Closed-form field value for `spec` at `x`.
pub fn eval_field(spec: &TrkalianSpec, x: RealVec3) -> Result<ComplexVec3> {
    Ok(spec.build()?.eval(x))
}

/// A validated [`TrkalianSpec`].
#[derive(Debug, Clone)]
pub struct Trkalian {
    spec: TrkalianSpec,
    moses: Option<MosesField>,
}

impl Trkalian {
    pub fn spec(&self) -> &TrkalianSpec {
        &self.spec
    }

    pub fn eigenvalue(&self) -> f64 {
        self.spec.eigenvalue()
    }

    pub fn eval(&self, x: RealVec3) -> ComplexVec3 {
        match &self.spec {
            TrkalianSpec::PlaneWave { k0, kappa0, lambda } => {
                moses_q(*kappa0, *lambda) * Complex64::from_polar(1.0, k0 * kappa0.dot(x))
            }
            TrkalianSpec::Lundquist { f0, nu, lambda } => lundquist_field(*f0, *nu, *lambda, x),
            TrkalianSpec::CkCylindrical { m, nu } => ck_cylindrical_field(*m, *nu, x),
            TrkalianSpec::GeneralizedLundquist { sigma } => generalized_lundquist_field(*sigma, x),
            TrkalianSpec::Spheromak { f0, k } => spheromak_field(*f0, *k, x),
            TrkalianSpec::MosesBandLimited { .. } => self.moses.as_ref().expect("built with moses data").eval(x),
        }
    }
}

/// Lundquist field `F0 [λ J1(νr) e_φ + J0(νr) e_z]`.
pub fn lundquist_field(f0: Complex64, nu: f64, lambda: Helicity, x: RealVec3) -> ComplexVec3 {
    let r = x.rho();
    let phi = x.y.atan2(x.x);
    let re = e_phi(phi) * (lambda.sign() * bessel_j(1, nu * r)) + RealVec3::Z * bessel_j(0, nu * r);
    ComplexVec3::from_real(re) * f0
}

/// `4πi e^{−imφ}[im J_m(νr)/(νr) e_r + J'_m(νr) e_φ − J_m(νr) e_z]`.
pub fn ck_cylindrical_field(m: i64, nu: f64, x: RealVec3) -> ComplexVec3 {
    let r = x.rho();
    let phi = x.y.atan2(x.x);
    let t = nu * r;
    let jm = bessel_j(m, t);
    let radial = if m == 0 { Complex64::new(0.0, 0.0) } else { I * (m as f64) * bessel_j_over_x(m, t) };
    let v = ComplexVec3::from_real(e_r(phi)) * radial
        + ComplexVec3::from_real(e_phi(phi) * bessel_j_prime(m, t) - RealVec3::Z * jm);
    v * (Complex64::from_polar(1.0, -(m as f64) * phi) * (4.0 * PI * I))
}

/// `−4πiσ²{−(1/σ)J1(σr) e_r + z[J1(σr) e_φ + J0(σr) e_z]}`.
pub fn generalized_lundquist_field(sigma: f64, x: RealVec3) -> ComplexVec3 {
    let r = x.rho();
    let phi = x.y.atan2(x.x);
    let t = sigma * r;
    let (j0, j1) = (bessel_j(0, t), bessel_j(1, t));
    let v = e_r(phi) * (-j1 / sigma) + (e_phi(phi) * j1 + RealVec3::Z * j0) * x.z;
    ComplexVec3::from_real(v) * (-4.0 * PI * I * sigma * sigma)
}

/// Classical spheromak in spherical coordinates about the origin.
pub fn spheromak_field(f0: Complex64, k: f64, x: RealVec3) -> ComplexVec3 {
    let big_r = x.norm();
    if big_r == 0.0 {
        return ComplexVec3::from_real(RealVec3::Z * (2.0 / 3.0)) * f0;
    }
    let t = k * big_r;
    let (ct, st) = (x.z / big_r, x.rho() / big_r);
    let phi = x.y.atan2(x.x);
    let e_big_r = x * (1.0 / big_r);
    let e_theta = e_r(phi) * ct - RealVec3::Z * st;
    let j1 = spherical_j1(t);
    let j1x = spherical_j1_over_x(t);
    // (j1 − sin t)/t = j1/t − j0
    let j0 = if t < 1e-3 { 1.0 - t * t / 6.0 + t.powi(4) / 120.0 } else { t.sin() / t };
    let v = e_big_r * (2.0 * j1x * ct) + e_theta * ((j1x - j0) * st) + e_phi(phi) * (j1 * st);
    ComplexVec3::from_real(v) * f0
}

/// `Q_λ(κ) (Q_λ(κ)^† w)`: the helicity-λ part of `w` transverse to `κ`.
///
/// Written without a frame, so it is smooth wherever `w` is.
pub fn helical_projection(kappa: Direction, lambda: Helicity, w: ComplexVec3) -> ComplexVec3 {
    let k = kappa.vec();
    let transverse = w - ComplexVec3::from_real(k) * w.dot_real(k);
    (transverse + w.crossed_by(k) * (I * lambda.sign())) * 0.5
}

/// Spectral data of a Trkalian field: the vector amplitude `G(κ)` on the unit sphere.
///
/// The field is `(2π)^{-3/2} ∫ exp(iν κ·x) G(κ) dΩ`, and `G` must be a helicity-λ
/// eigenvector of `κ×` at every `κ`.
pub trait MosesData: Sync {
    fn eig(&self) -> CurlEigen;

    fn amplitude(&self, kappa: Direction) -> ComplexVec3;

    /// `exp(iν κ·x) G(κ)`.
    fn integrand(&self, kappa: Direction, x: RealVec3) -> ComplexVec3 {
        self.amplitude(kappa) * Complex64::from_polar(1.0, self.eig().wavenumber() * kappa.dot(x))
    }

    /// Sphere integral with a caller-chosen rule.
    fn synthesize(&self, x: RealVec3, quad: &SphereQuadrature) -> ComplexVec3 {
        quad.integrate(|k| self.integrand(k, x)) * moses_norm()
    }

    /// Radon transform as a two-frequency function of the plane offset.
    fn radon_tones(&self, kappa: Direction) -> TwoTone {
        let nu = self.eig().wavenumber();
        let c = (2.0 * PI).sqrt() / (nu * nu);
        TwoTone { omega: nu, plus: self.amplitude(kappa) * c, minus: self.amplitude(-kappa) * c }
    }

    fn radon(&self, plane: PlaneCoord) -> ComplexVec3 {
        self.radon_tones(plane.kappa).value(plane.p)
    }
}

/// Moses data given as the helical projection of a smooth vector function.
pub struct ProjectedMoses<W> {
    eig: CurlEigen,
    w: W,
}

impl<W: Fn(Direction) -> ComplexVec3 + Sync> ProjectedMoses<W> {
    pub fn new(eig: CurlEigen, w: W) -> Self {
        ProjectedMoses { eig, w }
    }
}

impl<W: Fn(Direction) -> ComplexVec3 + Sync> MosesData for ProjectedMoses<W> {
    fn eig(&self) -> CurlEigen {
        self.eig
    }

    fn amplitude(&self, kappa: Direction) -> ComplexVec3 {
        helical_projection(kappa, self.eig.helicity(), (self.w)(kappa))
    }
}

/// Node data of a sphere rule with the Moses amplitude folded into the weight.
#[derive(Debug)]
struct MosesNodes {
    kappa: Vec<RealVec3>,
    weighted: Vec<ComplexVec3>,
}

/// Moses superposition with spectral data `s` on the sphere of radius `ν`.
pub struct MosesField {
    eig: CurlEigen,
    s: SphericalFunction,
    cache: Mutex<BTreeMap<usize, Arc<MosesNodes>>>,
}

impl fmt::Debug for MosesField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MosesField").field("eig", &self.eig).field("s", &self.s).finish()
    }
}

impl Clone for MosesField {
    fn clone(&self) -> Self {
        MosesField::new(self.eig, self.s.clone())
    }
}

/// `(2π)^{-3/2}`.
pub(crate) fn moses_norm() -> f64 {
    (2.0 * PI).powf(-1.5)
}

impl MosesField {
    pub fn new(eig: CurlEigen, s: SphericalFunction) -> Self {
        MosesField { eig, s, cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn s(&self) -> &SphericalFunction {
        &self.s
    }

    fn nodes(&self, n_polar: usize) -> Arc<MosesNodes> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        cache
            .entry(n_polar)
            .or_insert_with(|| {
                let quad = SphereQuadrature::gauss_polar(n_polar, 2 * n_polar).expect("valid rule size");
                let weighted = quad.nodes.iter().zip(&quad.weights).map(|(&k, &w)| self.amplitude(k) * w).collect();
                Arc::new(MosesNodes { kappa: quad.nodes.iter().map(|d| d.vec()).collect(), weighted })
            })
            .clone()
    }

    /// Field value with a rule sized to `ν|x|` and the degree of `s`.
    ///
    /// The rule is Gauss in the polar angle: `Q_λ` winds once about the z axis, so
    /// the integrand is smooth in polar coordinates but not in `cos(polar)`.
    pub fn eval(&self, x: RealVec3) -> ComplexVec3 {
        let reach = self.eig.wavenumber() * x.norm();
        let n_polar = 8 * ((self.s.lmax() as f64 + reach + 40.0) / 8.0).ceil() as usize;
        let nodes = self.nodes(n_polar);
        let nu = self.eig.wavenumber();
        let sum = nodes
            .kappa
            .iter()
            .zip(&nodes.weighted)
            .fold(ComplexVec3::ZERO, |acc, (k, g)| acc + *g * Complex64::from_polar(1.0, nu * k.dot(x)));
        sum * moses_norm()
    }

}

impl MosesData for MosesField {
    fn eig(&self) -> CurlEigen {
        self.eig
    }

    /// `Q_λ(κ) s(κ)`.
    fn amplitude(&self, kappa: Direction) -> ComplexVec3 {
        moses_q(kappa, self.eig.helicity()) * self.s.eval(kappa)
    }
}

/// `(2π)^{-3/2} ∫ exp(iν κ·x) Q_λ(κ) s(κ) dΩ` on the given rule.
pub fn synthesize_moses(
    nu: f64,
    lambda: Helicity,
    s: &SphericalFunction,
    x: RealVec3,
    quad: &SphereQuadrature,
) -> Result<ComplexVec3> {
    Ok(MosesField::new(CurlEigen::new(nu, lambda)?, s.clone()).synthesize(x, quad))
}

/// Radon transform of the Moses superposition on the plane `plane`.
pub fn radon_moses(nu: f64, lambda: Helicity, s: &SphericalFunction, plane: PlaneCoord) -> Result<ComplexVec3> {
    Ok(MosesField::new(CurlEigen::new(nu, lambda)?, s.clone()).radon(plane))
}

/// `plus·exp(iωp) + minus·exp(−iωp)` with `ω > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTone {
    pub omega: f64,
    pub plus: ComplexVec3,
    pub minus: ComplexVec3,
}

impl TwoTone {
    pub fn value(&self, p: f64) -> ComplexVec3 {
        let e = Complex64::from_polar(1.0, self.omega * p);
        self.plus * e + self.minus * e.conj()
    }

    /// Exact `d/dp`.
    pub fn derivative(&self) -> TwoTone {
        let w = I * self.omega;
        TwoTone { omega: self.omega, plus: self.plus * w, minus: self.minus * (-w) }
    }

    /// Hilbert transform: `exp(iωp) ↦ −i sgn(ω) exp(iωp)`.
    pub fn hilbert(&self) -> TwoTone {
        TwoTone { omega: self.omega, plus: self.plus * (-I), minus: self.minus * I }
    }

    pub fn scale(&self, c: Complex64) -> TwoTone {
        TwoTone { omega: self.omega, plus: self.plus * c, minus: self.minus * c }
    }

    /// Pointwise `v × value`.
    pub fn crossed_by(&self, v: RealVec3) -> TwoTone {
        TwoTone { omega: self.omega, plus: self.plus.crossed_by(v), minus: self.minus.crossed_by(v) }
    }

    pub fn sub(&self, o: &TwoTone) -> TwoTone {
        TwoTone { omega: self.omega, plus: self.plus - o.plus, minus: self.minus - o.minus }
    }

    pub fn max_abs(&self) -> f64 {
        self.plus.max_abs().max(self.minus.max_abs())
    }
}

/// Default finite-difference step for [`curl_fd`] and [`div_fd`].
pub const FD_STEP: f64 = 1e-3;

/// `∂F/∂v` by central differences at `h` and `h/2` with one Richardson step.
pub fn directional_fd<F: Fn(RealVec3) -> ComplexVec3>(field: &F, x: RealVec3, v: RealVec3, h: f64) -> ComplexVec3 {
    let central = |h: f64| (field(x + v * h) - field(x - v * h)) / (2.0 * h);
    (central(0.5 * h) * 4.0 - central(h)) / 3.0
}

fn gradient_fd<F: Fn(RealVec3) -> ComplexVec3>(field: &F, x: RealVec3, h: f64) -> [ComplexVec3; 3] {
    [0, 1, 2].map(|i| directional_fd(field, x, RealVec3::axis(i), h))
}

/// Curl by Richardson-extrapolated central differences.
pub fn curl_fd<F: Fn(RealVec3) -> ComplexVec3>(field: F, x: RealVec3, h: f64) -> ComplexVec3 {
    let [dx, dy, dz] = gradient_fd(&field, x, h);
    ComplexVec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
}

/// Divergence by Richardson-extrapolated central differences.
pub fn div_fd<F: Fn(RealVec3) -> ComplexVec3>(field: F, x: RealVec3, h: f64) -> Complex64 {
    let [dx, dy, dz] = gradient_fd(&field, x, h);
    dx.x + dy.y + dz.z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_dir(rng: &mut ChaCha8Rng) -> Direction {
        Direction::from_angles(rng.gen_range(-1.0f64..1.0).acos(), rng.gen_range(0.0..2.0 * PI))
    }

    fn random_s(rng: &mut ChaCha8Rng, lmax: usize) -> SphericalFunction {
        let n = crate::special::lm_count(lmax);
        SphericalFunction::new(lmax, (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .unwrap()
    }

    fn catalog(rng: &mut ChaCha8Rng) -> Vec<TrkalianSpec> {
        vec![
            TrkalianSpec::PlaneWave { k0: 1.3, kappa0: random_dir(rng), lambda: Helicity::Minus },
            TrkalianSpec::Lundquist { f0: c(0.7, -0.2), nu: 1.0, lambda: Helicity::Plus },
            TrkalianSpec::Lundquist { f0: c(1.0, 0.0), nu: 0.8, lambda: Helicity::Minus },
            TrkalianSpec::CkCylindrical { m: 0, nu: 1.1 },
            TrkalianSpec::CkCylindrical { m: 2, nu: 0.9 },
            TrkalianSpec::CkCylindrical { m: -3, nu: 1.0 },
            TrkalianSpec::GeneralizedLundquist { sigma: 1.2 },
            TrkalianSpec::Spheromak { f0: c(1.0, 0.5), k: 1.0 },
            TrkalianSpec::MosesBandLimited { nu: 1.0, lambda: Helicity::Plus, s: random_s(rng, 3) },
        ]
    }

    #[test]
    fn moses_q_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = moses_q(Direction::Z, Helicity::Plus);
        assert!((q - ComplexVec3::new(c(s, 0.0), c(0.0, s), c(0.0, 0.0))).max_abs() < 1e-15);
        let q = moses_q(Direction::Z, Helicity::Minus);
        assert!((q - ComplexVec3::new(c(s, 0.0), c(0.0, -s), c(0.0, 0.0))).max_abs() < 1e-15);
    }

    #[test]
    fn moses_q_is_helical_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let k = random_dir(&mut rng);
            for lam in [Helicity::Plus, Helicity::Minus] {
                let q = moses_q(k, lam);
                let r = q.crossed_by(k.vec()) + q * c(0.0, lam.sign());
                assert!(r.norm() <= 1e-12);
                assert!(q.dot_real(k.vec()).norm() <= 1e-12);
                assert!((q.norm() - 1.0).abs() <= 1e-12);
                let qm = moses_q(-k, lam);
                assert!(qm.dot_real(k.vec()).norm() <= 1e-12 && (qm.norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn helical_projection_matches_frame_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let k = random_dir(&mut rng);
            let w = ComplexVec3::new(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
            for lam in [Helicity::Plus, Helicity::Minus] {
                let q = moses_q(k, lam);
                let want = q * q.hdot(&w);
                assert!((helical_projection(k, lam, w) - want).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn field_examples() {
        let f0 = c(0.3, 1.2);
        let l = TrkalianSpec::Lundquist { f0, nu: 2.0, lambda: Helicity::Plus };
        let v = eval_field(&l, RealVec3::new(0.0, 0.0, 5.0)).unwrap();
        assert!((v - ComplexVec3::new(c(0.0, 0.0), c(0.0, 0.0), f0)).max_abs() < 1e-15);

        let kappa0 = Direction::new(RealVec3::new(1.0, -2.0, 0.5)).unwrap();
        let p = TrkalianSpec::PlaneWave { k0: 2.0, kappa0, lambda: Helicity::Minus };
        assert!((eval_field(&p, RealVec3::ZERO).unwrap() - moses_q(kappa0, Helicity::Minus)).max_abs() < 1e-15);

        let sp = TrkalianSpec::Spheromak { f0, k: 1.5 };
        for z in [-2.0, 1e-5, 0.7, 3.0] {
            let t = 1.5 * f64::abs(z);
            // e_R cos(polar) is +z on both half-axes
            let want = RealVec3::Z * (2.0 * spherical_j1(t) / t);
            let got = eval_field(&sp, RealVec3::new(0.0, 0.0, z)).unwrap();
            assert!((got - ComplexVec3::from_real(want) * f0).max_abs() < 1e-13, "{z}");
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(TrkalianSpec::Lundquist { f0: c(1.0, 0.0), nu: 0.0, lambda: Helicity::Plus }.validate().is_err());
        assert!(TrkalianSpec::Spheromak { f0: c(f64::NAN, 0.0), k: 1.0 }.validate().is_err());
        assert!(TrkalianSpec::GeneralizedLundquist { sigma: -1.0 }.build().is_err());
    }

    #[test]
    fn curl_fd_examples() {
        let k = ComplexVec3::new(c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0));
        assert!(curl_fd(|_| k, RealVec3::new(0.3, 0.1, -2.0), 1e-3).max_abs() < 1e-10);
        let rot = |x: RealVec3| ComplexVec3::from_real(RealVec3::new(-x.y, x.x, 0.0));
        let v = curl_fd(rot, RealVec3::new(1.0, -0.5, 2.0), 1e-3);
        assert!((v - ComplexVec3::from_real(RealVec3::new(0.0, 0.0, 2.0))).max_abs() < 1e-10);
        let f = |x| lundquist_field(c(1.0, 0.0), 1.0, Helicity::Plus, x);
        let x = RealVec3::new(0.7, 0.3, 0.0);
        assert!((curl_fd(f, x, FD_STEP) - f(x)).norm() <= 1e-7 * f(x).norm());
    }

    #[test]
    fn catalog_is_curl_eigen_and_solenoidal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in catalog(&mut rng) {
            let f = spec.build().unwrap();
            let ev = spec.eigenvalue();
            for _ in 0..100 {
                let r = rng.gen_range(0.0..5.0) / ev.abs();
                let phi = rng.gen_range(0.0..2.0 * PI);
                let x = RealVec3::new(r * phi.cos(), r * phi.sin(), rng.gen_range(-3.0..3.0) / ev.abs());
                let v = f.eval(x) * ev;
                let curl = curl_fd(|y| f.eval(y), x, FD_STEP);
                assert!((curl - v).norm() <= 1e-5 * v.norm(), "{spec:?} at {x:?}");
                assert!(div_fd(|y| f.eval(y), x, FD_STEP).norm() <= 1e-6 * v.norm(), "{spec:?}");
            }
        }
    }

    #[test]
    fn ck_m1_is_regular_on_axis() {
        let a = ck_cylindrical_field(1, 1.0, RealVec3::new(1e-9, 0.0, 0.0));
        let b = ck_cylindrical_field(1, 1.0, RealVec3::new(0.0, 1e-9, 0.0));
        assert!((a - b).max_abs() < 1e-8);
    }

    #[test]
    fn synthesis_examples() {
        let q = SphereQuadrature::gauss_polar(24, 48).unwrap();
        let zero = SphericalFunction::zero(4);
        assert_eq!(synthesize_moses(1.0, Helicity::Plus, &zero, RealVec3::new(1.0, 2.0, 3.0), &q).unwrap(), ComplexVec3::ZERO);

        // constant s at the origin against a dense independent rule
        let one = SphericalFunction::constant(c(1.0, 0.0));
        let got = synthesize_moses(1.0, Helicity::Plus, &one, RealVec3::ZERO, &q).unwrap();
        let n_t = 400;
        let n_p = 64;
        let mut dense = ComplexVec3::ZERO;
        for i in 0..n_t {
            let t = PI * (i as f64 + 0.5) / n_t as f64;
            for j in 0..n_p {
                let p = 2.0 * PI * j as f64 / n_p as f64;
                let w = t.sin() * (PI / n_t as f64) * (2.0 * PI / n_p as f64);
                dense += moses_q(Direction::from_angles(t, p), Helicity::Plus) * w;
            }
        }
        dense = dense * moses_norm();
        assert!((got - dense).max_abs() < 1e-10, "{got:?} {dense:?}");
    }

    #[test]
    fn synthesized_field_is_curl_eigen() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_s(&mut rng, 4);
        for lam in [Helicity::Plus, Helicity::Minus] {
            let m = MosesField::new(CurlEigen::new(1.3, lam).unwrap(), s.clone());
            let x = RealVec3::new(0.4, -1.1, 0.8);
            let v = m.eval(x) * m.eig().eigenvalue();
            let curl = curl_fd(|y| m.eval(y), x, FD_STEP);
            assert!((curl - v).norm() <= 1e-6 * v.norm());
            // the fixed-rule entry point agrees with the adaptive one
            let q = SphereQuadrature::gauss_polar(48, 96).unwrap();
            assert!((m.synthesize(x, &q) - m.eval(x)).norm() <= 1e-12);
        }
    }

    #[test]
    fn radon_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_s(&mut rng, 4);
        let zero = SphericalFunction::zero(2);
        let k = random_dir(&mut rng);
        let plane = PlaneCoord { p: 0.4, kappa: k };
        assert_eq!(radon_moses(1.0, Helicity::Plus, &zero, plane).unwrap(), ComplexVec3::ZERO);
        for lam in [Helicity::Plus, Helicity::Minus] {
            let nu = 1.7;
            let m = MosesField::new(CurlEigen::new(nu, lam).unwrap(), s.clone());
            let tones = m.radon_tones(k);
            let v = tones.value(0.4);
            let shifted = tones.value(0.4 + 2.0 * PI / nu);
            assert!((v - shifted).max_abs() <= 1e-12 * v.max_abs().max(1.0));
            assert!(v.dot_real(k.vec()).norm() <= 1e-12);
            let r = tones.derivative().value(0.4) + v.crossed_by(k.vec()) * m.eig().eigenvalue();
            assert!(r.max_abs() <= 1e-10);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"type": "lundquist", "f0": [0.0, 12.566370614359172], "nu": 1.0, "lambda": 1}"#;
        let spec: TrkalianSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, TrkalianSpec::Lundquist { f0: c(0.0, 4.0 * PI), nu: 1.0, lambda: Helicity::Plus });
        let again: TrkalianSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
        let real: TrkalianSpec = serde_json::from_str(r#"{"type": "spheromak", "f0": 2.0, "k": 1.0}"#).unwrap();
        assert_eq!(real, TrkalianSpec::Spheromak { f0: c(2.0, 0.0), k: 1.0 });
        assert!(serde_json::from_str::<TrkalianSpec>(r#"{"type": "lundquist", "f0": 1, "nu": 1, "lambda": 2}"#).is_err());
    }

    proptest! {
        #[test]
        fn two_tone_hilbert_squares_to_minus_identity(a in -2.0..2.0f64, b in -2.0..2.0f64, p in -5.0..5.0f64) {
            let t = TwoTone {
                omega: 1.3,
                plus: ComplexVec3::new(c(a, b), c(b, 0.1), c(0.0, a)),
                minus: ComplexVec3::new(c(b, -a), c(0.2, a), c(a, a)),
            };
            let hh = t.hilbert().hilbert();
            prop_assert!((hh.value(p) + t.value(p)).max_abs() <= 1e-14);
        }
    }
}
