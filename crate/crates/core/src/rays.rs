//! X-ray, divergent-beam and Y transforms.
//!
//! Three routes are provided: Gaussian-damped numerical line integrals for any
//! bounded field, great-circle forms for Moses superpositions, and closed forms
//! for the Lundquist field and plane waves.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fields::{check_positive, moses_q, CurlEigen, Helicity, MosesData, MosesField};
use crate::funk::{great_circle_integral, pv_sphere_integral, PvRule};
use crate::geometry::{e_phi, e_r, Beam, ComplexVec3, Direction, RayCoord, RealVec3};
use crate::harmonics::SphericalFunction;
use crate::quadrature::{CircleQuadrature, GaussRule};
use crate::special::bessel_j_sequence;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: ComplexVec3,
    pub error: f64,
}

/// Settings for `∫ F(x + sθ) ds` over a line or half-line of a non-decaying field.
///
/// Each integral is damped by `exp(−ε s²)`, computed for every `ε` of the ladder
/// with shared samples, and extrapolated to `ε = 0` by Neville's scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatoryLineQuadrature {
    pub nu_scale: f64,
    pub panels_per_period: usize,
    pub epsilon_ladder: Vec<f64>,
    pub extrapolation_order: usize,
}

/// Gauss nodes per panel.
const PANEL_NODES: usize = 10;
/// The integrand is cut where `ε_min s² = 40`.
const DAMPING_CUTOFF: f64 = 40.0;

impl OscillatoryLineQuadrature {
    /// Default ladder `ν²·(1/150, 1/300, 1/600, 1/1200)` for oscillation wavenumber `nu_scale`.
    pub fn for_wavenumber(nu_scale: f64) -> Result<Self> {
        check_positive("nu_scale", nu_scale)?;
        let q = nu_scale * nu_scale;
        Ok(OscillatoryLineQuadrature {
            nu_scale,
            panels_per_period: 8,
            epsilon_ladder: [150.0, 300.0, 600.0, 1200.0].iter().map(|d| q / d).collect(),
            extrapolation_order: 4,
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("nu_scale", self.nu_scale)?;
        if self.panels_per_period < 8 {
            return Err(invalid("panels_per_period", "need at least 8"));
        }
        if self.epsilon_ladder.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(invalid("epsilon_ladder", "entries must be positive"));
        }
        if self.epsilon_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("epsilon_ladder", "must be strictly decreasing"));
        }
        if self.extrapolation_order < 2 || self.extrapolation_order > self.epsilon_ladder.len() {
            return Err(invalid("extrapolation_order", "must lie in 2..=ladder length"));
        }
        Ok(())
    }

    fn s_max(&self) -> f64 {
        let eps_min = *self.epsilon_ladder.last().expect("validated ladder");
        (DAMPING_CUTOFF / eps_min).sqrt()
    }

    /// Damped integrals of `f` over `[a, s_max]` for the whole ladder.
    fn ladder(&self, a: f64, f: impl Fn(f64) -> ComplexVec3) -> Vec<ComplexVec3> {
        let b = self.s_max();
        let panel = 2.0 * PI / self.nu_scale / self.panels_per_period as f64;
        let n_panels = ((b - a) / panel).ceil().max(1.0) as usize;
        let h = (b - a) / n_panels as f64;
        let rule = GaussRule::new(PANEL_NODES);
        let mut sums = vec![ComplexVec3::ZERO; self.epsilon_ladder.len()];
        for p in 0..n_panels {
            let lo = a + h * p as f64;
            for (s, w) in rule.on_interval(lo, lo + h) {
                let v = f(s);
                for (acc, eps) in sums.iter_mut().zip(&self.epsilon_ladder) {
                    *acc += v * (w * (-eps * s * s).exp());
                }
            }
        }
        sums
    }

    /// Extrapolates a ladder of damped values to zero damping.
    fn extrapolate(&self, values: &[ComplexVec3]) -> Result<Estimate> {
        let k = self.extrapolation_order;
        let eps = &self.epsilon_ladder[self.epsilon_ladder.len() - k..];
        let vals = &values[values.len() - k..];

        let scale = values.iter().map(|v| v.max_abs()).fold(0.0, f64::max).max(1e-300);
        let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).max_abs()).collect();
        for w in diffs.windows(2) {
            if w[1] > w[0] && w[1] > 1e-12 * scale {
                return Err(Error::NonConvergence(format!("ladder differences {:e} then {:e}", w[0], w[1])));
            }
        }

        // Neville tableau at ε = 0; row j holds the degree-j extrapolants
        let mut t: Vec<ComplexVec3> = vals.to_vec();
        let mut prev_last = t[k - 1];
        for j in 1..k {
            prev_last = t[k - 1];
            for i in (j..k).rev() {
                let (ei, eij) = (eps[i], eps[i - j]);
                t[i] = (t[i] * eij - t[i - 1] * ei) / (eij - ei);
            }
        }
        let value = t[k - 1];
        Ok(Estimate { value, error: (value - prev_last).max_abs() })
    }

    fn integrate(&self, a: f64, f: impl Fn(f64) -> ComplexVec3) -> Result<Estimate> {
        self.validate()?;
        self.extrapolate(&self.ladder(a, f))
    }
}

/// `∫ F(foot + sθ) ds` over the whole line.
pub fn xray_numeric(
    field: impl Fn(RealVec3) -> ComplexVec3,
    ray: RayCoord,
    cfg: &OscillatoryLineQuadrature,
) -> Result<Estimate> {
    let t = ray.theta.vec();
    let b = cfg.s_max();
    cfg.integrate(-b, |s| field(ray.foot + t * s))
}

/// `∫_0^∞ F(source + sθ) ds`.
pub fn dbeam_numeric(
    field: impl Fn(RealVec3) -> ComplexVec3,
    beam: Beam,
    cfg: &OscillatoryLineQuadrature,
) -> Result<Estimate> {
    let t = beam.dir.vec();
    cfg.integrate(0.0, |s| field(beam.source + t * s))
}

/// Signed line integral `∫ sgn(s) F(source + sθ) ds`.
pub fn ytransform_numeric(
    field: impl Fn(RealVec3) -> ComplexVec3,
    beam: Beam,
    cfg: &OscillatoryLineQuadrature,
) -> Result<Estimate> {
    let t = beam.dir.vec();
    cfg.integrate(0.0, |s| field(beam.source + t * s) - field(beam.source - t * s))
}

/// Azimuth and transverse length of a ray direction.
fn transverse(theta: Direction) -> Result<(f64, f64)> {
    let v_r = theta.transverse();
    if v_r <= 1e-10 {
        return Err(Error::DegenerateRay(v_r));
    }
    Ok((theta.y().atan2(theta.x()), v_r))
}

/// Lundquist X-ray closed form times `v_r`, for a direction of azimuth `theta_az`.
///
/// Finite for every direction, so sphere rules carrying the `sin(polar)` factor
/// never see the `1/v_r` growth at the poles.
pub fn xray_lundquist_weighted(theta_az: f64, x: RealVec3, f0: Complex64, nu: f64, lambda: Helicity) -> ComplexVec3 {
    let u = x.rho() * (theta_az - x.y.atan2(x.x)).sin();
    let (s, c) = (nu * u).sin_cos();
    let v = e_r(theta_az) * (lambda.sign() * s) + RealVec3::Z * c;
    ComplexVec3::from_real(v) * (f0 * (2.0 / nu))
}

/// `2F0/(ν v_r) {λ sin(νu) e_r(θ) + cos(νu) e_z}` with `u = r sin(θ − φ)`.
pub fn xray_lundquist_closed(ray: RayCoord, f0: Complex64, nu: f64, lambda: Helicity) -> Result<ComplexVec3> {
    check_positive("nu", nu)?;
    let (az, v_r) = transverse(ray.theta)?;
    Ok(xray_lundquist_weighted(az, ray.foot, f0, nu, lambda) / v_r)
}

/// Truncation of the Bessel series in the Lundquist divergent-beam and Y forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LundquistSeriesCfg {
    /// Stop at the first order past `νr` with `|J_n(νr)| < 1e-16`.
    #[default]
    Auto,
    Fixed(usize),
}

impl LundquistSeriesCfg {
    pub fn validate(&self) -> Result<()> {
        match self {
            LundquistSeriesCfg::Fixed(0) => Err(invalid("nmax", "series needs at least one term")),
            _ => Ok(()),
        }
    }

    /// Bessel values `J_0..J_N` to sum and the first omitted one.
    fn terms(&self, t: f64) -> (Vec<f64>, f64) {
        match *self {
            LundquistSeriesCfg::Fixed(n) => {
                let mut j = bessel_j_sequence(n + 1, t);
                let next = j.pop().unwrap_or(0.0);
                (j, next)
            }
            LundquistSeriesCfg::Auto => {
                let mut nmax = t.ceil() as usize + 32;
                loop {
                    let j = bessel_j_sequence(nmax, t);
                    if let Some(stop) = (0..=nmax).find(|&n| n as f64 > t && j[n].abs() < 1e-16) {
                        let next = j[stop];
                        return (j[..stop].to_vec(), next);
                    }
                    nmax += 32;
                }
            }
        }
    }
}

/// Divergent beam of the λ = +1 Lundquist field times `v_r`, with its tail bound.
fn dbeam_plus_weighted(
    theta_az: f64,
    x: RealVec3,
    f0: Complex64,
    nu: f64,
    cfg: LundquistSeriesCfg,
) -> (ComplexVec3, f64) {
    let t = nu * x.rho();
    let alpha = theta_az - x.y.atan2(x.x);
    let (j, next) = cfg.terms(t);
    let (mut radial, mut axial) = (0.0, j[0]);
    for (n, jn) in j.iter().enumerate().skip(1) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (s, c) = (n as f64 * alpha).sin_cos();
        radial -= 2.0 * sign * s * jn;
        axial += 2.0 * sign * c * jn;
    }
    let v = e_r(theta_az) * radial + e_phi(theta_az) * j[0] + RealVec3::Z * axial;
    let scale = f0 / nu;
    (ComplexVec3::from_real(v) * scale, 4.0 * next.abs() * scale.norm())
}

/// `(x, y, z) ↦ (x, −y, z)`; maps the λ = +1 Lundquist field to λ = −1.
fn reflect_y(v: RealVec3) -> RealVec3 {
    RealVec3::new(v.x, -v.y, v.z)
}

fn reflect_y_c(v: ComplexVec3) -> ComplexVec3 {
    ComplexVec3::new(v.x, -v.y, v.z)
}

/// Lundquist divergent beam times `v_r` and its tail bound.
pub fn dbeam_lundquist_weighted(
    theta_az: f64,
    x: RealVec3,
    f0: Complex64,
    nu: f64,
    lambda: Helicity,
    cfg: LundquistSeriesCfg,
) -> (ComplexVec3, f64) {
    match lambda {
        Helicity::Plus => dbeam_plus_weighted(theta_az, x, f0, nu, cfg),
        Helicity::Minus => {
            let (v, e) = dbeam_plus_weighted(-theta_az, reflect_y(x), f0, nu, cfg);
            (reflect_y_c(v), e)
        }
    }
}

/// Bessel-series divergent beam of the Lundquist field from `beam.source` along `beam.dir`.
///
/// The λ = −1 field is the y-mirror image of the λ = +1 one and is handled that way.
pub fn dbeam_lundquist_closed(
    beam: Beam,
    f0: Complex64,
    nu: f64,
    lambda: Helicity,
    cfg: LundquistSeriesCfg,
) -> Result<Estimate> {
    check_positive("nu", nu)?;
    cfg.validate()?;
    let (az, v_r) = transverse(beam.dir)?;
    let (v, e) = dbeam_lundquist_weighted(az, beam.source, f0, nu, lambda, cfg);
    Ok(Estimate { value: v / v_r, error: e / v_r })
}

fn ytransform_plus_weighted(
    theta_az: f64,
    x: RealVec3,
    f0: Complex64,
    nu: f64,
    cfg: LundquistSeriesCfg,
) -> (ComplexVec3, f64) {
    let t = nu * x.rho();
    let alpha = theta_az - x.y.atan2(x.x);
    let (j, next) = cfg.terms(t);
    let (mut even, mut odd) = (0.0, 0.0);
    for (n, jn) in j.iter().enumerate().skip(1) {
        if n % 2 == 0 {
            even += (n as f64 * alpha).sin() * jn;
        } else {
            odd += (n as f64 * alpha).cos() * jn;
        }
    }
    let v = e_r(theta_az) * (2.0 * even) - e_phi(theta_az) * j[0] + RealVec3::Z * (2.0 * odd);
    let scale = f0 * (-2.0 / nu);
    (ComplexVec3::from_real(v) * scale, 4.0 * next.abs() * scale.norm())
}

/// Lundquist Y transform times `v_r` and its tail bound.
pub fn ytransform_lundquist_weighted(
    theta_az: f64,
    x: RealVec3,
    f0: Complex64,
    nu: f64,
    lambda: Helicity,
    cfg: LundquistSeriesCfg,
) -> (ComplexVec3, f64) {
    match lambda {
        Helicity::Plus => ytransform_plus_weighted(theta_az, x, f0, nu, cfg),
        Helicity::Minus => {
            let (v, e) = ytransform_plus_weighted(-theta_az, reflect_y(x), f0, nu, cfg);
            (reflect_y_c(v), e)
        }
    }
}

/// Bessel-series Y transform of the Lundquist field.
pub fn ytransform_lundquist_closed(
    beam: Beam,
    f0: Complex64,
    nu: f64,
    lambda: Helicity,
    cfg: LundquistSeriesCfg,
) -> Result<Estimate> {
    check_positive("nu", nu)?;
    cfg.validate()?;
    let (az, v_r) = transverse(beam.dir)?;
    let (v, e) = ytransform_lundquist_weighted(az, beam.source, f0, nu, lambda, cfg);
    Ok(Estimate { value: v / v_r, error: e / v_r })
}

/// `2i/k0 · exp(i k0 κ0·x) / (κ0·θ) · Q_λ(κ0)`.
pub fn ytransform_planewave_closed(beam: Beam, k0: f64, kappa0: Direction, lambda: Helicity) -> Result<ComplexVec3> {
    check_positive("k0", k0)?;
    let c = kappa0.dot(beam.dir.vec());
    if c.abs() <= 1e-8 {
        return Err(Error::SingularDirection(c));
    }
    let phase = Complex64::from_polar(1.0, k0 * kappa0.dot(beam.source));
    Ok(moses_q(kappa0, lambda) * (phase * (2.0 * I / (k0 * c))))
}

/// X-ray transform of a Moses superposition: `(2π)^{-1/2} ν^{-1} ∮ G` over the circle `⊥ θ`.
pub fn moses_xray(m: &(impl MosesData + ?Sized), theta: Direction, x: RealVec3, circle: &CircleQuadrature) -> ComplexVec3 {
    let nu = m.eig().wavenumber();
    great_circle_integral(theta, circle, |k| m.integrand(k, x)) * ((2.0 * PI).powf(-0.5) / nu)
}

/// Principal-value half of the divergent beam: `(i/2π)(2π)^{-1/2} ν^{-1} PV ∫ G/(κ·θ)`.
fn moses_pv_part(m: &(impl MosesData + ?Sized), theta: Direction, x: RealVec3, pv: PvRule) -> ComplexVec3 {
    let nu = m.eig().wavenumber();
    let c = I * ((2.0 * PI).powf(-0.5) / (2.0 * PI * nu));
    pv_sphere_integral(theta, pv, |k| m.integrand(k, x)) * c
}

/// Divergent beam of a Moses superposition: `½ X + PV part`.
pub fn moses_dbeam(m: &(impl MosesData + ?Sized), theta: Direction, x: RealVec3, circle: &CircleQuadrature, pv: PvRule) -> ComplexVec3 {
    moses_xray(m, theta, x, circle) * 0.5 + moses_pv_part(m, theta, x, pv)
}

/// Y transform of a Moses superposition (twice the PV part).
pub fn moses_ytransform(m: &(impl MosesData + ?Sized), theta: Direction, x: RealVec3, pv: PvRule) -> ComplexVec3 {
    moses_pv_part(m, theta, x, pv) * 2.0
}

/// [`moses_xray`] from raw parameters.
pub fn xray_via_funk(
    nu: f64,
    lambda: Helicity,
    s: &SphericalFunction,
    ray: RayCoord,
    circle_n: usize,
) -> Result<ComplexVec3> {
    let m = MosesField::new(CurlEigen::new(nu, lambda)?, s.clone());
    Ok(moses_xray(&m, ray.theta, ray.foot, &CircleQuadrature::new(circle_n)?))
}

/// [`moses_dbeam`] from raw parameters.
pub fn dbeam_via_extfunk(
    nu: f64,
    lambda: Helicity,
    s: &SphericalFunction,
    beam: Beam,
    circle_n: usize,
    pv: PvRule,
) -> Result<ComplexVec3> {
    pv.validate()?;
    let m = MosesField::new(CurlEigen::new(nu, lambda)?, s.clone());
    Ok(moses_dbeam(&m, beam.dir, beam.source, &CircleQuadrature::new(circle_n)?, pv))
}

impl From<RayCoord> for Beam {
    fn from(r: RayCoord) -> Beam {
        Beam::new(r.foot, r.theta)
    }
}

/// Relative finite-difference residuals of the differential identities an X-ray
/// transform of a curl eigenfield satisfies, at one `(θ, x)`.
///
/// Derivatives in `θ` act on the homogeneous extension `g(a, x) = X(a/|a|, x)/|a|`
/// with `a` ranging over all of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JohnResiduals {
    /// Asymmetry of `∂²g/∂xⁱ∂aʲ` under `i ↔ j`.
    pub john: f64,
    /// `ε_kij ∂²g_j/∂x^m∂aⁱ − (λν) ∂g_k/∂a^m`.
    pub curl_form: f64,
    /// `∂g_j/∂aʲ`.
    pub theta_divergence: f64,
}

fn homogeneous_xray<F>(xray: &F, a: RealVec3, x: RealVec3) -> Result<ComplexVec3>
where
    F: Fn(Direction, RealVec3) -> Result<ComplexVec3>,
{
    let n = a.norm();
    Ok(xray(Direction::new(a)?, x)? / n)
}

/// Central differences with one Richardson step: `(4 D(h/2) − D(h))/3`.
fn richardson(d: impl Fn(f64) -> Result<ComplexVec3>, h: f64) -> Result<ComplexVec3> {
    Ok((d(0.5 * h)? * 4.0 - d(h)?) / 3.0)
}

/// Residuals of John's equation and its curl form for the transform `xray`.
///
/// `eigenvalue` is the signed curl eigenvalue of the underlying field.
pub fn john_residuals<F>(xray: F, theta: Direction, x: RealVec3, eigenvalue: f64, h: f64) -> Result<JohnResiduals>
where
    F: Fn(Direction, RealVec3) -> Result<ComplexVec3>,
{
    if !(h > 0.0 && h < 0.1) {
        return Err(invalid("h", format!("step must lie in (0, 0.1), got {h}")));
    }
    let a0 = theta.vec();
    let g = |a: RealVec3, y: RealVec3| homogeneous_xray(&xray, a, y);
    let mut first = [ComplexVec3::ZERO; 3];
    for (j, d) in first.iter_mut().enumerate() {
        let e = RealVec3::axis(j);
        *d = richardson(|s| Ok((g(a0 + e * s, x)? - g(a0 - e * s, x)?) / (2.0 * s)), h)?;
    }
    // mixed[i][j] = ∂²g/∂xⁱ∂aʲ
    let mut mixed = [[ComplexVec3::ZERO; 3]; 3];
    for (i, row) in mixed.iter_mut().enumerate() {
        let ex = RealVec3::axis(i);
        for (j, m) in row.iter_mut().enumerate() {
            let ea = RealVec3::axis(j);
            *m = richardson(
                |s| {
                    let pp = g(a0 + ea * s, x + ex * s)?;
                    let pm = g(a0 + ea * s, x - ex * s)?;
                    let mp = g(a0 - ea * s, x + ex * s)?;
                    let mm = g(a0 - ea * s, x - ex * s)?;
                    Ok((pp - pm - mp + mm) / (4.0 * s * s))
                },
                h,
            )?;
        }
    }
    let mixed_scale = mixed.iter().flatten().map(|v| v.max_abs()).fold(0.0, f64::max);
    let mut john: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            john = john.max((mixed[i][j] - mixed[j][i]).max_abs());
        }
    }
    let first_scale = first.iter().map(|v| v.max_abs()).fold(0.0, f64::max);
    let mut curl_form: f64 = 0.0;
    for (m, row) in mixed.iter().enumerate() {
        // (∇_a × ∂_{x^m} g)_k
        let c = [
            row[1].component(2) - row[2].component(1),
            row[2].component(0) - row[0].component(2),
            row[0].component(1) - row[1].component(0),
        ];
        for (k, ck) in c.iter().enumerate() {
            curl_form = curl_form.max((ck - first[m].component(k) * eigenvalue).norm());
        }
    }
    let div: Complex64 = (0..3).map(|j| first[j].component(j)).sum();
    let rel = |v: f64, scale: f64| if scale > 0.0 { v / scale } else { v };
    Ok(JohnResiduals {
        john: rel(john, mixed_scale),
        curl_form: rel(curl_form, eigenvalue.abs() * first_scale),
        theta_divergence: rel(div.norm(), first_scale),
    })
}
