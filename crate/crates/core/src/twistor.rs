//! Mini-twistor contour integrals for curl eigenfields and scalar Helmholtz solutions.
//!
//! A point `x` meets the twistors `(η, ω)` with `η = (x+iy) + 2zω − (x−iy)ω²`.
//! Fields are contour integrals in `ω` of a holomorphic `u(η, ω)` against the null
//! vector `[(1−ω²), i(1+ω²), 2ω]` and a plane-wave phase `exp(−ik f)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fields::{check_positive, complex_json, curl_fd};
use crate::geometry::{e_phi, e_r, ComplexVec3, RealVec3};
use crate::quadrature::{ComplexLinear, SphereQuadrature};
use crate::special::{bessel_j, bessel_j_over_x, bessel_j_prime, legendre_p, spherical_j1};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Poles closer than this to the contour are rejected.
pub const POLE_GUARD: f64 = 1e-6;

/// Adaptive contour rules stop doubling here.
pub const MAX_NODES: usize = 4096;

/// Successive adaptive estimates must agree to this, relative to `max(1, |value|)`.
pub const ADAPTIVE_TOL: f64 = 1e-12;

/// `(x+iy) + 2zω − (x−iy)ω²`.
pub fn incidence_eta(x: RealVec3, omega: Complex64) -> Complex64 {
    let zeta = Complex64::new(x.x, x.y);
    zeta + omega * (2.0 * x.z) - zeta.conj() * omega * omega
}

/// A point of mini-twistor space in the chart `ω ≠ ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Twistor {
    #[serde(with = "complex_json")]
    pub eta: Complex64,
    #[serde(with = "complex_json")]
    pub omega: Complex64,
}

impl Twistor {
    /// The twistor of slope `omega` incident with `x`.
    pub fn incident(x: RealVec3, omega: Complex64) -> Self {
        Twistor { eta: incidence_eta(x, omega), omega }
    }

    pub fn is_finite(&self) -> bool {
        self.eta.is_finite() && self.omega.is_finite()
    }
}

/// `[(1−ω²), i(1+ω²), 2ω]`; null for the bilinear product.
pub fn null_vector(omega: Complex64) -> ComplexVec3 {
    let w2 = omega * omega;
    ComplexVec3::new(1.0 - w2, I * (1.0 + w2), omega * 2.0)
}

/// Circle `center + radius·exp(iθ)` sampled at `n` equally spaced nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSpec {
    #[serde(with = "complex_json", default)]
    pub center: Complex64,
    pub radius: f64,
    pub n: usize,
}

impl ContourSpec {
    pub fn unit(n: usize) -> Self {
        ContourSpec { center: Complex64::new(0.0, 0.0), radius: 1.0, n }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("radius", self.radius)?;
        if !self.center.is_finite() {
            return Err(invalid("center", "must be finite"));
        }
        if self.n < 8 {
            return Err(invalid("n", format!("contour needs at least 8 nodes, got {}", self.n)));
        }
        Ok(())
    }

    fn with_nodes(&self, n: usize) -> Self {
        ContourSpec { n, ..*self }
    }

    /// Distance from `p` to the circle.
    pub fn distance(&self, p: Complex64) -> f64 {
        ((p - self.center).norm() - self.radius).abs()
    }
}

/// Trapezoid rule for `∮ g(ω) dω` on the circle, counter-clockwise.
pub fn contour_integrate<T: ComplexLinear>(g: impl Fn(Complex64) -> T, c: &ContourSpec) -> T {
    let step = 2.0 * PI / c.n as f64;
    (0..c.n).fold(T::default(), |acc, j| {
        let e = Complex64::from_polar(c.radius, step * j as f64);
        acc + g(c.center + e) * (I * e * step)
    })
}

/// Doubles the node count from `c.n` until successive estimates agree or
/// [`MAX_NODES`] is reached; returns the value and the node count used.
pub fn contour_integrate_adaptive<T: ComplexLinear>(
    g: impl Fn(Complex64) -> T,
    c: &ContourSpec,
    size: impl Fn(&T) -> f64,
) -> (T, usize) {
    let mut n = c.n;
    let mut prev = contour_integrate(&g, c);
    while n < MAX_NODES {
        n = (2 * n).min(MAX_NODES);
        let next = contour_integrate(&g, &c.with_nodes(n));
        let scale = size(&next).max(1.0);
        if size(&(next - prev)) <= ADAPTIVE_TOL * scale {
            return (next, n);
        }
        prev = next;
    }
    (prev, n)
}

/// Spatial part of the integrating factor in the exponent `exp(−ik f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// `f = ω(x−iy) − z`.
    F1,
    /// `f = ½[ω(x−iy) + (x+iy)/ω]`.
    F2,
}

impl Phase {
    pub fn eval(self, x: RealVec3, omega: Complex64) -> Complex64 {
        let zeta = Complex64::new(x.x, x.y);
        match self {
            Phase::F1 => omega * zeta.conj() - x.z,
            Phase::F2 => (omega * zeta.conj() + zeta / omega) * 0.5,
        }
    }
}

/// One term `c η^a ω^b` of a Laurent table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentTerm {
    pub eta_power: u32,
    pub omega_power: i32,
    #[serde(with = "complex_json")]
    pub coeff: Complex64,
}

/// The holomorphic twistor function `u(η, ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TwistorFunction {
    /// `η^n / (ω − ω0)^m`.
    EtaPowerOverOmega {
        n: u32,
        m: u32,
        #[serde(with = "complex_json", default)]
        omega0: Complex64,
    },
    /// `g(η) / ω^p` with `g(η) = Σ a_j η^j`.
    HolomorphicOfEta { coeffs: Vec<Complex64>, denominator_power: u32 },
    /// `1/ω'^{n+1}` with `ω = iω'`.
    LaurentInOmegaPrime { n: i32 },
    /// `exp(−i(k/2) η/ω) / ω²`.
    LundquistKernel,
    /// `(η/ω)^n / ω`.
    AxisymmetricPower { n: i32 },
    /// Spheromak Debye potential; see [`spheromak_debye_integral`].
    SpheromakDebye {
        #[serde(with = "complex_json")]
        f0: Complex64,
    },
    /// `Σ c η^a ω^b`.
    Laurent { terms: Vec<LaurentTerm> },
}

impl TwistorFunction {
    fn validate(&self) -> Result<()> {
        match self {
            TwistorFunction::EtaPowerOverOmega { omega0, .. } if !omega0.is_finite() => {
                Err(invalid("omega0", "must be finite"))
            }
            TwistorFunction::HolomorphicOfEta { coeffs, .. } if coeffs.iter().any(|c| !c.is_finite()) => {
                Err(invalid("coeffs", "must be finite"))
            }
            TwistorFunction::SpheromakDebye { f0 } if !f0.is_finite() => Err(invalid("f0", "must be finite")),
            TwistorFunction::Laurent { terms } if terms.iter().any(|t| !t.coeff.is_finite()) => {
                Err(invalid("terms", "coefficients must be finite"))
            }
            _ => Ok(()),
        }
    }

    fn eval(&self, k: f64, eta: Complex64, omega: Complex64) -> Complex64 {
        match self {
            TwistorFunction::EtaPowerOverOmega { n, m, omega0 } => {
                eta.powu(*n) / (omega - omega0).powu(*m)
            }
            TwistorFunction::HolomorphicOfEta { coeffs, denominator_power } => {
                let g = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * eta + a);
                g / omega.powu(*denominator_power)
            }
            TwistorFunction::LaurentInOmegaPrime { n } => (-I * omega).powi(-(n + 1)),
            TwistorFunction::LundquistKernel => (-I * (0.5 * k) * eta / omega).exp() / (omega * omega),
            TwistorFunction::AxisymmetricPower { n } => (eta / omega).powi(*n) / omega,
            TwistorFunction::SpheromakDebye { .. } => Complex64::new(f64::NAN, 0.0),
            TwistorFunction::Laurent { terms } => terms
                .iter()
                .map(|t| t.coeff * eta.powu(t.eta_power) * omega.powi(t.omega_power))
                .sum(),
        }
    }

    /// Singular points in `ω` for the point `x`.
    fn poles(&self, x: RealVec3) -> Vec<Complex64> {
        let origin = Complex64::new(0.0, 0.0);
        match self {
            TwistorFunction::EtaPowerOverOmega { m, omega0, .. } if *m > 0 => vec![*omega0],
            TwistorFunction::HolomorphicOfEta { denominator_power, .. } if *denominator_power > 0 => vec![origin],
            TwistorFunction::LaurentInOmegaPrime { n } if *n + 1 > 0 => vec![origin],
            TwistorFunction::LundquistKernel => vec![origin],
            TwistorFunction::AxisymmetricPower { n } if *n < 0 => {
                let mut p = vec![origin];
                p.extend(eta_roots(x));
                p
            }
            TwistorFunction::AxisymmetricPower { .. } => vec![origin],
            TwistorFunction::Laurent { terms } if terms.iter().any(|t| t.omega_power < 0) => vec![origin],
            _ => Vec::new(),
        }
    }
}

/// Roots in `ω` of `η_x(ω)`: `(z ∓ |x|)/(x − iy)`, or `0` on the z axis.
fn eta_roots(x: RealVec3) -> Vec<Complex64> {
    let zb = Complex64::new(x.x, -x.y);
    if zb.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    let r = x.norm();
    vec![(x.z - r) / zb, (x.z + r) / zb]
}

/// A twistor integrand: `u`, the phase kind and the wavenumber `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrandSpec {
    pub u: TwistorFunction,
    pub phase: Phase,
    pub k: f64,
}

impl IntegrandSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.k.is_finite() {
            return Err(invalid("k", "must be finite"));
        }
        if let TwistorFunction::SpheromakDebye { .. } = self.u {
            check_positive("k", self.k)?;
        }
        self.u.validate()
    }

    fn check_contour(&self, x: RealVec3, c: &ContourSpec) -> Result<()> {
        c.validate()?;
        let mut poles = self.u.poles(x);
        if self.phase == Phase::F2 {
            poles.push(Complex64::new(0.0, 0.0));
        }
        for pole in poles {
            let distance = c.distance(pole);
            if distance <= POLE_GUARD {
                return Err(Error::PoleOnContour { pole, distance });
            }
        }
        Ok(())
    }

    fn weight(&self, x: RealVec3, omega: Complex64) -> Complex64 {
        let eta = incidence_eta(x, omega);
        (-I * self.k * self.phase.eval(x, omega)).exp() * self.u.eval(self.k, eta, omega)
    }
}

/// `∮ [(1−ω²), i(1+ω²), 2ω] exp(−ik f) u(η, ω) dω`, a curl eigenfield with eigenvalue `k`.
///
/// The spheromak Debye entry has no contour form; its field is the Debye
/// construction with a radial vector applied to the plane-wave expansion of the
/// potential, integrated over directions (see [`spheromak_debye_field`]).
pub fn trkalian_from_twistor(spec: &IntegrandSpec, x: RealVec3, c: &ContourSpec) -> Result<ComplexVec3> {
    spec.validate()?;
    if let TwistorFunction::SpheromakDebye { f0 } = spec.u {
        c.validate()?;
        return spheromak_debye_field(f0, spec.k, x, c.n);
    }
    Ok(trkalian_with_nodes(spec, x, c)?.0)
}

/// [`trkalian_from_twistor`] for contour integrands, also returning the node count the
/// adaptive rule settled on.
pub fn trkalian_with_nodes(spec: &IntegrandSpec, x: RealVec3, c: &ContourSpec) -> Result<(ComplexVec3, usize)> {
    spec.validate()?;
    if let TwistorFunction::SpheromakDebye { .. } = spec.u {
        return Err(invalid("u", "the spheromak Debye entry has no contour form"));
    }
    spec.check_contour(x, c)?;
    Ok(contour_integrate_adaptive(|w| null_vector(w) * spec.weight(x, w), c, |v: &ComplexVec3| v.max_abs()))
}

/// `∮ exp(−ik f) H(η, ω) dω`, a solution of `∇²φ = −k²φ`.
pub fn scalar_helmholtz_from_twistor(spec: &IntegrandSpec, x: RealVec3, c: &ContourSpec) -> Result<Complex64> {
    spec.validate()?;
    if let TwistorFunction::SpheromakDebye { f0 } = spec.u {
        c.validate()?;
        let big_r = x.norm();
        let theta = if big_r > 0.0 { (x.z / big_r).clamp(-1.0, 1.0).acos() } else { 0.0 };
        return spheromak_debye_integral(f0, spec.k, big_r, theta, c.n.max(64));
    }
    spec.check_contour(x, c)?;
    let (v, _) = contour_integrate_adaptive(|w| spec.weight(x, w), c, |v: &Complex64| v.norm());
    Ok(v)
}

/// Cylindrical CK field from the Laurent term `1/ω'^{n+1}` with phase `F2`.
pub fn trkalian_laurent_ck(n: i32, nu: f64, x: RealVec3, c: &ContourSpec) -> Result<ComplexVec3> {
    check_positive("nu", nu)?;
    let spec = IntegrandSpec { u: TwistorFunction::LaurentInOmegaPrime { n }, phase: Phase::F2, k: nu };
    trkalian_from_twistor(&spec, x, c)
}

/// `4πi exp(−imφ)[im J_m(νr)/(νr) e_r + J_m'(νr) e_φ − J_m(νr) e_z]`, `m = n − 1`.
pub fn laurent_ck_closed(n: i32, nu: f64, x: RealVec3) -> ComplexVec3 {
    let m = i64::from(n) - 1;
    let t = nu * x.rho();
    let phi = x.y.atan2(x.x);
    let radial = if m == 0 {
        ComplexVec3::ZERO
    } else {
        ComplexVec3::from_real(e_r(phi)) * (I * m as f64 * bessel_j_over_x(m, t))
    };
    let rest = ComplexVec3::from_real(e_phi(phi) * bessel_j_prime(m, t) - RealVec3::Z * bessel_j(m, t));
    (radial + rest) * (4.0 * PI * I * Complex64::from_polar(1.0, -(m as f64) * phi))
}

/// `exp(−ik_z z) ∮ exp(−iν f₂) ω^{m−1} dω = 2πi i^{−m} J_m(νr) exp(imφ − ik_z z)` by quadrature.
pub fn ck_cylindrical_potential(m: i32, nu: f64, kz: f64, x: RealVec3, c: &ContourSpec) -> Result<Complex64> {
    check_positive("nu", nu)?;
    let term = LaurentTerm { eta_power: 0, omega_power: m - 1, coeff: Complex64::new(1.0, 0.0) };
    let spec = IntegrandSpec { u: TwistorFunction::Laurent { terms: vec![term] }, phase: Phase::F2, k: nu };
    Ok(scalar_helmholtz_from_twistor(&spec, x, c)? * Complex64::from_polar(1.0, -kz * x.z))
}

/// `(1/2πi) ∮ exp(−iσ f₁)/η dω` for `z > 0`, which equals `½ exp(iσ|x|)/|x|`.
///
/// Only the root `(z − |x|)/(x − iy)` of `η` lies inside the unit circle then.
pub fn fundamental_solution_check(x: RealVec3, sigma: f64, c: &ContourSpec) -> Result<Complex64> {
    if !(x.z > 0.0) {
        return Err(Error::BranchViolation(x.z));
    }
    c.validate()?;
    for pole in eta_roots(x) {
        let distance = c.distance(pole);
        if distance <= 1e-3 {
            return Err(Error::PoleOnContour { pole, distance });
        }
    }
    let spec = IntegrandSpec { u: TwistorFunction::AxisymmetricPower { n: -1 }, phase: Phase::F1, k: sigma };
    Ok(scalar_helmholtz_from_twistor(&spec, x, c)? / (2.0 * PI * I))
}

/// `½ exp(iσ|x|)/|x|`.
pub fn fundamental_solution_closed(x: RealVec3, sigma: f64) -> Complex64 {
    let r = x.norm();
    Complex64::from_polar(0.5 / r, sigma * r)
}

/// Vector multiplying the Debye potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DebyeAxis {
    /// A constant vector.
    Fixed(RealVec3),
    /// The position vector `x`.
    Radial,
}

impl DebyeAxis {
    fn at(self, x: RealVec3) -> RealVec3 {
        match self {
            DebyeAxis::Fixed(w) => w,
            DebyeAxis::Radial => x,
        }
    }
}

/// `−[σ ∇×(φw) + ∇×∇×(φw)]` by nested Richardson central differences of step `h`.
pub fn ck_from_debye(
    phi: impl Fn(RealVec3) -> Complex64,
    w: DebyeAxis,
    sigma: f64,
    x: RealVec3,
    h: f64,
) -> Result<ComplexVec3> {
    if !(h > 0.0 && h < 0.1) {
        return Err(invalid("h", format!("step must lie in (0, 0.1), got {h}")));
    }
    let pw = |y: RealVec3| ComplexVec3::from_real(w.at(y)) * phi(y);
    let once = |y: RealVec3| curl_fd(pw, y, h);
    let twice = curl_fd(once, x, h);
    Ok(-(once(x) * sigma + twice))
}

/// `−(i/2)(F0/k) ∫_0^π exp(−ikR cosθ cosα) J₀(kR sinθ sinα) P₁(cosα) sinα dα`
/// by Gauss–Legendre with `nquad` nodes; equals `−(F0/k) j₁(kR) cosθ`.
pub fn spheromak_debye_integral(f0: Complex64, k: f64, big_r: f64, theta: f64, nquad: usize) -> Result<Complex64> {
    check_positive("k", k)?;
    if nquad < 64 {
        return Err(invalid("nquad", format!("need at least 64 nodes, got {nquad}")));
    }
    let (st, ct) = theta.sin_cos();
    let kr = k * big_r;
    let rule = crate::quadrature::GaussRule::new(nquad);
    let body = rule.integrate(-1.0, 1.0, |u: f64| {
        let s = (1.0 - u * u).max(0.0).sqrt();
        Complex64::from_polar(1.0, -kr * ct * u) * (bessel_j(0, kr * st * s) * legendre_p(1, u))
    });
    Ok(body * (-0.5 * I * f0 / k))
}

/// `−(F0/k) j₁(kR) cosθ`.
pub fn spheromak_debye_closed(f0: Complex64, k: f64, x: RealVec3) -> Complex64 {
    let big_r = x.norm();
    let ct = if big_r > 0.0 { x.z / big_r } else { 0.0 };
    -f0 / k * spherical_j1(k * big_r) * ct
}

/// Debye field of the spheromak potential with the radial vector, exactly.
///
/// The potential is `−(i/4π)(F0/k) ∫ d_z exp(−ik d·x) dΩ_d`, and for one plane wave
/// `−[k∇×(φx) + ∇×∇×(φx)] = φ [ik² d×x + k² d×(d×x) + 2ik d]`. The direction
/// integral uses a Gauss rule in `d_z` sized from `n`, doubled until it settles.
pub fn spheromak_debye_field(f0: Complex64, k: f64, x: RealVec3, n: usize) -> Result<ComplexVec3> {
    check_positive("k", k)?;
    let eval = |l: usize| -> Result<ComplexVec3> {
        let quad = SphereQuadrature::gauss_cos(l)?;
        let sum = quad.integrate(|d| {
            let d = d.vec();
            let dx = d.cross(x);
            let v = ComplexVec3::from_real(dx) * (I * k * k)
                + ComplexVec3::from_real(d.cross(dx) * (k * k))
                + ComplexVec3::from_real(d) * (2.0 * I * k);
            v * (Complex64::from_polar(1.0, -k * d.dot(x)) * d.z)
        });
        Ok(sum * (-I / (4.0 * PI) * f0 / k))
    };
    let mut l = (n / 2).max(8);
    let mut prev = eval(l)?;
    while l < MAX_NODES / 2 {
        l *= 2;
        let next = eval(l)?;
        if (next - prev).max_abs() <= ADAPTIVE_TOL * next.max_abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// `2πi exp(ikz) {[−ik ζ̄ g(ζ) + 2z g'(ζ)](1, i, 0) + 2g(ζ)(0, 0, 1)}` for `u = g(η)/ω²`, phase `F1`.
pub fn planar_solution_closed(coeffs: &[Complex64], k: f64, x: RealVec3) -> ComplexVec3 {
    let zeta = Complex64::new(x.x, x.y);
    let zero = Complex64::new(0.0, 0.0);
    let g = coeffs.iter().rev().fold(zero, |acc, a| acc * zeta + a);
    let gp = coeffs.iter().enumerate().skip(1).rev().fold(zero, |acc, (j, a)| acc * zeta + a * j as f64);
    let lead = -I * k * zeta.conj() * g + gp * (2.0 * x.z);
    let v = ComplexVec3::new(lead, lead * I, g * 2.0);
    v * (2.0 * PI * I * Complex64::from_polar(1.0, k * x.z))
}
