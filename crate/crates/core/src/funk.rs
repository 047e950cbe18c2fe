//! Funk transform, its principal-value companion, spectral inversion, finite parts
//! and the Hilbert transform of Moses Radon data.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fields::{CurlEigen, Helicity, MosesData, MosesField};
use crate::geometry::{frame_for, ComplexVec3, Direction};
use crate::harmonics::SphericalFunction;
use crate::quadrature::{CircleQuadrature, ComplexLinear, GaussRule, Linear};
use crate::special::legendre_p_at_zero;

/// Funk multipliers `μ_l = 2π P_l(0)`: `∮ Y_lm = μ_l Y_lm(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunkSpectrum {
    mu: Vec<f64>,
}

impl FunkSpectrum {
    pub fn new(lmax: usize) -> Self {
        FunkSpectrum { mu: (0..=lmax).map(|l| 2.0 * PI * legendre_p_at_zero(l)).collect() }
    }

    pub fn multiplier(&self, l: usize) -> f64 {
        self.mu[l]
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.mu
    }
}

/// `∮ g` over the great circle orthogonal to `theta`, trapezoid with `n` nodes.
pub fn great_circle_integral<T: Linear>(theta: Direction, n: &CircleQuadrature, g: impl Fn(Direction) -> T) -> T {
    let f = frame_for(theta);
    n.integrate(|psi| g(f.circle_point(psi)))
}

/// Node layout of the principal-value rule `PV ∫ g(κ)/(κ·θ) dΩ`.
///
/// Writing `κ = cos α θ + sin α e(ψ)`, the hemispheres `α` and `π − α` are
/// paired so the `1/cos α` singularity cancels before quadrature:
/// `∫dψ ∫_0^{π/2} [g(α) − g(π − α)] tan α dα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PvRule {
    pub n_polar: usize,
    pub n_azimuth: usize,
}

impl Default for PvRule {
    fn default() -> Self {
        PvRule { n_polar: 32, n_azimuth: 64 }
    }
}

impl PvRule {
    pub fn validate(&self) -> Result<()> {
        if self.n_polar < 2 || self.n_azimuth < 4 {
            return Err(invalid("pv", format!("rule {}x{} is too small", self.n_polar, self.n_azimuth)));
        }
        Ok(())
    }
}

/// `PV ∫_{S²} g(κ)/(κ·θ) dΩ`.
pub fn pv_sphere_integral<T: Linear>(theta: Direction, rule: PvRule, g: impl Fn(Direction) -> T) -> T {
    let f = frame_for(theta);
    let gauss = GaussRule::new(rule.n_polar);
    let circle = CircleQuadrature::new(rule.n_azimuth.max(4)).expect("at least 4 nodes");
    circle.integrate(|psi| {
        let e = f.circle_point(psi);
        gauss.integrate(0.0, 0.5 * PI, |a| {
            let (s, c) = a.sin_cos();
            let up = Direction::rotate_towards(theta, e, a);
            let down = Direction::rotate_towards(-theta, e, a);
            (g(up) - g(down)) * (s / c)
        })
    })
}

/// Normalized great-circle transform `(1/(2√π)) ∮` of a function on the sphere.
pub fn u0_of<T: Linear>(theta: Direction, n: &CircleQuadrature, g: impl Fn(Direction) -> T) -> T {
    great_circle_integral(theta, n, g) * (0.5 / PI.sqrt())
}

/// `(1/(2π^{3/2})) PV ∫ g/(κ·θ) dΩ`.
pub fn v0_of<T: Linear>(theta: Direction, rule: PvRule, g: impl Fn(Direction) -> T) -> T {
    pv_sphere_integral(theta, rule, g) * (0.5 * PI.powf(-1.5))
}

/// `U⁰ + i V⁰`.
pub fn a0_of<T: ComplexLinear>(
    theta: Direction,
    n: &CircleQuadrature,
    rule: PvRule,
    g: impl Fn(Direction) -> T,
) -> T {
    u0_of(theta, n, &g) + v0_of(theta, rule, &g) * Complex64::new(0.0, 1.0)
}

/// `(1/(2√π)) ∮ f`, so that the bare Funk transform is `2√π` times this.
pub fn funk_transform(f: &SphericalFunction, theta: Direction, n: usize) -> Result<Complex64> {
    Ok(u0_of(theta, &CircleQuadrature::new(n)?, |k| f.eval(k)))
}

/// `(1/(2π^{3/2})) PV ∫ f(κ)/(κ·θ) dΩ`.
pub fn v0_transform(f: &SphericalFunction, theta: Direction, rule: PvRule) -> Result<Complex64> {
    rule.validate()?;
    Ok(v0_of(theta, rule, |k| f.eval(k)))
}

/// Bare Funk transform `∮ f` in coefficient space.
pub fn funk_spectral(f: &SphericalFunction) -> SphericalFunction {
    let spec = FunkSpectrum::new(f.lmax());
    f.map_degrees(|l, c| c * spec.multiplier(l))
}

/// Inverse of the bare Funk transform on even band-limited data.
pub fn semyanistyi_inverse(g: &SphericalFunction) -> Result<SphericalFunction> {
    for l in (1..=g.lmax()).step_by(2) {
        for m in -(l as i64)..=(l as i64) {
            let v = g.coeff(l, m).norm();
            if v > 1e-10 {
                return Err(Error::OddInput { degree: l, value: v });
            }
        }
    }
    let spec = FunkSpectrum::new(g.lmax());
    Ok(g.map_degrees(|l, c| if l % 2 == 0 { c / spec.multiplier(l) } else { Complex64::new(0.0, 0.0) }))
}

/// Hadamard finite part of `∫_{-1}^{1} g(u)/u² du`.
///
/// Pairs `u` with `−u` and subtracts `2 g(0)`; the remainder is a plain integral
/// and the subtracted term contributes `f.p. ∫ u⁻² du = −2`.
pub fn finite_part_moment<T: Linear>(g: impl Fn(f64) -> T, rule: &GaussRule) -> T {
    let g0 = g(0.0);
    let body = rule.integrate(0.0, 1.0, |u| (g(u) + g(-u) - g0 * 2.0) * (1.0 / (u * u)));
    body - g0 * 2.0
}

/// `[ℋ ∂_p F^R](p0, κ)` of a Moses superposition, computed on the exact tones.
pub fn hilbert_radon_moses(
    nu: f64,
    lambda: Helicity,
    s: &SphericalFunction,
    kappa: Direction,
    p0: f64,
) -> Result<ComplexVec3> {
    let m = MosesField::new(CurlEigen::new(nu, lambda)?, s.clone());
    Ok(m.radon_tones(kappa).derivative().hilbert().value(p0))
}
