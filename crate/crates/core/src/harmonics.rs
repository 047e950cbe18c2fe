//! Band-limited functions on the unit sphere in the complex spherical-harmonic basis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{ComplexVec3, Direction};
use crate::quadrature::SphereQuadrature;
use crate::special::{lm_count, lm_index, spherical_harmonics};

/// Scalar function `Σ c_lm Y_lm` with `l ≤ lmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SphericalFunctionRepr", into = "SphericalFunctionRepr")]
pub struct SphericalFunction {
    lmax: usize,
    coeffs: Vec<Complex64>,
}

/// JSON form: either the dense `coeffs` list in `(l, m)` order or sparse `terms`
/// entries `[l, m, re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalFunctionRepr {
    pub lmax: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<(usize, i64, f64, f64)>>,
}

impl TryFrom<SphericalFunctionRepr> for SphericalFunction {
    type Error = Error;
    fn try_from(r: SphericalFunctionRepr) -> Result<Self> {
        match (r.coeffs, r.terms) {
            (Some(c), None) => SphericalFunction::new(r.lmax, c),
            (None, Some(t)) => {
                let terms: Vec<_> = t.into_iter().map(|(l, m, re, im)| (l, m, Complex64::new(re, im))).collect();
                SphericalFunction::from_terms(r.lmax, &terms)
            }
            (None, None) => Ok(SphericalFunction::zero(r.lmax)),
            (Some(_), Some(_)) => Err(invalid("s", "give either `coeffs` or `terms`, not both")),
        }
    }
}

impl From<SphericalFunction> for SphericalFunctionRepr {
    fn from(f: SphericalFunction) -> Self {
        SphericalFunctionRepr { lmax: f.lmax, coeffs: Some(f.coeffs), terms: None }
    }
}

impl SphericalFunction {
    pub fn new(lmax: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lm_count(lmax) {
            return Err(invalid(
                "coeffs",
                format!("expected {} coefficients for lmax = {lmax}, got {}", lm_count(lmax), coeffs.len()),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("coeffs", "coefficients must be finite"));
        }
        Ok(SphericalFunction { lmax, coeffs })
    }

    pub fn zero(lmax: usize) -> Self {
        SphericalFunction { lmax, coeffs: vec![Complex64::new(0.0, 0.0); lm_count(lmax)] }
    }

    /// The constant function `value`.
    pub fn constant(value: Complex64) -> Self {
        SphericalFunction { lmax: 0, coeffs: vec![value * (4.0 * PI).sqrt()] }
    }

    pub fn from_terms(lmax: usize, terms: &[(usize, i64, Complex64)]) -> Result<Self> {
        let mut f = SphericalFunction::zero(lmax);
        for &(l, m, c) in terms {
            if l > lmax || m.unsigned_abs() as usize > l {
                return Err(invalid("terms", format!("(l, m) = ({l}, {m}) outside lmax = {lmax}")));
            }
            if !c.is_finite() {
                return Err(invalid("terms", "coefficients must be finite"));
            }
            f.coeffs[lm_index(l, m)] += c;
        }
        Ok(f)
    }

    /// Coefficients `c_lm = Σ w f conj(Y_lm)` from a quadrature rule.
    pub fn project(lmax: usize, quad: &SphereQuadrature, f: impl Fn(Direction) -> Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); lm_count(lmax)];
        for (&d, &w) in quad.nodes.iter().zip(&quad.weights) {
            let v = f(d) * w;
            for (c, y) in coeffs.iter_mut().zip(spherical_harmonics(lmax, d)) {
                *c += v * y.conj();
            }
        }
        SphericalFunction { lmax, coeffs }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize, m: i64) -> Complex64 {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[lm_index(l, m)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, d: Direction) -> Complex64 {
        spherical_harmonics(self.lmax, d).iter().zip(&self.coeffs).map(|(y, c)| y * c).sum()
    }

    /// Applies `f(l, c_lm)` to every coefficient.
    pub fn map_degrees(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for l in 0..=self.lmax {
            for m in -(l as i64)..=(l as i64) {
                let i = lm_index(l, m);
                coeffs[i] = f(l, coeffs[i]);
            }
        }
        SphericalFunction { lmax: self.lmax, coeffs }
    }

    /// The product with `(1 - z²)^power`, computed exactly.
    ///
    /// The helical basis vectors wind once around the z axis, so Moses integrands
    /// `Q_λ(κ) s(κ)` are only smooth when `s` vanishes at the poles; this is the
    /// band-limited way to get such data.
    pub fn pole_regular(&self, power: usize) -> Self {
        let lmax = self.lmax + 2 * power;
        let quad = SphereQuadrature::gauss_cos(2 * lmax + 2).expect("rule size is at least 2");
        SphericalFunction::project(lmax, &quad, |d| self.eval(d) * (1.0 - d.z() * d.z()).powi(power as i32))
    }

    /// `s(-κ)` as a spherical function: `c_lm ↦ (-1)^l c_lm`.
    pub fn antipodal(&self) -> Self {
        self.map_degrees(|l, c| if l % 2 == 0 { c } else { -c })
    }

    pub fn max_abs_diff(&self, other: &SphericalFunction) -> f64 {
        let lmax = self.lmax.max(other.lmax);
        let mut worst: f64 = 0.0;
        for l in 0..=lmax {
            for m in -(l as i64)..=(l as i64) {
                worst = worst.max((self.coeff(l, m) - other.coeff(l, m)).norm());
            }
        }
        worst
    }
}

/// Three scalar spherical functions, one per Cartesian component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSphericalFunction {
    pub components: [SphericalFunction; 3],
}

impl VectorSphericalFunction {
    pub fn project(lmax: usize, quad: &SphereQuadrature, f: impl Fn(Direction) -> ComplexVec3) -> Self {
        let values: Vec<ComplexVec3> = quad.nodes.iter().map(|&d| f(d)).collect();
        let comp = |i: usize| {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); lm_count(lmax)];
            for ((&d, &w), v) in quad.nodes.iter().zip(&quad.weights).zip(&values) {
                let c = v.component(i) * w;
                for (a, y) in coeffs.iter_mut().zip(spherical_harmonics(lmax, d)) {
                    *a += c * y.conj();
                }
            }
            SphericalFunction { lmax, coeffs }
        };
        VectorSphericalFunction { components: [comp(0), comp(1), comp(2)] }
    }

    pub fn eval(&self, d: Direction) -> ComplexVec3 {
        let [a, b, c] = &self.components;
        ComplexVec3::new(a.eval(d), b.eval(d), c.eval(d))
    }

    pub fn try_map(&self, f: impl Fn(&SphericalFunction) -> Result<SphericalFunction>) -> Result<Self> {
        let [a, b, c] = &self.components;
        Ok(VectorSphericalFunction { components: [f(a)?, f(b)?, f(c)?] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RealVec3;

    fn sample() -> SphericalFunction {
        SphericalFunction::from_terms(
            3,
            &[
                (0, 0, Complex64::new(0.5, 0.1)),
                (1, -1, Complex64::new(-0.3, 0.7)),
                (2, 1, Complex64::new(0.2, -0.4)),
                (3, 3, Complex64::new(1.1, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn projection_recovers_coefficients() {
        let f = sample();
        let q = SphereQuadrature::gauss_cos(8).unwrap();
        let g = SphericalFunction::project(3, &q, |d| f.eval(d));
        assert!(f.max_abs_diff(&g) < 1e-13);
    }

    #[test]
    fn constant_and_antipodal() {
        let c = SphericalFunction::constant(Complex64::new(2.0, -1.0));
        assert!((c.eval(Direction::from_angles(1.0, 2.0)) - Complex64::new(2.0, -1.0)).norm() < 1e-14);
        let f = sample();
        let d = Direction::from_angles(0.4, -2.2);
        assert!((f.antipodal().eval(d) - f.eval(-d)).norm() < 1e-13);
    }

    #[test]
    fn pole_regular_is_the_product() {
        let f = sample();
        let g = f.pole_regular(2);
        assert_eq!(g.lmax(), 7);
        for &(p, a) in &[(0.3, 1.0), (2.0, -0.5), (0.0, 0.0)] {
            let d = Direction::from_angles(p, a);
            let want = f.eval(d) * (1.0 - d.z() * d.z()).powi(2);
            assert!((g.eval(d) - want).norm() < 1e-13);
        }
        assert!(g.eval(Direction::new(RealVec3::Z).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn json_forms() {
        let f: SphericalFunction = serde_json::from_str(r#"{"lmax": 1, "terms": [[1, 0, 2.0, 0.0]]}"#).unwrap();
        assert_eq!(f.coeff(1, 0), Complex64::new(2.0, 0.0));
        let back: SphericalFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(f, back);
        assert!(serde_json::from_str::<SphericalFunction>(r#"{"lmax": 1, "coeffs": [[1.0, 0.0]]}"#).is_err());
    }
}
