//! Real and complex 3-vectors, unit directions, frames and ray/plane coordinates.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct RealVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for RealVec3 {
    fn from(a: [f64; 3]) -> Self {
        RealVec3::new(a[0], a[1], a[2])
    }
}

impl From<RealVec3> for [f64; 3] {
    fn from(v: RealVec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl RealVec3 {
    pub const ZERO: RealVec3 = RealVec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: RealVec3 = RealVec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: RealVec3 = RealVec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: RealVec3 = RealVec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        RealVec3 { x, y, z }
    }

    /// Unit vector along coordinate axis `i` (0, 1 or 2).
    pub fn axis(i: usize) -> Self {
        match i {
            0 => Self::X,
            1 => Self::Y,
            _ => Self::Z,
        }
    }

    pub fn component(&self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn dot(&self, o: RealVec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: RealVec3) -> RealVec3 {
        RealVec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(*self).sqrt()
    }

    /// Distance from the z axis.
    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for RealVec3 {
    type Output = RealVec3;
    fn add(self, o: RealVec3) -> RealVec3 {
        RealVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for RealVec3 {
    type Output = RealVec3;
    fn sub(self, o: RealVec3) -> RealVec3 {
        RealVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for RealVec3 {
    type Output = RealVec3;
    fn neg(self) -> RealVec3 {
        RealVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for RealVec3 {
    type Output = RealVec3;
    fn mul(self, s: f64) -> RealVec3 {
        RealVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<RealVec3> for f64 {
    type Output = RealVec3;
    fn mul(self, v: RealVec3) -> RealVec3 {
        v * self
    }
}

/// Complex 3-vector: the value type of fields and of their transforms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl ComplexVec3 {
    pub const ZERO: ComplexVec3 = ComplexVec3 {
        x: Complex64::new(0.0, 0.0),
        y: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        ComplexVec3 { x, y, z }
    }

    pub fn from_real(v: RealVec3) -> Self {
        ComplexVec3::new(v.x.into(), v.y.into(), v.z.into())
    }

    /// `re + i im` componentwise.
    pub fn from_parts(re: RealVec3, im: RealVec3) -> Self {
        ComplexVec3::new(
            Complex64::new(re.x, im.x),
            Complex64::new(re.y, im.y),
            Complex64::new(re.z, im.z),
        )
    }

    pub fn component(&self, i: usize) -> Complex64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()).sqrt()
    }

    /// Largest componentwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.x.norm().max(self.y.norm()).max(self.z.norm())
    }

    /// Bilinear product with a real vector (no conjugation).
    pub fn dot_real(&self, v: RealVec3) -> Complex64 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    /// Bilinear product without conjugation.
    pub fn dot(&self, o: &ComplexVec3) -> Complex64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Hermitian product, conjugating `self`.
    pub fn hdot(&self, o: &ComplexVec3) -> Complex64 {
        self.x.conj() * o.x + self.y.conj() * o.y + self.z.conj() * o.z
    }

    pub fn conj(&self) -> ComplexVec3 {
        ComplexVec3::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    /// `v × self` for a real vector `v`.
    pub fn crossed_by(&self, v: RealVec3) -> ComplexVec3 {
        ComplexVec3::new(
            self.z * v.y - self.y * v.z,
            self.x * v.z - self.z * v.x,
            self.y * v.x - self.x * v.y,
        )
    }

    pub fn cross(&self, o: &ComplexVec3) -> ComplexVec3 {
        ComplexVec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn re(&self) -> RealVec3 {
        RealVec3::new(self.x.re, self.y.re, self.z.re)
    }

    pub fn im(&self) -> RealVec3 {
        RealVec3::new(self.x.im, self.y.im, self.z.im)
    }
}

impl Add for ComplexVec3 {
    type Output = ComplexVec3;
    fn add(self, o: ComplexVec3) -> ComplexVec3 {
        ComplexVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for ComplexVec3 {
    fn add_assign(&mut self, o: ComplexVec3) {
        self.x += o.x;
        self.y += o.y;
        self.z += o.z;
    }
}

impl Sub for ComplexVec3 {
    type Output = ComplexVec3;
    fn sub(self, o: ComplexVec3) -> ComplexVec3 {
        ComplexVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for ComplexVec3 {
    type Output = ComplexVec3;
    fn neg(self) -> ComplexVec3 {
        ComplexVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for ComplexVec3 {
    type Output = ComplexVec3;
    fn mul(self, s: f64) -> ComplexVec3 {
        ComplexVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = ComplexVec3;
    fn mul(self, s: Complex64) -> ComplexVec3 {
        ComplexVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for ComplexVec3 {
    type Output = ComplexVec3;
    fn div(self, s: f64) -> ComplexVec3 {
        ComplexVec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Div<Complex64> for ComplexVec3 {
    type Output = ComplexVec3;
    fn div(self, s: Complex64) -> ComplexVec3 {
        ComplexVec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Unit vector in R^3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction(RealVec3);

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Direction::new(a.into())
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.0.into()
    }
}

impl Direction {
    pub const X: Direction = Direction(RealVec3::X);
    pub const Y: Direction = Direction(RealVec3::Y);
    pub const Z: Direction = Direction(RealVec3::Z);

    /// Normalizes `v`; vectors shorter than 1e-12 are rejected.
    pub fn new(v: RealVec3) -> Result<Self> {
        let n = v.norm();
        if !(n >= 1e-12) || !n.is_finite() {
            return Err(Error::ZeroVector(n));
        }
        Ok(Direction(v * (1.0 / n)))
    }

    /// Direction with the given polar angle (from +z) and azimuth.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Direction(RealVec3::new(sp * ca, sp * sa, cp))
    }

    /// `cos(a) * u + sin(a) * v` for orthonormal `u`, `v`; renormalized against rounding.
    pub fn rotate_towards(u: Direction, v: Direction, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let w = u.0 * c + v.0 * s;
        Direction(w * (1.0 / w.norm()))
    }

    pub fn vec(&self) -> RealVec3 {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn dot(&self, v: RealVec3) -> f64 {
        self.0.dot(v)
    }

    /// Length of the projection onto the xy plane.
    pub fn transverse(&self) -> f64 {
        self.0.rho()
    }
}

impl Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction(-self.0)
    }
}

/// Right-handed orthonormal triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoFrame {
    pub e1: Direction,
    pub e2: Direction,
    pub e3: Direction,
}

impl OrthoFrame {
    /// Point of the unit circle in the `e1`, `e2` plane.
    pub fn circle_point(&self, angle: f64) -> Direction {
        Direction::rotate_towards(self.e1, self.e2, angle)
    }
}

/// Frame `(e1, e2, d)` with `e1 = normalize(z × d)`, falling back to `x` near the poles.
pub fn frame_for(d: Direction) -> OrthoFrame {
    let c = RealVec3::Z.cross(d.vec());
    let n = c.norm();
    let e1 = if n > 1e-8 {
        Direction(c * (1.0 / n))
    } else {
        Direction::X
    };
    let e2 = d.vec().cross(e1.vec());
    OrthoFrame {
        e1,
        e2: Direction(e2 * (1.0 / e2.norm())),
        e3: d,
    }
}

/// Oriented line: direction plus the foot point in the plane orthogonal to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayCoord {
    pub theta: Direction,
    pub foot: RealVec3,
}

impl RayCoord {
    pub fn new(theta: Direction, foot: RealVec3) -> Result<Self> {
        let d = foot.dot(theta.vec());
        if d.abs() > 1e-10 {
            return Err(Error::FootNotOrthogonal(d));
        }
        Ok(RayCoord { theta, foot })
    }

    /// The line through `x` with direction `theta`.
    pub fn through(x: RealVec3, theta: Direction) -> Self {
        project_to_perp(x, theta)
    }
}

/// Foot of the line through `x` along `theta`: `x - (x·θ)θ`.
pub fn project_to_perp(x: RealVec3, theta: Direction) -> RayCoord {
    let t = theta.vec();
    let mut foot = x - t * x.dot(t);
    // one refinement step keeps foot·θ at rounding level for large |x|
    foot = foot - t * foot.dot(t);
    RayCoord { theta, foot }
}

/// Half-line from `source` along `dir`; the domain of divergent-beam and Y transforms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub source: RealVec3,
    pub dir: Direction,
}

impl Beam {
    pub fn new(source: RealVec3, dir: Direction) -> Self {
        Beam { source, dir }
    }

    pub fn reversed(&self) -> Beam {
        Beam { source: self.source, dir: -self.dir }
    }
}

/// Plane `{x : x·kappa = p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneCoord {
    pub p: f64,
    pub kappa: Direction,
}

/// Cylindrical unit vectors at azimuth `phi`.
pub fn e_r(phi: f64) -> RealVec3 {
    RealVec3::new(phi.cos(), phi.sin(), 0.0)
}

pub fn e_phi(phi: f64) -> RealVec3 {
    RealVec3::new(-phi.sin(), phi.cos(), 0.0)
}
