//! Quadrature rules on lines, circles and the sphere.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::{ComplexVec3, Direction};

/// Values that can be summed and scaled by reals.
pub trait Linear: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl<T: Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>> Linear for T {}

/// Linear values that can also be scaled by complex numbers.
pub trait ComplexLinear: Linear + Mul<Complex64, Output = Self> {}
impl ComplexLinear for Complex64 {}
impl ComplexLinear for ComplexVec3 {}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 1..n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<T: Linear>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        self.on_interval(a, b).fold(T::default(), |acc, (x, w)| acc + f(x) * w)
    }
}

/// Weighted node set on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    pub nodes: Vec<Direction>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    /// Gauss–Legendre in `cos(polar)` with `l` nodes times `2l` azimuths; exact for
    /// spherical harmonics of degree below `l`.
    pub fn gauss_cos(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(invalid("L", format!("sphere rule needs L >= 2, got {l}")));
        }
        let g = GaussRule::new(l);
        let naz = 2 * l;
        let mut nodes = Vec::with_capacity(l * naz);
        let mut weights = Vec::with_capacity(l * naz);
        for (&u, &w) in g.nodes.iter().zip(&g.weights) {
            let polar = u.clamp(-1.0, 1.0).acos();
            for j in 0..naz {
                nodes.push(Direction::from_angles(polar, 2.0 * PI * j as f64 / naz as f64));
                weights.push(w * 2.0 * PI / naz as f64);
            }
        }
        Ok(SphereQuadrature { nodes, weights })
    }

    /// Gauss–Legendre in the polar angle itself (weights carry `sin(polar)`) times a
    /// uniform azimuth grid. Spectrally accurate for integrands that are smooth in
    /// polar coordinates, including those with a phase winding at the poles.
    pub fn gauss_polar(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        let grid = PolarGrid::new(n_polar, n_azimuth)?;
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for node in grid.nodes() {
            nodes.push(node.dir);
            weights.push(node.weight * node.sin_polar);
        }
        Ok(SphereQuadrature { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<T: Linear>(&self, f: impl Fn(Direction) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&d, &w)| acc + f(d) * w)
    }
}

/// The product rule of [`SphereQuadrature::gauss_cos`].
pub fn make_sphere_quadrature(l: usize) -> Result<SphereQuadrature> {
    SphereQuadrature::gauss_cos(l)
}

/// Uniform trapezoid rule on a circle, `N` nodes `2πj/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleQuadrature {
    n: usize,
}

impl CircleQuadrature {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(invalid("N", format!("circle rule needs N >= 4, got {n}")));
        }
        Ok(CircleQuadrature { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    pub fn weight(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn integrate<T: Linear>(&self, f: impl Fn(f64) -> T) -> T {
        (0..self.n).fold(T::default(), |acc, j| acc + f(self.angle(j))) * self.weight()
    }
}

/// Node of a [`PolarGrid`]; `weight` excludes the `sin(polar)` Jacobian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarNode {
    pub dir: Direction,
    pub polar: f64,
    pub azimuth: f64,
    pub sin_polar: f64,
    pub weight: f64,
}

/// Gauss–Legendre in the polar angle on `[0, π]` times a uniform azimuth grid.
///
/// Integrands are supplied either plainly (the grid multiplies by `sin(polar)`) or
/// already multiplied by the Jacobian, which is how `1/v_r` beams stay finite.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    polar: GaussRule,
    n_azimuth: usize,
}

impl PolarGrid {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        if n_polar < 2 {
            return Err(invalid("n_polar", format!("need at least 2 polar nodes, got {n_polar}")));
        }
        if n_azimuth < 4 {
            return Err(invalid("n_azimuth", format!("need at least 4 azimuth nodes, got {n_azimuth}")));
        }
        Ok(PolarGrid { polar: GaussRule::new(n_polar), n_azimuth })
    }

    pub fn len(&self) -> usize {
        self.polar.len() * self.n_azimuth
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> impl Iterator<Item = PolarNode> + '_ {
        let naz = self.n_azimuth;
        let waz = 2.0 * PI / naz as f64;
        self.polar.on_interval(0.0, PI).flat_map(move |(polar, w)| {
            let s = polar.sin();
            (0..naz).map(move |j| {
                let azimuth = 2.0 * PI * j as f64 / naz as f64;
                PolarNode { dir: Direction::from_angles(polar, azimuth), polar, azimuth, sin_polar: s, weight: w * waz }
            })
        })
    }
}
