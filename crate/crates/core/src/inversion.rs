//! Tomographic inversion of ray transforms and the Riesz/Biot–Savart scalings.
//!
//! Every route here reduces to sphere or great-circle quadrature over beam
//! values; the `δ′` kernels are turned into polar-offset derivatives along a great
//! circle and the `|θ·b|⁻²` kernel into a Hadamard finite part.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fields::{CurlEigen, Helicity, MosesData, MosesField, Trkalian, TwoTone};
use crate::funk::{great_circle_integral, pv_sphere_integral, PvRule};
use crate::geometry::{frame_for, Beam, ComplexVec3, Direction, RealVec3};
use crate::quadrature::{CircleQuadrature, GaussRule, PolarGrid, PolarNode};
use crate::rays::{
    dbeam_lundquist_closed, dbeam_lundquist_weighted, moses_dbeam, moses_xray, moses_ytransform,
    xray_lundquist_closed, xray_lundquist_weighted, ytransform_lundquist_closed, ytransform_lundquist_weighted,
    LundquistSeriesCfg,
};

/// Which line transform a [`BeamFunction`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamKind {
    /// Full-line integral; even in `θ`.
    XRay,
    /// Half-line integral from the source point.
    Divergent,
    /// Difference of opposite half-lines; odd in `θ`.
    Y,
}

/// How the beam values are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Moses,
    Numeric,
}

type PlainFn<'a> = Box<dyn Fn(Direction, RealVec3) -> Result<ComplexVec3> + Send + Sync + 'a>;
type WeightedFn<'a> = Box<dyn Fn(&PolarNode, RealVec3) -> ComplexVec3 + Send + Sync + 'a>;

/// A ray transform as a function of direction and source point.
///
/// An optional second closure returns `sin(polar)` times the value at a
/// [`PolarGrid`] node. Beams that grow like `1/sin(polar)` at the poles supply it
/// so sphere integrals never evaluate the divergent factor.
pub struct BeamFunction<'a> {
    kind: BeamKind,
    provenance: Provenance,
    plain: PlainFn<'a>,
    weighted: Option<WeightedFn<'a>>,
}

impl fmt::Debug for BeamFunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BeamFunction")
            .field("kind", &self.kind)
            .field("provenance", &self.provenance)
            .field("weighted", &self.weighted.is_some())
            .finish()
    }
}

impl<'a> BeamFunction<'a> {
    pub fn new(
        kind: BeamKind,
        provenance: Provenance,
        f: impl Fn(Direction, RealVec3) -> Result<ComplexVec3> + Send + Sync + 'a,
    ) -> Self {
        BeamFunction { kind, provenance, plain: Box::new(f), weighted: None }
    }

    /// Attach the Jacobian-weighted form used on polar grids.
    pub fn with_weighted(mut self, w: impl Fn(&PolarNode, RealVec3) -> ComplexVec3 + Send + Sync + 'a) -> Self {
        self.weighted = Some(Box::new(w));
        self
    }

    pub fn zero(kind: BeamKind) -> BeamFunction<'static> {
        BeamFunction::new(kind, Provenance::ClosedForm, |_, _| Ok(ComplexVec3::ZERO))
    }

    /// Closed-form beams of the Lundquist field.
    pub fn lundquist(kind: BeamKind, f0: Complex64, eig: CurlEigen, cfg: LundquistSeriesCfg) -> Result<BeamFunction<'static>> {
        cfg.validate()?;
        let (nu, lam) = (eig.wavenumber(), eig.helicity());
        let beam = match kind {
            BeamKind::XRay => BeamFunction::new(kind, Provenance::ClosedForm, move |theta, x| {
                xray_lundquist_closed(crate::geometry::project_to_perp(x, theta), f0, nu, lam)
            })
            .with_weighted(move |n, x| xray_lundquist_weighted(n.azimuth, x, f0, nu, lam)),
            BeamKind::Divergent => BeamFunction::new(kind, Provenance::ClosedForm, move |theta, x| {
                Ok(dbeam_lundquist_closed(Beam::new(x, theta), f0, nu, lam, cfg)?.value)
            })
            .with_weighted(move |n, x| dbeam_lundquist_weighted(n.azimuth, x, f0, nu, lam, cfg).0),
            BeamKind::Y => BeamFunction::new(kind, Provenance::ClosedForm, move |theta, x| {
                Ok(ytransform_lundquist_closed(Beam::new(x, theta), f0, nu, lam, cfg)?.value)
            })
            .with_weighted(move |n, x| ytransform_lundquist_weighted(n.azimuth, x, f0, nu, lam, cfg).0),
        };
        Ok(beam)
    }

    /// Beams of a Moses superposition by great-circle and principal-value quadrature.
    pub fn moses<M: MosesData + ?Sized>(kind: BeamKind, m: &'a M, circle: CircleQuadrature, pv: PvRule) -> Result<Self> {
        pv.validate()?;
        let beam = match kind {
            BeamKind::XRay => BeamFunction::new(kind, Provenance::Moses, move |t, x| Ok(moses_xray(m, t, x, &circle))),
            BeamKind::Divergent => {
                BeamFunction::new(kind, Provenance::Moses, move |t, x| Ok(moses_dbeam(m, t, x, &circle, pv)))
            }
            BeamKind::Y => BeamFunction::new(kind, Provenance::Moses, move |t, x| Ok(moses_ytransform(m, t, x, pv))),
        };
        Ok(beam)
    }

    pub fn kind(&self) -> BeamKind {
        self.kind
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn eval(&self, theta: Direction, x: RealVec3) -> Result<ComplexVec3> {
        (self.plain)(theta, x)
    }

    /// `|f(θ) ∓ f(−θ)|` for the parity the kind declares; `None` for divergent beams.
    pub fn parity_defect(&self, theta: Direction, x: RealVec3) -> Result<Option<f64>> {
        let sign = match self.kind {
            BeamKind::XRay => -1.0,
            BeamKind::Y => 1.0,
            BeamKind::Divergent => return Ok(None),
        };
        let (a, b) = (self.eval(theta, x)?, self.eval(-theta, x)?);
        Ok(Some((a + b * sign).norm()))
    }

    /// `sin(polar)` times the value at `node`, through the weighted form when present.
    fn weighted_at(&self, node: &PolarNode, x: RealVec3, index: usize) -> Result<ComplexVec3> {
        let v = match &self.weighted {
            Some(w) => w(node, x),
            None => match (self.plain)(node.dir, x) {
                Ok(v) => v * node.sin_polar,
                Err(Error::DegenerateRay(_)) => return Err(Error::PoleSingularity(index)),
                Err(e) => return Err(e),
            },
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::PoleSingularity(index))
        }
    }

    /// `∫ k(θ, f(sθ, x)) dΩ_θ` on a polar grid, with `s = ±1`.
    fn sphere_integral(
        &self,
        x: RealVec3,
        grid: &PolarGrid,
        flip: bool,
        k: impl Fn(Direction, ComplexVec3) -> ComplexVec3,
    ) -> Result<ComplexVec3> {
        grid.nodes().enumerate().try_fold(ComplexVec3::ZERO, |acc, (i, node)| {
            let at = if flip { antipode(&node) } else { node };
            let v = self.weighted_at(&at, x, i)?;
            Ok(acc + k(node.dir, v) * node.weight)
        })
    }
}

fn antipode(n: &PolarNode) -> PolarNode {
    PolarNode {
        dir: -n.dir,
        polar: PI - n.polar,
        azimuth: (n.azimuth + PI).rem_euclid(2.0 * PI),
        sin_polar: n.sin_polar,
        weight: n.weight,
    }
}

fn expect_kind(beam: &BeamFunction<'_>, kind: BeamKind) -> Result<()> {
    if beam.kind != kind {
        return Err(invalid("beam", format!("expected a {kind:?} beam, got {:?}", beam.kind)));
    }
    Ok(())
}

/// `(ν/4π²) ∫ X(θ, x) dΩ_θ`: the field from the spherical mean of its X-ray transform.
pub fn invert_spherical_mean(xf: &BeamFunction<'_>, x: RealVec3, eig: CurlEigen, grid: &PolarGrid) -> Result<ComplexVec3> {
    expect_kind(xf, BeamKind::XRay)?;
    let s = xf.sphere_integral(x, grid, false, |_, v| v)?;
    Ok(s * (eig.wavenumber() / (4.0 * PI * PI)))
}

/// Which antipode a Grangeat-type sphere integral samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamSign {
    Forward,
    Backward,
}

impl BeamSign {
    pub fn sign(self) -> f64 {
        match self {
            BeamSign::Forward => 1.0,
            BeamSign::Backward => -1.0,
        }
    }
}

/// `±(λν/4π) ∫ θ × D(±θ, x) dΩ_θ`.
pub fn invert_grangeat(
    df: &BeamFunction<'_>,
    x: RealVec3,
    eig: CurlEigen,
    grid: &PolarGrid,
    sign: BeamSign,
) -> Result<ComplexVec3> {
    expect_kind(df, BeamKind::Divergent)?;
    let s = df.sphere_integral(x, grid, sign == BeamSign::Backward, |t, v| v.crossed_by(t.vec()))?;
    Ok(s * (sign.sign() * eig.eigenvalue() / (4.0 * PI)))
}

/// `(ν/2π²) ∫ D(θ, x) dΩ_θ`.
pub fn gg_spherical_mean(df: &BeamFunction<'_>, x: RealVec3, eig: CurlEigen, grid: &PolarGrid) -> Result<ComplexVec3> {
    expect_kind(df, BeamKind::Divergent)?;
    let s = df.sphere_integral(x, grid, false, |_, v| v)?;
    Ok(s * (eig.wavenumber() / (2.0 * PI * PI)))
}

/// `∮ ∂_q f(qκ + √(1−q²) e(ψ), x)|_{q=0} dψ` by central differences of step `h`.
fn circle_offset_derivative(
    f: &BeamFunction<'_>,
    kappa: Direction,
    x: RealVec3,
    circle: &CircleQuadrature,
    h: f64,
) -> Result<ComplexVec3> {
    if !(h > 0.0 && h < 0.5) {
        return Err(invalid("h", format!("step must lie in (0, 0.5), got {h}")));
    }
    let frame = frame_for(kappa);
    let tilt = h.asin();
    (0..circle.n()).try_fold(ComplexVec3::ZERO, |acc, j| {
        let e = frame.circle_point(circle.angle(j));
        let up = f.eval(Direction::rotate_towards(e, kappa, tilt), x)?;
        let down = f.eval(Direction::rotate_towards(e, -kappa, tilt), x)?;
        Ok(acc + (up - down) * (circle.weight() / (2.0 * h)))
    })
}

/// `∂_p F^R(p, κ)` at `p = κ·x`, from divergent beams along the great circle `⊥ κ`.
pub fn grangeat_intermediate(
    df: &BeamFunction<'_>,
    kappa: Direction,
    x: RealVec3,
    circle: &CircleQuadrature,
    h: f64,
) -> Result<ComplexVec3> {
    expect_kind(df, BeamKind::Divergent)?;
    circle_offset_derivative(df, kappa, x, circle, h)
}

/// `F^R(κ·x, κ)` from the Y transform: `(1/2λν) κ × ∮ ∂_q Y dψ`.
pub fn y_inversion(
    yf: &BeamFunction<'_>,
    kappa: Direction,
    x: RealVec3,
    eig: CurlEigen,
    circle: &CircleQuadrature,
    h: f64,
) -> Result<ComplexVec3> {
    expect_kind(yf, BeamKind::Y)?;
    let d = circle_offset_derivative(yf, kappa, x, circle, h)?;
    Ok(d.crossed_by(kappa.vec()) / (2.0 * eig.eigenvalue()))
}

/// `F^R(b·x, b) = −(1/πν) f.p.∫ D(θ, x)/(θ·b)² dΩ_θ`.
///
/// In the frame of `b`, `θ = cos α b + sin α e(ψ)`; per azimuth the hemispheres
/// `α` and `π − α` are paired against twice the equatorial value, which leaves a
/// smooth integrand in `α`, and the subtracted equator contributes `−2 D(π/2)`.
pub fn gg_radon_recovery(
    df: &BeamFunction<'_>,
    b: Direction,
    x: RealVec3,
    eig: CurlEigen,
    alpha_rule: &GaussRule,
    circle: &CircleQuadrature,
) -> Result<ComplexVec3> {
    expect_kind(df, BeamKind::Divergent)?;
    let frame = frame_for(b);
    let total = (0..circle.n()).try_fold(ComplexVec3::ZERO, |acc, j| {
        let e = frame.circle_point(circle.angle(j));
        let equator = df.eval(e, x)?;
        let body = alpha_rule.on_interval(0.0, 0.5 * PI).try_fold(ComplexVec3::ZERO, |acc, (a, w)| {
            let (s, c) = a.sin_cos();
            let up = df.eval(Direction::rotate_towards(b, e, a), x)?;
            let down = df.eval(Direction::rotate_towards(-b, e, a), x)?;
            Ok::<_, Error>(acc + (up + down - equator * 2.0) * (w * s / (c * c)))
        })?;
        Ok::<_, Error>(acc + (body - equator * 2.0) * circle.weight())
    })?;
    Ok(total * (-1.0 / (PI * eig.wavenumber())))
}

/// Smith's route to the X-ray transform, with the Hilbert bracket taken on exact tones.
///
/// Returns the norm of `(1/4π) ∮_{b ⊥ θ} [ℋ ∂_p F^R](b·x, b) dψ − X(θ, x)`.
pub fn smith_identity_check(m: &MosesField, theta: Direction, x: RealVec3, circle: &CircleQuadrature) -> f64 {
    let smith = great_circle_integral(theta, circle, |b| {
        m.radon_tones(b).derivative().hilbert().value(b.dot(x))
    }) * (1.0 / (4.0 * PI));
    (smith - moses_xray(m, theta, x, circle)).norm()
}

/// Tuy's route to the divergent beam on exact tones.
///
/// With `g(b) = [(ℋ − i) ∂_p F^R](b·x, b)`, returns the norm of
/// `(1/4π) ∫ g(b) δ⁺(b·θ) dΩ_b − D(θ, x)`, where
/// `∫ g δ⁺(b·θ) dΩ = ½ ∮ g + (i/2π) PV ∫ g/(b·θ)`.
pub fn tuy_identity_check(
    m: &MosesField,
    theta: Direction,
    x: RealVec3,
    circle: &CircleQuadrature,
    pv: PvRule,
) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let bracket = |b: Direction| {
        let d = m.radon_tones(b).derivative();
        (d.hilbert().value(b.dot(x)) - d.value(b.dot(x)) * i) * (1.0 / (4.0 * PI))
    };
    let tuy = great_circle_integral(theta, circle, bracket) * 0.5
        + pv_sphere_integral(theta, pv, bracket) * (i / (2.0 * PI));
    (tuy - moses_dbeam(m, theta, x, circle, pv)).norm()
}

/// `|ν|^{−α}`, the Riesz potential multiplier on a curl eigenfield.
pub fn riesz_factor(eig: CurlEigen, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha >= 3.0 {
        return Err(invalid("alpha", format!("Riesz order must be finite and below 3, got {alpha}")));
    }
    Ok(eig.wavenumber().powf(-alpha))
}

/// A field multiplied by a constant, as produced by the operators below.
#[derive(Debug, Clone)]
pub struct ScaledField<'a> {
    base: &'a Trkalian,
    factor: f64,
}

impl ScaledField<'_> {
    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn eval(&self, x: RealVec3) -> ComplexVec3 {
        self.base.eval(x) * self.factor
    }
}

/// `I^α F = |ν|^{−α} F`.
pub fn riesz_apply(field: &Trkalian, alpha: f64) -> Result<ScaledField<'_>> {
    let eig = eig_of(field)?;
    Ok(ScaledField { base: field, factor: riesz_factor(eig, alpha)? })
}

/// Riesz potential of a Moses superposition, by scaling its spectral data.
pub fn riesz_apply_moses(m: &MosesField, alpha: f64) -> Result<MosesField> {
    let f = riesz_factor(m.eig(), alpha)?;
    Ok(MosesField::new(m.eig(), m.s().map_degrees(|_, c| c * f)))
}

/// Biot–Savart operator: `F / (λν)`.
pub fn bs_apply(field: &Trkalian) -> ScaledField<'_> {
    ScaledField { base: field, factor: 1.0 / field.eigenvalue() }
}

/// Biot–Savart operator of a Moses superposition.
pub fn bs_apply_moses(m: &MosesField) -> MosesField {
    let f = 1.0 / m.eig().eigenvalue();
    MosesField::new(m.eig(), m.s().map_degrees(|_, c| c * f))
}

/// X-ray transform of the Biot–Savart image: `X F / (λν)`.
pub fn xbs_apply(eig: CurlEigen, xray: ComplexVec3) -> ComplexVec3 {
    xray / eig.eigenvalue()
}

/// Radon transform of the Biot–Savart image: `F^R / (λν)`.
pub fn rbs_apply(eig: CurlEigen, radon: &TwoTone) -> TwoTone {
    radon.scale(Complex64::new(1.0 / eig.eigenvalue(), 0.0))
}

fn eig_of(field: &Trkalian) -> Result<CurlEigen> {
    let ev = field.eigenvalue();
    let hel = if ev > 0.0 { Helicity::Plus } else { Helicity::Minus };
    CurlEigen::new(ev.abs(), hel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{curl_fd, lundquist_field, radon_moses, ProjectedMoses, TrkalianSpec, FD_STEP};
    use crate::geometry::PlaneCoord;
    use crate::harmonics::SphericalFunction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const F0: Complex64 = Complex64::new(0.7, -0.4);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eig(nu: f64, lam: Helicity) -> CurlEigen {
        CurlEigen::new(nu, lam).unwrap()
    }

    fn grid() -> PolarGrid {
        PolarGrid::new(64, 128).unwrap()
    }

    fn points() -> Vec<RealVec3> {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        (0..10)
            .map(|_| RealVec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect()
    }

    fn rel(a: ComplexVec3, b: ComplexVec3) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn random_s(rng: &mut ChaCha8Rng, lmax: usize) -> SphericalFunction {
        let n = (lmax + 1) * (lmax + 1);
        let coeffs = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        SphericalFunction::new(lmax, coeffs).unwrap()
    }

    #[test]
    fn lundquist_inversions_recover_field() {
        for lam in [Helicity::Plus, Helicity::Minus] {
            let e = eig(1.3, lam);
            let xf = BeamFunction::lundquist(BeamKind::XRay, F0, e, LundquistSeriesCfg::Auto).unwrap();
            let df = BeamFunction::lundquist(BeamKind::Divergent, F0, e, LundquistSeriesCfg::Auto).unwrap();
            for x in points() {
                let want = lundquist_field(F0, 1.3, lam, x);
                let sm = invert_spherical_mean(&xf, x, e, &grid()).unwrap();
                let gp = invert_grangeat(&df, x, e, &grid(), BeamSign::Forward).unwrap();
                let gm = invert_grangeat(&df, x, e, &grid(), BeamSign::Backward).unwrap();
                let gg = gg_spherical_mean(&df, x, e, &grid()).unwrap();
                assert!(rel(sm, want) <= 1e-6, "{lam} {x:?} {}", rel(sm, want));
                assert!(rel(gp, want) <= 1e-6, "{lam} {x:?} {}", rel(gp, want));
                assert!(rel(gg, want) <= 1e-6, "{lam} {x:?} {}", rel(gg, want));
                assert!((gp - gm).norm() <= 1e-8, "{lam} {x:?}");
                assert!(rel(sm, gg) <= 1e-6 && rel(gp, sm) <= 1e-6);
            }
        }
    }

    #[test]
    fn zero_beams_invert_to_zero() {
        let e = eig(1.0, Helicity::Plus);
        let x = RealVec3::new(0.3, 0.1, -0.2);
        let g = PolarGrid::new(8, 16).unwrap();
        let circle = CircleQuadrature::new(16).unwrap();
        let z = BeamFunction::zero(BeamKind::XRay);
        let d = BeamFunction::zero(BeamKind::Divergent);
        let y = BeamFunction::zero(BeamKind::Y);
        assert_eq!(invert_spherical_mean(&z, x, e, &g).unwrap(), ComplexVec3::ZERO);
        assert_eq!(invert_grangeat(&d, x, e, &g, BeamSign::Forward).unwrap(), ComplexVec3::ZERO);
        assert_eq!(gg_spherical_mean(&d, x, e, &g).unwrap(), ComplexVec3::ZERO);
        assert_eq!(grangeat_intermediate(&d, Direction::X, x, &circle, 1e-4).unwrap(), ComplexVec3::ZERO);
        assert_eq!(y_inversion(&y, Direction::X, x, e, &circle, 1e-4).unwrap(), ComplexVec3::ZERO);
        let rule = GaussRule::new(8);
        assert_eq!(gg_radon_recovery(&d, Direction::Y, x, e, &rule, &circle).unwrap(), ComplexVec3::ZERO);
    }

    #[test]
    fn wrong_kind_and_plain_pole_beam_are_rejected() {
        let e = eig(1.0, Helicity::Plus);
        let g = PolarGrid::new(8, 16).unwrap();
        let d = BeamFunction::zero(BeamKind::Divergent);
        assert!(matches!(invert_spherical_mean(&d, RealVec3::ZERO, e, &g), Err(Error::InvalidParameter { .. })));
        let blowup = BeamFunction::new(BeamKind::XRay, Provenance::Numeric, |t, _| {
            Ok(ComplexVec3::from_real(RealVec3::Z) * (1.0 / (t.transverse() - t.transverse())))
        });
        assert!(matches!(invert_spherical_mean(&blowup, RealVec3::ZERO, e, &g), Err(Error::PoleSingularity(0))));
    }

    #[test]
    fn gg_mean_is_half_the_mean_of_the_symmetrized_beam() {
        let e = eig(0.9, Helicity::Minus);
        let g = PolarGrid::new(24, 48).unwrap();
        let df = BeamFunction::lundquist(BeamKind::Divergent, F0, e, LundquistSeriesCfg::Auto).unwrap();
        let sym = BeamFunction::new(BeamKind::XRay, Provenance::ClosedForm, |t, x| {
            Ok(df.eval(t, x)? + df.eval(-t, x)?)
        })
        .with_weighted(|n, x| df.weighted_at(n, x, 0).unwrap() + df.weighted_at(&antipode(n), x, 0).unwrap());
        let x = RealVec3::new(0.4, -1.1, 0.3);
        let a = gg_spherical_mean(&df, x, e, &g).unwrap();
        let b = invert_spherical_mean(&sym, x, e, &g).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn spherical_mean_of_moses_xray_matches_synthesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for lam in [Helicity::Plus, Helicity::Minus] {
            let m = MosesField::new(eig(1.1, lam), random_s(&mut rng, 2).pole_regular(2));
            let xf = BeamFunction::moses(BeamKind::XRay, &m, CircleQuadrature::new(48).unwrap(), PvRule::default()).unwrap();
            let x = RealVec3::new(0.3, -0.5, 0.2);
            let got = invert_spherical_mean(&xf, x, m.eig(), &PolarGrid::new(24, 48).unwrap()).unwrap();
            let want = m.eval(x);
            assert!(rel(got, want) <= 1e-6, "{lam} {}", rel(got, want));
        }
    }

    #[test]
    fn spherical_mean_output_is_curl_eigen() {
        let e = eig(1.3, Helicity::Minus);
        let xf = BeamFunction::lundquist(BeamKind::XRay, F0, e, LundquistSeriesCfg::Auto).unwrap();
        let g = PolarGrid::new(32, 64).unwrap();
        let f = |x: RealVec3| invert_spherical_mean(&xf, x, e, &g).unwrap();
        for x in points().into_iter().take(3) {
            let v = f(x);
            let r = curl_fd(f, x, FD_STEP) - v * e.eigenvalue();
            assert!(r.norm() <= 1e-5 * (v * e.eigenvalue()).norm(), "{x:?}");
        }
    }

    #[test]
    fn grangeat_intermediate_matches_radon_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let circle = CircleQuadrature::new(32).unwrap();
        let pv = PvRule { n_polar: 24, n_azimuth: 48 };
        for lam in [Helicity::Plus, Helicity::Minus] {
            let m = MosesField::new(eig(1.0, lam), random_s(&mut rng, 2).pole_regular(4));
            let df = BeamFunction::moses(BeamKind::Divergent, &m, circle.clone(), pv).unwrap();
            let yf = BeamFunction::moses(BeamKind::Y, &m, circle.clone(), pv).unwrap();
            let kappa = Direction::new(RealVec3::new(0.3, -0.8, 0.5)).unwrap();
            let x = RealVec3::new(0.2, 0.1, -0.3);
            let got = grangeat_intermediate(&df, kappa, x, &circle, 1e-4).unwrap();
            let tones = m.radon_tones(kappa);
            let want = tones.derivative().value(kappa.dot(x));
            assert!((got - want).norm() <= 1e-5 * want.norm(), "{lam} {}", (got - want).norm());
            assert!(got.dot_real(kappa.vec()).norm() <= 1e-8);
            let fr = y_inversion(&yf, kappa, x, m.eig(), &circle, 1e-4).unwrap();
            let want = tones.value(kappa.dot(x));
            assert!((fr - want).norm() <= 1e-5 * want.norm(), "{lam} {}", (fr - want).norm());
        }
    }

    #[test]
    fn gg_recovers_radon() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let circle = CircleQuadrature::new(24).unwrap();
        let pv = PvRule { n_polar: 16, n_azimuth: 32 };
        for lam in [Helicity::Plus, Helicity::Minus] {
            let m = MosesField::new(eig(0.8, lam), random_s(&mut rng, 1).pole_regular(3));
            let df = BeamFunction::moses(BeamKind::Divergent, &m, CircleQuadrature::new(32).unwrap(), pv).unwrap();
            let b = Direction::new(RealVec3::new(-0.4, 0.2, 0.7)).unwrap();
            let x = RealVec3::new(0.1, 0.3, -0.2);
            let got = gg_radon_recovery(&df, b, x, m.eig(), &GaussRule::new(16), &circle).unwrap();
            let want = radon_moses(0.8, lam, m.s(), PlaneCoord { p: b.dot(x), kappa: b }).unwrap();
            assert!((got - want).norm() <= 1e-5 * want.norm(), "{lam} {}", (got - want).norm() / want.norm());
        }
    }

    #[test]
    fn smith_and_tuy_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let circle = CircleQuadrature::new(64).unwrap();
        for lam in [Helicity::Plus, Helicity::Minus] {
            let m = MosesField::new(eig(1.4, lam), random_s(&mut rng, 6));
            let theta = Direction::new(RealVec3::new(0.5, 0.4, -0.6)).unwrap();
            let x = RealVec3::new(0.3, -0.7, 0.2);
            let r = smith_identity_check(&m, theta, x, &circle);
            assert!(r <= 1e-8, "{r}");
            let shifted = smith_identity_check(&m, theta, x + theta.vec() * 2.5, &circle);
            assert!(shifted <= 1e-8 && (shifted - r).abs() <= 1e-8);
            let r = tuy_identity_check(&m, theta, x, &circle, PvRule::default());
            assert!(r <= 1e-7, "{r}");
        }
        let zero = MosesField::new(eig(1.0, Helicity::Plus), SphericalFunction::zero(3));
        assert_eq!(smith_identity_check(&zero, Direction::Z, RealVec3::X, &circle), 0.0);
        assert_eq!(tuy_identity_check(&zero, Direction::Z, RealVec3::X, &circle, PvRule::default()), 0.0);
    }

    #[test]
    fn riesz_and_biot_savart_scalings() {
        let field = TrkalianSpec::Lundquist { f0: F0, nu: 2.0, lambda: Helicity::Minus }.build().unwrap();
        let x = RealVec3::new(0.4, 0.2, 1.0);
        let v = field.eval(x);
        assert_eq!(riesz_apply(&field, 0.0).unwrap().eval(x), v);
        assert!((riesz_apply(&field, 2.0).unwrap().eval(x) - v / 4.0).norm() <= 1e-15);
        assert!(matches!(riesz_apply(&field, 3.0), Err(Error::InvalidParameter { .. })));
        let bs = bs_apply(&field);
        assert!((bs.eval(x) * bs.factor() - v / 4.0).norm() <= 1e-15);

        let e = eig(2.0, Helicity::Minus);
        let ray = crate::geometry::RayCoord::through(x, Direction::new(RealVec3::new(1.0, 0.5, 0.2)).unwrap());
        let xr = xray_lundquist_closed(ray, F0, 2.0, Helicity::Minus).unwrap();
        assert!((xbs_apply(e, xr) - xr / (-2.0)).norm() <= 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = MosesField::new(e, random_s(&mut rng, 4));
        let kappa = Direction::new(RealVec3::new(0.2, 0.9, -0.1)).unwrap();
        let r = rbs_apply(e, &m.radon_tones(kappa));
        let lhs = r.derivative();
        let rhs = m.radon_tones(kappa).crossed_by(kappa.vec()).scale(c(-1.0, 0.0));
        assert!(lhs.sub(&rhs).max_abs() <= 1e-10);
    }

    #[test]
    fn riesz_one_equals_scaled_xray_mean() {
        let e = eig(1.7, Helicity::Plus);
        let xf = BeamFunction::lundquist(BeamKind::XRay, F0, e, LundquistSeriesCfg::Auto).unwrap();
        let field = TrkalianSpec::Lundquist { f0: F0, nu: 1.7, lambda: Helicity::Plus }.build().unwrap();
        let x = RealVec3::new(-0.6, 0.9, 0.0);
        let mean = invert_spherical_mean(&xf, x, e, &grid()).unwrap() / e.wavenumber();
        let i1 = riesz_apply(&field, 1.0).unwrap().eval(x);
        assert!((mean - i1).norm() <= 1e-6 * i1.norm());
    }

    /// Smooth Moses data for one helicity: the projection of a fixed vector plus a
    /// linear term, so every sphere integrand below is a low-degree polynomial.
    fn smooth_moses(lam: Helicity, nu: f64) -> ProjectedMoses<impl Fn(Direction) -> ComplexVec3 + Sync> {
        let a = ComplexVec3::new(c(0.4, 0.1), c(-0.3, 0.6), c(0.2, -0.5));
        let b = ComplexVec3::new(c(0.1, 0.2), c(0.5, 0.0), c(-0.2, 0.3));
        ProjectedMoses::new(eig(nu, lam), move |k: Direction| a + b * k.x())
    }

    #[test]
    fn gg_radon_values_resynthesize_the_field() {
        let circle = CircleQuadrature::new(16).unwrap();
        let pv = PvRule { n_polar: 10, n_azimuth: 20 };
        let rule = GaussRule::new(10);
        for lam in [Helicity::Plus, Helicity::Minus] {
            let nu = 0.9;
            let m = smooth_moses(lam, nu);
            let df = BeamFunction::moses(BeamKind::Divergent, &m, circle.clone(), pv).unwrap();
            // F^R(0, κ) is even in κ, so the upper half of a symmetric rule suffices.
            let quad = crate::quadrature::SphereQuadrature::gauss_cos(4).unwrap();
            let mut sum = ComplexVec3::ZERO;
            for (k, w) in quad.nodes.iter().zip(&quad.weights).filter(|(k, _)| k.z() > 0.0) {
                let fr = gg_radon_recovery(&df, *k, RealVec3::ZERO, m.eig(), &rule, &circle).unwrap();
                let exact = m.radon(PlaneCoord { p: 0.0, kappa: *k });
                assert!((fr - exact).norm() <= 1e-5 * exact.norm());
                sum = sum + fr * (2.0 * w);
            }
            let got = sum * (nu * nu / (8.0 * PI * PI));
            let want = m.synthesize(RealVec3::ZERO, &crate::quadrature::SphereQuadrature::gauss_cos(8).unwrap());
            assert!((got - want).norm() <= 1e-5 * want.norm(), "{lam} {}", (got - want).norm() / want.norm());
        }
    }

    #[test]
    fn grangeat_intermediate_of_a_plane_wave_in_smeared_form() {
        // A band-limited plane wave: the helical projection of Q(κ0) times the degree-L
        // reproducing kernel at κ0, scaled so that the field tends to exp(ik0 κ0·x) Q(κ0).
        const L: usize = 4;
        let k0 = 1.2;
        let kappa0 = Direction::new(RealVec3::new(0.6, -0.3, 0.5)).unwrap();
        let circle = CircleQuadrature::new(24).unwrap();
        let pv = PvRule { n_polar: 16, n_azimuth: 32 };
        let quad = crate::quadrature::SphereQuadrature::gauss_cos(7).unwrap();
        for lam in [Helicity::Plus, Helicity::Minus] {
            let f0 = crate::fields::moses_q(kappa0, lam);
            let kernel = move |t: f64| {
                (0..=L).map(|l| (2 * l + 1) as f64 * crate::special::legendre_p(l, t)).sum::<f64>()
                    * (2.0 * PI).powf(1.5)
                    / (4.0 * PI)
            };
            let m = ProjectedMoses::new(eig(k0, lam), move |k: Direction| f0 * kernel(k.dot(kappa0.vec())));
            let df = BeamFunction::moses(BeamKind::Divergent, &m, circle.clone(), pv).unwrap();
            let values: Vec<ComplexVec3> = quad
                .nodes
                .iter()
                .map(|&k| grangeat_intermediate(&df, k, RealVec3::ZERO, &circle, 1e-4).unwrap())
                .collect();
            let y0 = crate::special::spherical_harmonics(2, kappa0);
            let y1 = crate::special::spherical_harmonics(2, -kappa0);
            for l in 0..=2usize {
                for mm in -(l as i64)..=l as i64 {
                    let idx = crate::special::lm_index(l, mm);
                    let smeared = quad.nodes.iter().zip(&quad.weights).zip(&values).fold(c(0.0, 0.0), |acc, ((k, w), v)| {
                        let y = crate::special::spherical_harmonics(2, *k)[idx].conj();
                        acc + f0.hdot(v) * y * *w
                    });
                    let want = (y0[idx].conj() - y1[idx].conj()) * c(0.0, 4.0 * PI * PI / k0);
                    assert!((smeared - want).norm() <= 1e-6 * (1.0 + want.norm()), "{lam} {l} {mm}: {smeared} {want}");
                }
            }
        }
    }
}
