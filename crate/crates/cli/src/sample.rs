//! Sampling commands: one CSV row per evaluation, inputs first, then Re/Im pairs.

use std::fmt::Write as _;

use beltrami::funk::funk_transform;
use beltrami::rays::{
    dbeam_lundquist_closed, dbeam_numeric, moses_dbeam, moses_xray, moses_ytransform, xray_lundquist_closed,
    xray_numeric, ytransform_lundquist_closed, ytransform_numeric, ytransform_planewave_closed,
};
use beltrami::inversion::{gg_spherical_mean, invert_grangeat, invert_spherical_mean};
use beltrami::twistor::trkalian_from_twistor;
use beltrami::{
    Beam, BeamFunction, BeamKind, CircleQuadrature, Complex64, ComplexVec3, CurlEigen, Direction, MosesData,
    MosesField, OscillatoryLineQuadrature, PolarGrid, RayCoord, RealVec3, Trkalian, TrkalianSpec,
};
use rayon::prelude::*;

use crate::config::{Command, InvertMethod, Method, RunConfig};
use crate::CliError;

const VECTOR_COLUMNS: &str = "re_x,im_x,re_y,im_y,re_z,im_z";

/// Fixed float format: 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_row(out: &mut String, inputs: &[f64], values: &[Complex64]) {
    let cells = inputs
        .iter()
        .copied()
        .chain(values.iter().flat_map(|c| [c.re, c.im]))
        .map(fmt_f64)
        .collect::<Vec<_>>();
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn vec3(v: RealVec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Renders rows computed in parallel, in input order.
fn render<T: Sync>(
    header: &str,
    items: &[T],
    inputs: impl Fn(&T) -> Vec<f64> + Sync,
    eval: impl Fn(&T) -> Result<Vec<Complex64>, CliError> + Sync,
) -> Result<String, CliError> {
    let rows: Vec<Vec<Complex64>> = items.par_iter().map(&eval).collect::<Result<_, _>>()?;
    let mut out = String::new();
    writeln!(out, "{header}").expect("string write");
    for (item, row) in items.iter().zip(rows) {
        push_row(&mut out, &inputs(item), &row);
    }
    Ok(out)
}

fn components(v: ComplexVec3) -> Vec<Complex64> {
    v.components().to_vec()
}

fn rays(cfg: &RunConfig) -> Result<Vec<RayCoord>, CliError> {
    if let Some(r) = &cfg.rays {
        return Ok(r.clone());
    }
    let dirs = directions(cfg)?;
    let pts = cfg.sample_points()?;
    Ok(pts.iter().flat_map(|&x| dirs.iter().map(move |&t| RayCoord::through(x, t))).collect())
}

fn beams(cfg: &RunConfig) -> Result<Vec<Beam>, CliError> {
    if let Some(b) = &cfg.beams {
        return Ok(b.clone());
    }
    let dirs = directions(cfg)?;
    let pts = cfg.sample_points()?;
    Ok(pts.iter().flat_map(|&x| dirs.iter().map(move |&t| Beam::new(x, t))).collect())
}

fn directions(cfg: &RunConfig) -> Result<Vec<Direction>, CliError> {
    match &cfg.directions {
        Some(d) if !d.is_empty() => Ok(d.clone()),
        _ => Err(CliError::config("directions", "needed with `grid` or `points` when no explicit rays or beams are given")),
    }
}

/// Wavenumber of the integrand along direction `t`, for the damped line rule.
fn line_scale(spec: &TrkalianSpec, t: Direction) -> f64 {
    let floor = 1e-2 * spec.eigenvalue().abs();
    let s = match spec {
        TrkalianSpec::PlaneWave { k0, kappa0, .. } => k0 * kappa0.dot(t.vec()).abs(),
        TrkalianSpec::Lundquist { nu, .. } | TrkalianSpec::CkCylindrical { nu, .. } => nu * t.transverse(),
        _ => spec.eigenvalue().abs(),
    };
    s.max(floor)
}

fn line_cfg(cfg: &RunConfig, spec: &TrkalianSpec, t: Direction) -> Result<OscillatoryLineQuadrature, CliError> {
    match &cfg.quadrature.line {
        Some(l) => Ok(l.clone()),
        None => OscillatoryLineQuadrature::for_wavenumber(line_scale(spec, t))
            .map_err(|e| CliError::compute("line quadrature", e)),
    }
}

fn moses_of(field: &Trkalian) -> Option<MosesField> {
    match field.spec() {
        TrkalianSpec::MosesBandLimited { nu, lambda, s } => {
            Some(MosesField::new(CurlEigen::new(*nu, *lambda).ok()?, s.clone()))
        }
        _ => None,
    }
}

fn resolve(method: Method, spec: &TrkalianSpec, has_closed: bool) -> Method {
    match method {
        Method::Auto if has_closed => Method::Closed,
        Method::Auto if matches!(spec, TrkalianSpec::MosesBandLimited { .. }) => Method::Moses,
        Method::Auto => Method::Numeric,
        m => m,
    }
}

fn unsupported(what: &str, spec: &TrkalianSpec) -> CliError {
    CliError::config("quadrature.method", format!("{what} is not available for this field ({spec:?})"))
}

fn build(cfg: &RunConfig) -> Result<Trkalian, CliError> {
    cfg.field()?.build().map_err(|e| CliError::config("field", e.to_string()))
}

pub fn run_sample(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.command {
        Command::FieldSample => field_sample(cfg),
        Command::Xray => xray(cfg),
        Command::Divbeam | Command::Ytrf => half_line(cfg),
        Command::Radon => radon(cfg),
        Command::Funk => funk(cfg),
        Command::Invert(m) => invert(cfg, m),
        Command::TwistorEval => twistor_eval(cfg),
        Command::Check(_) => unreachable!("checks are rendered as reports"),
    }
}

fn field_sample(cfg: &RunConfig) -> Result<String, CliError> {
    let f = build(cfg)?;
    let pts = cfg.sample_points()?;
    render(&format!("x,y,z,{VECTOR_COLUMNS}"), &pts, |p| vec3(*p).to_vec(), |p| Ok(components(f.eval(*p))))
}

fn xray(cfg: &RunConfig) -> Result<String, CliError> {
    let f = build(cfg)?;
    let spec = f.spec();
    let method = resolve(cfg.quadrature.method, spec, matches!(spec, TrkalianSpec::Lundquist { .. }));
    let moses = moses_of(&f);
    let circle = CircleQuadrature::new(cfg.quadrature.circle_n).map_err(|e| CliError::config("quadrature.circle_n", e.to_string()))?;
    let rays = rays(cfg)?;
    let eval = |r: &RayCoord| -> Result<Vec<Complex64>, CliError> {
        let ctx = || format!("ray {:?} through {:?}", vec3(r.theta.vec()), vec3(r.foot));
        let v = match (method, spec) {
            (Method::Closed, TrkalianSpec::Lundquist { f0, nu, lambda }) => {
                xray_lundquist_closed(*r, *f0, *nu, *lambda).map_err(|e| CliError::compute(ctx(), e))?
            }
            (Method::Closed, _) => return Err(unsupported("a closed-form X-ray", spec)),
            (Method::Moses, _) => {
                let m = moses.as_ref().ok_or_else(|| unsupported("Moses quadrature", spec))?;
                moses_xray(m, r.theta, r.foot, &circle)
            }
            _ => {
                let line = line_cfg(cfg, spec, r.theta)?;
                xray_numeric(|y| f.eval(y), *r, &line).map_err(|e| CliError::compute(ctx(), e))?.value
            }
        };
        Ok(components(v))
    };
    let inputs = |r: &RayCoord| [vec3(r.theta.vec()), vec3(r.foot)].concat();
    render(&format!("theta_x,theta_y,theta_z,foot_x,foot_y,foot_z,{VECTOR_COLUMNS}"), &rays, inputs, eval)
}

fn half_line(cfg: &RunConfig) -> Result<String, CliError> {
    let signed = cfg.command == Command::Ytrf;
    let f = build(cfg)?;
    let spec = f.spec();
    let has_closed = matches!(spec, TrkalianSpec::Lundquist { .. })
        || (signed && matches!(spec, TrkalianSpec::PlaneWave { .. }));
    let method = resolve(cfg.quadrature.method, spec, has_closed);
    let moses = moses_of(&f);
    let q = &cfg.quadrature;
    let circle = CircleQuadrature::new(q.circle_n).map_err(|e| CliError::config("quadrature.circle_n", e.to_string()))?;
    let beams = beams(cfg)?;
    let eval = |b: &Beam| -> Result<Vec<Complex64>, CliError> {
        let ctx = || format!("beam from {:?} along {:?}", vec3(b.source), vec3(b.dir.vec()));
        let v = match (method, spec) {
            (Method::Closed, TrkalianSpec::Lundquist { f0, nu, lambda }) => {
                let r = if signed {
                    ytransform_lundquist_closed(*b, *f0, *nu, *lambda, q.series)
                } else {
                    dbeam_lundquist_closed(*b, *f0, *nu, *lambda, q.series)
                };
                r.map_err(|e| CliError::compute(ctx(), e))?.value
            }
            (Method::Closed, TrkalianSpec::PlaneWave { k0, kappa0, lambda }) if signed => {
                ytransform_planewave_closed(*b, *k0, *kappa0, *lambda).map_err(|e| CliError::compute(ctx(), e))?
            }
            (Method::Closed, _) => return Err(unsupported("a closed-form beam transform", spec)),
            (Method::Moses, _) => {
                let m = moses.as_ref().ok_or_else(|| unsupported("Moses quadrature", spec))?;
                if signed {
                    moses_ytransform(m, b.dir, b.source, q.pv)
                } else {
                    moses_dbeam(m, b.dir, b.source, &circle, q.pv)
                }
            }
            _ => {
                let line = line_cfg(cfg, spec, b.dir)?;
                let r = if signed {
                    ytransform_numeric(|y| f.eval(y), *b, &line)
                } else {
                    dbeam_numeric(|y| f.eval(y), *b, &line)
                };
                r.map_err(|e| CliError::compute(ctx(), e))?.value
            }
        };
        Ok(components(v))
    };
    let inputs = |b: &Beam| [vec3(b.source), vec3(b.dir.vec())].concat();
    render(&format!("source_x,source_y,source_z,dir_x,dir_y,dir_z,{VECTOR_COLUMNS}"), &beams, inputs, eval)
}

fn radon(cfg: &RunConfig) -> Result<String, CliError> {
    let f = build(cfg)?;
    let m = moses_of(&f).ok_or_else(|| unsupported("a pointwise Radon transform", f.spec()))?;
    let planes = cfg.planes.clone().filter(|p| !p.is_empty()).ok_or_else(|| CliError::config("planes", "this command needs a list of planes"))?;
    render(
        &format!("p,kappa_x,kappa_y,kappa_z,{VECTOR_COLUMNS}"),
        &planes,
        |pl| [&[pl.p][..], &vec3(pl.kappa.vec())].concat(),
        |pl| Ok(components(m.radon(*pl))),
    )
}

fn funk(cfg: &RunConfig) -> Result<String, CliError> {
    let s = cfg.sphere_function.as_ref().ok_or_else(|| CliError::config("sphere_function", "this command needs a sphere function"))?;
    let dirs = directions(cfg)?;
    let n = cfg.quadrature.circle_n;
    render(
        "theta_x,theta_y,theta_z,re,im",
        &dirs,
        |d| vec3(d.vec()).to_vec(),
        |d| Ok(vec![funk_transform(s, *d, n).map_err(|e| CliError::compute("funk transform", e))?]),
    )
}

fn invert(cfg: &RunConfig, method: InvertMethod) -> Result<String, CliError> {
    let f = build(cfg)?;
    let q = &cfg.quadrature;
    let kind = match method {
        InvertMethod::SphericalMean => BeamKind::XRay,
        InvertMethod::Grangeat | InvertMethod::Gg => BeamKind::Divergent,
    };
    let moses = moses_of(&f);
    let (beam, eig) = match f.spec() {
        TrkalianSpec::Lundquist { f0, nu, lambda } => {
            let eig = CurlEigen::new(*nu, *lambda).map_err(|e| CliError::config("field", e.to_string()))?;
            let b = BeamFunction::lundquist(kind, *f0, eig, q.series).map_err(|e| CliError::config("quadrature", e.to_string()))?;
            (b, eig)
        }
        TrkalianSpec::MosesBandLimited { .. } => {
            let m = moses.as_ref().expect("moses field");
            let circle = CircleQuadrature::new(q.circle_n).map_err(|e| CliError::config("quadrature.circle_n", e.to_string()))?;
            let b = BeamFunction::moses(kind, m, circle, q.pv).map_err(|e| CliError::config("quadrature", e.to_string()))?;
            (b, m.eig())
        }
        other => return Err(unsupported("inversion", other)),
    };
    let grid = PolarGrid::new(q.polar_grid[0], q.polar_grid[1]).map_err(|e| CliError::config("quadrature.polar_grid", e.to_string()))?;
    let pts = cfg.sample_points()?;
    let eval = |x: &RealVec3| -> Result<Vec<Complex64>, CliError> {
        let r = match method {
            InvertMethod::SphericalMean => invert_spherical_mean(&beam, *x, eig, &grid),
            InvertMethod::Grangeat => invert_grangeat(&beam, *x, eig, &grid, q.sign.into()),
            InvertMethod::Gg => gg_spherical_mean(&beam, *x, eig, &grid),
        };
        Ok(components(r.map_err(|e| CliError::compute(format!("point {:?}", vec3(*x)), e))?))
    };
    render(&format!("x,y,z,{VECTOR_COLUMNS}"), &pts, |p| vec3(*p).to_vec(), eval)
}

fn twistor_eval(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = cfg.integrand.as_ref().ok_or_else(|| CliError::config("integrand", "this command needs an integrand"))?;
    let pts = cfg.sample_points()?;
    let eval = |x: &RealVec3| -> Result<Vec<Complex64>, CliError> {
        let v = trkalian_from_twistor(spec, *x, &cfg.contour)
            .map_err(|e| CliError::compute(format!("point {:?}", vec3(*x)), e))?;
        Ok(components(v))
    };
    render(&format!("x,y,z,{VECTOR_COLUMNS}"), &pts, |p| vec3(*p).to_vec(), eval)
}
