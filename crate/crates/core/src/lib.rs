//! Integral geometry of Trkalian (constant-eigenvalue Beltrami) fields.
//!
//! The crate covers an analytic field catalog, X-ray, divergent-beam, Y, Radon and
//! Funk transforms of those fields, four tomographic inversion routes, and a
//! mini-twistor contour-integral generator. Everything is pure and thread-safe.

pub mod error;
pub mod fields;
pub mod funk;
pub mod geometry;
pub mod harmonics;
pub mod inversion;
pub mod quadrature;
pub mod rays;
pub mod special;
pub mod twistor;

pub use error::{Error, Result};
pub use fields::{
    curl_fd, div_fd, eval_field, helical_projection, moses_q, radon_moses, CurlEigen, Helicity, MosesData, MosesField,
    ProjectedMoses, Trkalian, TrkalianSpec, TwoTone,
};
pub use geometry::{
    frame_for, project_to_perp, Beam, ComplexVec3, Direction, OrthoFrame, PlaneCoord, RayCoord, RealVec3,
};
pub use funk::PvRule;
pub use harmonics::{SphericalFunction, VectorSphericalFunction};
pub use num_complex::Complex64;
pub use inversion::{BeamFunction, BeamKind, BeamSign, Provenance};
pub use quadrature::{make_sphere_quadrature, CircleQuadrature, GaussRule, PolarGrid, SphereQuadrature};
pub use rays::{Estimate, LundquistSeriesCfg, OscillatoryLineQuadrature};
pub use twistor::{ContourSpec, IntegrandSpec, Phase, Twistor, TwistorFunction};
