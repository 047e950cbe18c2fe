use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot normalize a vector of length {0:e}")]
    ZeroVector(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("foot point is not orthogonal to the ray direction (foot . theta = {0:e})")]
    FootNotOrthogonal(f64),
    #[error("ray is parallel to the z axis (transverse length {0:e})")]
    DegenerateRay(f64),
    #[error("direction is orthogonal to the wave vector (kappa0 . theta = {0:e})")]
    SingularDirection(f64),
    #[error("damped line integral did not settle: {0}")]
    NonConvergence(String),
    #[error("beam integrand is not finite at sphere node {0}")]
    PoleSingularity(usize),
    #[error("odd-degree coefficient of size {value:e} at degree {degree}")]
    OddInput { degree: usize, value: f64 },
    #[error("singularity at {pole} lies {distance:e} from the contour")]
    PoleOnContour { pole: Complex64, distance: f64 },
    #[error("fundamental-solution branch needs z > 0, got z = {0}")]
    BranchViolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
