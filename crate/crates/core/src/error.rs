use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field Q(sqrt({0})) is not one of the supported norm-Euclidean fields")]
    UnsupportedField(i64),
    #[error("zero argument: {0}")]
    ZeroArgument(&'static str),
    #[error("point leaves the upper half-space (r = {0})")]
    OutsideHalfSpace(f64),
    #[error("singular matrix: automorphy denominator vanished")]
    SingularMatrix,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("truncation too small: tail bound {bound:e} exceeds tolerance {tol:e}")]
    Truncation { bound: f64, tol: f64 },
    #[error("extrapolation unstable: successive estimates differ by {0:e}")]
    Extrapolation(f64),
    #[error("quadrature grid undersamples the oscillation: {0} points per period")]
    GridResolution(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
