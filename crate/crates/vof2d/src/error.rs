use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Setup(#[from] caprise_core::Error),

    #[error("initial contact line at {contact_line} m reaches the domain top {domain_height} m")]
    ArcExceedsDomain {
        contact_line: f64,
        domain_height: f64,
    },

    #[error("volume-fraction gradient {norm:e} too small for a normal")]
    DegenerateNormal { norm: f64 },

    #[error("face Courant number {cfl} exceeds 1")]
    CourantViolation { cfl: f64 },

    #[error("height-function window in column {column} does not bracket the interface")]
    StencilInvalid { column: usize },

    #[error("pressure solver stopped at relative residual {residual:e} after {iterations} iterations")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("column {column} holds more than one interface")]
    MultiValuedColumn { column: usize },

    #[error("non-finite {field} at t = {t} s")]
    NonFinite { field: &'static str, t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Setup(caprise_core::Error::InvalidParameter {
        name,
        reason: reason.into(),
    })
}
