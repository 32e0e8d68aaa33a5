use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("contact angle {theta_rad} rad is not wetting (cos θ ≤ 0)")]
    NonWettingAngle { theta_rad: f64 },

    #[error("effective height {height} m is at or below the singularity threshold {threshold} m")]
    SingularHeight { height: f64, threshold: f64 },

    #[error("step size {dt} s underflowed at t = {t} s")]
    StepSizeUnderflow { t: f64, dt: f64 },

    #[error("integration exceeded {max_steps} steps before reaching t = {t_end} s")]
    TooManySteps { max_steps: usize, t_end: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
