use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] caprise_core::Error),

    #[error(transparent)]
    Grid(#[from] caprise_vof2d::Error),

    #[error("trajectories do not overlap in time ([{a0}, {a1}] vs [{b0}, {b1}])")]
    NoOverlap { a0: f64, a1: f64, b0: f64, b1: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit code for invalid input.
pub const EXIT_INVALID: i32 = 2;
/// Process exit code for numerical failure.
pub const EXIT_NUMERICAL: i32 = 3;

fn model_code(e: &caprise_core::Error) -> i32 {
    use caprise_core::Error as E;
    match e {
        E::InvalidParameter { .. } | E::NonWettingAngle { .. } => EXIT_INVALID,
        E::SingularHeight { .. } | E::StepSizeUnderflow { .. } | E::TooManySteps { .. } => {
            EXIT_NUMERICAL
        }
    }
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        use caprise_vof2d::Error as G;
        match self {
            Error::Model(e) => model_code(e),
            Error::Grid(G::Setup(e)) => model_code(e),
            Error::Grid(G::ArcExceedsDomain { .. }) => EXIT_INVALID,
            Error::Grid(_) => EXIT_NUMERICAL,
            Error::NoOverlap { .. } | Error::Io { .. } | Error::Parse { .. } | Error::Argument(_) => {
                EXIT_INVALID
            }
            Error::Json(_) => EXIT_NUMERICAL,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
