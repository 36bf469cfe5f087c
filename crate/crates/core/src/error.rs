use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by the exit code the experiment runner maps them to:
/// parse (2), hypothesis (3), numerical (4) and I/O (5).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{field} evaluated outside its tabulated domain at s={s}, x={x:?}")]
    OutOfDomain { field: String, s: f64, x: Vec<f64> },

    #[error("non-finite {field} at s={s}, x={x:?}")]
    NonFinite { field: String, s: f64, x: Vec<f64> },

    #[error("diffusion matrix is not positive semidefinite at s={s}, x={x:?} (min eigenvalue {min_eigenvalue})")]
    NotPsd {
        s: f64,
        x: Vec<f64>,
        min_eigenvalue: f64,
    },

    #[error("local intensity bound is not finite at s={s}, x={x:?}")]
    IntensityBound { s: f64, x: Vec<f64> },

    #[error("sector condition violated: {0}")]
    SectorViolated(String),

    #[error("model hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("structural failure: RHS is zero but LHS = {lhs} at t={t}, R={radius}")]
    StructuralFailure { t: f64, radius: f64, lhs: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error(
        "right derivative does not exist at {at}: successive extrapolants differ by {difference:e}"
    )]
    RightDerivative { at: f64, difference: f64 },

    #[error("ill-posed index fit: windowed slope spread {spread:.3} exceeds 0.5")]
    IllPosedFit { spread: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidConfig(_) => 2,
            Error::OutOfDomain { .. }
            | Error::NonFinite { .. }
            | Error::NotPsd { .. }
            | Error::IntensityBound { .. }
            | Error::SectorViolated(_)
            | Error::HypothesisViolated(_)
            | Error::StructuralFailure { .. } => 3,
            Error::Quadrature { .. }
            | Error::RightDerivative { .. }
            | Error::IllPosedFit { .. } => 4,
            Error::Io(_) => 5,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Io(std::io::Error::other(format!("{other:?}"))),
        }
    }
}
