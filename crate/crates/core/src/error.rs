use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weyl group generation did not close after {0} elements")]
    NonClosure(usize),

    #[error("singular killing matrix")]
    SingularKilling,

    #[error("point {0:?} lies on a root hyperplane")]
    OnWall(Vec<f64>),

    #[error("quadrature did not converge: error estimate {estimate:.3e} above tolerance {tol:.3e} with {nodes} nodes")]
    Quadrature { estimate: f64, tol: f64, nodes: usize },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("point outside the beam chart")]
    OutsideChart,

    #[error("space {0} is reducible")]
    Reducible(String),

    #[error("unknown space {0}")]
    UnknownSpace(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("schema mismatch in {file}: {detail}")]
    Schema { file: String, detail: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
