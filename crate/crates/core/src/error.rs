use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("relation is not square ({dim_g} -> {dim_h})")]
    NotSquare { dim_g: usize, dim_h: usize },

    #[error("relation is not selfadjoint (residual {residual:.3e})")]
    NotSelfadjoint { residual: f64 },

    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("lambda = {lambda} is within tolerance of the Dirichlet eigenvalue {nearest}")]
    EigenvalueProximity { lambda: f64, nearest: f64 },

    #[error("Neumann elimination impossible for this potential: boundary block is singular")]
    SingularBoundaryBlock,

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown key `{key}` at line {line}")]
    UnknownKey { key: String, line: usize },

    #[error("invalid value for `{key}`: {msg}")]
    InvalidValue { key: String, msg: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
