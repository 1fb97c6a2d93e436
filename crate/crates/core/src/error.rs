use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-summable tail: {0}")]
    NonSummableTail(String),

    #[error("no certificate: Levinson condition fails ({0})")]
    LevinsonFails(String),

    #[error("no certificate: Domar condition unsatisfiable for ln C up to {ln_cap:e}")]
    NoCertificate { ln_cap: f64 },

    #[error("bound exceeds representable range (log bound = {log_bound})")]
    BoundNotRepresentable { log_bound: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CertError {
    fn from(e: std::io::Error) -> Self {
        CertError::Io(e.to_string())
    }
}

impl From<csv::Error> for CertError {
    fn from(e: csv::Error) -> Self {
        CertError::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for CertError {
    fn from(e: serde_json::Error) -> Self {
        CertError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CertError>;
