use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// The exact result is finite but not representable as an `f64`.
    #[error("overflow in {what}: {detail}")]
    Overflow { what: &'static str, detail: String },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Newton refinement of a Gauss node failed.
    #[error("node {index} of the {n}-point rule did not converge (residual {residual:e})")]
    NodeConvergence {
        index: usize,
        n: usize,
        residual: f64,
    },

    #[error("cannot parse function spec {spec:?} at byte {position}: {reason}")]
    Parse {
        spec: String,
        position: usize,
        reason: String,
    },

    #[error("function {spec} has no derivative")]
    MissingDerivative { spec: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn overflow(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Overflow {
            what,
            detail: detail.into(),
        }
    }
}
