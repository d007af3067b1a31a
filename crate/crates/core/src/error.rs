use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("{what}: argument {value} outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid curve parameter {name} = {value}: must be finite and positive")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    /// Adaptive subdivision hit `max_depth` before meeting the tolerance.
    #[error("quadrature depth exhausted: estimate {estimate}, error bound {error_bound:e}")]
    DepthExhausted { estimate: f64, error_bound: f64 },

    /// A two-sided inequality chain failed beyond its slack.
    #[error(
        "chain violated at x = {x}: {lhs} (degree {lhs_degree}) vs {rhs} (degree {rhs_degree}), excess {excess:e}"
    )]
    ChainViolation {
        x: f64,
        lhs: &'static str,
        lhs_degree: usize,
        rhs: &'static str,
        rhs_degree: usize,
        excess: f64,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain { what, value, domain }
    }
}
