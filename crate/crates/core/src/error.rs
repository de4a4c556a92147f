use thiserror::Error;

/// Errors produced by series arithmetic, map evaluation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a series whose constant term is not a unit (|b0| = {0:e})")]
    DivisionByNonUnit(f64),

    #[error("constant term {re}{im:+}i is not admissible: {expected}")]
    BadConstantTerm {
        re: f64,
        im: f64,
        expected: &'static str,
    },

    #[error("sampling radius {0} outside (0, 1)")]
    BadRadius(f64),

    #[error("point {re}{im:+}i lies outside the working disk")]
    PointOutsideDisk { re: f64, im: f64 },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("dilatation modulus {0} is not below 1")]
    DilatationOutOfRange(f64),

    #[error("adaptive quadrature failed after {subintervals} subintervals (error estimate {estimate:e})")]
    IntegrationFailure { subintervals: usize, estimate: f64 },

    #[error("derivative modulus {0:e} too small")]
    DegenerateDerivative(f64),

    #[error("affine normalizer modulus {0:e} too small")]
    DegenerateNormalizer(f64),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
