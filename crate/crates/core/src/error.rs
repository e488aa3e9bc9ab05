use thiserror::Error;

/// Errors raised by the model, group, graph and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid invariant polynomial: {0}")]
    InvalidInvariant(String),

    #[error("fiber value |b| = {modulus} is outside the disc of radius {epsilon}")]
    FiberOutOfRange { modulus: f64, epsilon: f64 },

    #[error("operation is undefined on the singular fiber b = 0")]
    SingularFiber,

    #[error("deck transformation divides by a vanishing coordinate")]
    DivisionAtSingularBranch,

    #[error("no representative in the formal domain was reached")]
    NotInModel,

    #[error("operands lie on different fibers ({0} vs {1})")]
    FiberMismatch(String, String),

    #[error("formal addition needs a regular fiber")]
    SingularFiberInput,

    #[error("addition is undefined at the pair (s, s)")]
    UndefinedAtDoublePoint,

    #[error("the singular point has no inverse")]
    NoInverseAtSingularPoint,

    #[error("zero is not an element of C*")]
    ZeroInput,

    #[error("the singular point is not in the image of C*")]
    SingularPointInput,

    #[error("point is not on the singular fiber")]
    NotOnSingularFiber,

    #[error("trivialization matrix is singular")]
    SingularMatrix,

    #[error("coordinates lie outside the domain of chart {0}")]
    OutsideChartDomain(String),

    #[error("coordinates are not in the overlap of charts {0} and {1}")]
    NotInOverlap(String, String),

    #[error("triple does not satisfy the addition law (error {0:e})")]
    NotOnGraph(f64),

    #[error("third coordinate must be nonzero")]
    ZeroThirdCoordinate,

    #[error("map evaluation failed during differentiation: {0}")]
    EvaluationFailed(String),

    #[error("unknown check id `{0}`")]
    UnknownCheckId(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("complex value is zero")]
    ZeroComplex,

    #[error("root finding did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
