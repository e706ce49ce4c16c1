use thiserror::Error;

/// Everything that can go wrong while building or auditing an instance.
///
/// Geometric failures found by an audit are reported through flags on the
/// relevant certificate; the variants here are reserved for inputs that
/// cannot be processed and for anomalies that stop a pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^63")]
    InvalidModulus(u64),
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("field of size {modulus} is too small for degree bound {degree}")]
    FieldTooSmall { modulus: u64, degree: usize },
    #[error("jet order {order} exceeds total degree {degree}")]
    OrderTooLarge { order: usize, degree: usize },
    #[error("jet of order {order} does not vanish at the point")]
    NonvanishingLowerJet { order: usize },
    #[error("condition point is a singular point of the curve")]
    SmoothnessViolation,
    #[error("condition point does not lie on the curve")]
    PointNotOnCurve,
    #[error("line coefficients give no valid parametrization")]
    DegenerateLine,
    #[error("linear system is empty")]
    EmptySystem,
    #[error("resampling exhausted after {attempts} attempts: {what}")]
    ResamplingExhausted { attempts: usize, what: String },
    #[error("internal error: {0}")]
    InternalError(String),
    #[error("genus {0} is below the supported minimum 5")]
    GenusTooSmall(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("adjoint system has vector dimension {found}, expected {expected}")]
    AdjointDimensionAnomaly { expected: usize, found: usize },
    #[error("curve has vanishing v-derivative at an evaluation point")]
    SingularEvaluationPoint,
    #[error("{what}: vector dimension {found}, expected {expected}")]
    DimensionAnomaly { what: String, expected: usize, found: usize },
    #[error("found only {found} of {wanted} smooth points")]
    InsufficientPoints { wanted: usize, found: usize },
    #[error("curve contains the fiber {coordinate} = const as a component")]
    FiberComponent { coordinate: char },
    #[error("quadric net has vector dimension {found}, expected 3")]
    NetDimensionAnomaly { found: usize },
    #[error("fiber divisor spans rank {rank}, expected 3")]
    SpanAnomaly { rank: usize },
    #[error("no quadric contains the ruling planes (solution dimension {found})")]
    NoQuadric { found: usize },
    #[error("ruling quadric has Gram rank {rank}, expected 3")]
    RankNot3 { rank: usize },
    #[error("witness failure: {0}")]
    WitnessFailure(String),
    #[error("branch tangents coincide at node {node}")]
    TangentCoincidence { node: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
