use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is {rows}x{cols}, expected a square matrix over {labels} labels")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        labels: usize,
    },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(String, String),
    #[error("nonzero self-distance at `{0}`")]
    NonzeroDiagonal(String),
    #[error("distance between `{0}` and `{1}` is not strictly positive")]
    NegativeOrZeroOffDiagonal(String, String),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(String, String, String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("could not generate a generic space after {0} attempts")]
    GeneratorExhausted(usize),
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point set is empty")]
    EmptySet,
    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),
    #[error("enumeration needs {required} map pairs, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("linear program failed: {0}")]
    LpNumericalFailure(String),
    #[error("{got} terminals exceed the exact-solver limit of {max}")]
    TooManyTerminals { got: usize, max: usize },
    #[error("{got} points exceed the exact-solver limit of {max}")]
    TooManyPoints { got: usize, max: usize },
    #[error("topology does not match the instance: {0}")]
    TopologyMismatch(String),
    #[error("vector lies at distance {distance} from the anchor, ball radius is {radius}")]
    OutsideBall { distance: f64, radius: f64 },
    #[error("inverse image is not a metric space: {0}")]
    NotAMetric(String),
    #[error("space is not generic (delta = {0})")]
    NotGeneric(f64),
    #[error("sampled boundary point left the ball: {0}")]
    SampleOutsideBall(String),
    #[error("realized tree length {got} differs from minimal filling {expected}")]
    RealizationMismatch { expected: f64, got: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors rejecting a malformed metric space or point cloud.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch { .. }
                | Error::DuplicateLabel(_)
                | Error::NotSymmetric(..)
                | Error::NonzeroDiagonal(_)
                | Error::NegativeOrZeroOffDiagonal(..)
                | Error::TriangleViolation(..)
                | Error::TooFewPoints { .. }
                | Error::DimensionMismatch(..)
                | Error::EmptySet
                | Error::NotGeneric(_)
                | Error::InvalidParameter(_)
                | Error::NonpositiveScale(_)
                | Error::Parse(_)
        )
    }

    /// Errors signalling that a solver hit a size or numerical limit.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::TooManyTerminals { .. }
                | Error::TooManyPoints { .. }
                | Error::LpNumericalFailure(_)
                | Error::GeneratorExhausted(_)
        )
    }
}
