use thiserror::Error;

/// Direction in which a coordinate escapes to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    #[serde(rename = "+")]
    Up,
    #[serde(rename = "-")]
    Down,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Up => "+",
            Direction::Down => "-",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element {0} does not belong to the group descriptor")]
    MixedGroups(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate t{} is unbounded in direction {direction}", .coordinate + 1)]
    Unbounded { coordinate: usize, direction: Direction },
    #[error("constant {0} lies outside the parameter group")]
    ConstantOutsideParameterGroup(String),
    #[error("point is not in the set")]
    NotInSet,
    #[error("the zero polynomial has no residue")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("wild or deep ramification: {0}")]
    WildOrDeepRamification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("charts {first} and {second} are incompatible: {reason}")]
    IncompatibleCharts { first: usize, second: usize, reason: String },
    #[error("separators fail to separate the extensions at r = {0}")]
    NotSeparating(String),
    #[error("coordinates of r are dependent over the base value group: {0}")]
    DependentCoordinates(String),
    #[error("singular monomial map")]
    SingularMap,
}

impl Error {
    /// Parse-style failures as opposed to domain failures.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
