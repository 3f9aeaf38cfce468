use thiserror::Error;

/// Coarse classification used for process exit codes and the C ABI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Input,
    /// A search or window bound was exhausted.
    Resource,
    /// A computed object failed one of its own consistency checks.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis columns are linearly dependent (rank {rank} < {cols})")]
    DependentColumns { rank: usize, cols: usize },

    #[error("rays do not span the ambient space (rank {rank} < {dim}); torus factor present")]
    TorusFactor { rank: usize, dim: usize },

    #[error("ray {index} is not primitive: {ray:?}")]
    NonPrimitiveRay { index: usize, ray: Vec<i64> },

    #[error("the assignment of group elements is not surjective (image has index {image_index} in a group of order {order})")]
    NotSurjective { image_index: String, order: String },

    #[error("lattice is not contained in the ambient lattice")]
    NotSublattice,

    #[error("sublattice has infinite index (rank {sub_rank} < {rank})")]
    InfiniteIndex { sub_rank: usize, rank: usize },

    #[error("cones {0} and {1} cannot be separated along a common face")]
    NotSeparable(usize, usize),

    #[error("cone {0} is not a smooth full-dimensional cone")]
    NotSmoothCone(usize),

    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("window radius {given} is too small, need at least {required}")]
    WindowTooSmall { given: u64, required: u64 },

    #[error("orbit of {0} has no representative inside the window")]
    UnmatchedOrbit(String),

    #[error("search bound exhausted: {0}")]
    BoundExhausted(String),

    #[error("label of {facet} does not divide label of {cell}")]
    LabelDivision { cell: String, facet: String },

    #[error("grading mismatch: {0}")]
    Grading(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::WindowTooSmall { .. } | Error::BoundExhausted(_) => ErrorKind::Resource,
            Error::UnmatchedOrbit(_)
            | Error::LabelDivision { .. }
            | Error::Grading(_)
            | Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) | Error::Json(_) => "parse_error",
            Error::InvalidInput(_) => "invalid_input",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::DependentColumns { .. } => "dependent_columns",
            Error::TorusFactor { .. } => "torus_factor",
            Error::NonPrimitiveRay { .. } => "non_primitive_ray",
            Error::NotSurjective { .. } => "not_surjective",
            Error::NotSublattice => "not_sublattice",
            Error::InfiniteIndex { .. } => "infinite_index",
            Error::NotSeparable(..) => "not_separable",
            Error::NotSmoothCone(_) => "not_smooth_cone",
            Error::DegenerateArrangement(_) => "degenerate_arrangement",
            Error::Unsupported(_) => "unsupported",
            Error::WindowTooSmall { .. } => "window_too_small",
            Error::UnmatchedOrbit(_) => "unmatched_orbit",
            Error::BoundExhausted(_) => "kmax_exhausted",
            Error::LabelDivision { .. } => "label_division",
            Error::Grading(_) => "grading_mismatch",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
