use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A factor was asked to carry degree zero.
    #[error("degree must be at least 1")]
    DegenerateDegree,

    /// Two objects that must share a shape (same `(n, d)`, same format, or
    /// same ambient dimension) do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A format failed its basic invariants (empty, unequal lengths,
    /// non-positive entries).
    #[error("invalid format: {0}")]
    InvalidFormat(String),

    /// An integer quantity does not fit the machine word it must live in.
    #[error("arithmetic overflow while computing {0}")]
    Overflow(String),

    /// A requested subspace dimension is outside its admissible range.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// A linear space handed to the contact test fails first-order tangency
    /// at the given configuration point.
    #[error("space is not tangent at configuration point {point} (form {form})")]
    NotTangent { point: usize, form: usize },

    /// The stacked tangent spaces already fill the ambient space, so no
    /// hyperplane contains them.
    #[error("tangent span fills the ambient space")]
    SpanFillsSpace,

    /// The format does not match any shape covered by the requested bound.
    #[error("format not covered: {0}")]
    ShapeNotCovered(String),

    /// The variety is a linear space, for which the question degenerates.
    #[error("the variety is a linear space")]
    DegenerateLinearSpace,

    /// A coordinate center whose parts are not all constant tuples.
    #[error("center is not a diagonal coordinate tuple")]
    NonDiagonalCenter,

    /// Random sampling failed to produce an admissible object.
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
