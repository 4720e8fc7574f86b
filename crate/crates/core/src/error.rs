//! Crate-wide error type.

/// Everything that can go wrong across the crate, from malformed parameters
/// to exhausted search budgets.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    EmptySides,

    #[error("side {side} at coordinate {coord} is below the minimum of 2")]
    SideTooSmall { coord: usize, side: u16 },

    #[error("distance set must be a nonempty subset of 1..={m}, got {got:?}")]
    BadDistanceSet { m: usize, got: Vec<usize> },

    #[error("tuple length {got} does not match dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("coordinate {coord} has value {value}, outside its side {side}")]
    CoordOutOfRange { coord: usize, value: u16, side: u16 },

    #[error("vertex id {id} out of range for a graph on {count} vertices")]
    VertexOutOfRange { id: usize, count: usize },

    #[error("layer dimension {k} out of range 0..={m}")]
    LayerDimOutOfRange { k: usize, m: usize },

    #[error("invalid layer: {0}")]
    InvalidLayer(String),

    #[error("empty vertex set")]
    EmptyVertexSet,

    #[error("graph has {vertices} vertices, exceeding the limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },

    #[error("node budget of {limit} exhausted")]
    NodeBudget { limit: u64 },

    #[error("wall-clock budget of {seconds:.3}s exhausted")]
    TimeBudget { seconds: f64 },

    #[error("result cap of {cap} exceeded")]
    CapExceeded { cap: u64 },

    #[error("malformed array: {0}")]
    MalformedArray(String),

    #[error("vertices {a} and {b} are not adjacent, so the set is not a clique")]
    NotClique { a: usize, b: usize },

    #[error("clique is not in hypercube form: {0}")]
    NotHypercubeForm(String),

    #[error("distance set {got:?} is not of the form {{k+1,...,m}}")]
    BadDistanceShape { got: Vec<usize> },

    #[error("not an endomorphism: edge ({a},{b}) maps to non-edge ({fa},{fb})")]
    NotEndomorphism {
        a: usize,
        b: usize,
        fa: usize,
        fb: usize,
    },

    #[error("map is a bijection, not a singular endomorphism")]
    NotSingular,

    #[error("invalid construction spec: {0}")]
    BadSpec(String),

    #[error("structure violation: {0}")]
    StructureViolation(String),

    #[error("unsupported graph family: {0}")]
    UnsupportedFamily(String),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("could not parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("no hypercube count available for dimension {d}")]
    MissingCubeCount { d: usize },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
