use thiserror::Error;

/// Errors produced by tensor construction and the cone machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected order {expected_order}, dim {expected_dim}, got order {order}, dim {dim}")]
    ShapeMismatch {
        expected_order: usize,
        expected_dim: usize,
        order: usize,
        dim: usize,
    },

    #[error("dimension mismatch: tensor dim {dim}, vector length {len}")]
    DimensionMismatch { dim: usize, len: usize },

    #[error("multinomial coefficient overflows u64 for multi-index of degree {degree}")]
    MultinomialOverflow { degree: usize },

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("order must be even for {0}, got odd order")]
    OddOrder(&'static str),

    #[error("generating vector length {len} inconsistent with order {order}, dim {dim} (expected {expected})")]
    GeneratingVectorLength {
        len: usize,
        order: usize,
        dim: usize,
        expected: usize,
    },

    #[error("not Hankel: entries disagree on index-sum level {level} ({a} vs {b})")]
    NotHankel { level: usize, a: f64, b: f64 },

    #[error("confluent or complex nodes: {0}")]
    ConfluentNodes(String),

    #[error("rank overflow: detected rank {rank} exceeds {rows} available annihilator rows")]
    RankOverflow { rank: usize, rows: usize },

    #[error("inheritance reshape requires dim-1 == (p-1)*q with q >= 2, p >= 3; got dim {dim}, q {q}, p {p}")]
    InheritanceShape { dim: usize, q: usize, p: usize },

    #[error("scale vector must be strictly positive, entry {index} is {value}")]
    NonPositiveScale { index: usize, value: f64 },

    #[error("Jacobi eigensolver failed to converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    EigNonConvergence { sweeps: usize, off: f64 },

    #[error("infeasible base system: {0}")]
    InfeasibleBase(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed input in field `{field}`: {message}")]
    MalformedInput { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
