use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("shift operator is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("eigensolver did not converge within {0} sweeps")]
    EigenFailure(usize),
    #[error("{what} index {index} out of range for size {len}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("vertex {0} already belongs to the reference set")]
    VertexInSet(usize),
    #[error("space not uniformly bandlimited")]
    NotUniform,
    #[error("vertex {0} has an infinite bandwidth; finitize the profile first")]
    InfiniteBandwidth(usize),
    #[error("invalid bandwidth: {0}")]
    InvalidBandwidth(String),
    #[error("frequency bandwidth maps differ")]
    MismatchedFrequencyBandwidths,
    #[error("{what} is limited to {limit} vertices, got {n}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        n: usize,
    },
    #[error("no uniqueness set; constraints inconsistent")]
    NoUniquenessSet,
    #[error("frequency bandwidths are already simple; no reduction frequency")]
    NoReductionFrequency,
    #[error("matrix is singular within tolerance")]
    Singular,
    #[error("filtration level {level}: |V_i| = {vertices} but |V| - |Lambda_i,0| = {expected}")]
    LevelSize {
        level: usize,
        vertices: usize,
        expected: usize,
    },
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid sample set: {0}")]
    Sampling(String),
    #[error("observations do not match the sample set: {0}")]
    ObservationMismatch(String),
    #[error("rank-deficient reconstruction at level {level}: rank {rank} < {unknowns} unknowns")]
    RankDeficient {
        level: usize,
        rank: usize,
        unknowns: usize,
    },
    #[error("redistribution: {0}")]
    Redistribution(String),
    #[error("signal modes differ: {0}")]
    ModeMismatch(String),
    #[error("sample set has zero rate")]
    ZeroRate,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
