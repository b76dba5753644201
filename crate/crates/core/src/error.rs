use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("learning rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("entanglement feature missing for subset {0:?}")]
    IncompleteOracle(Vec<usize>),
    #[error("support of size {size} exceeds the subset-enumeration cap of {cap}")]
    SupportTooLarge { size: usize, cap: usize },
    #[error("tree size {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("{what} of size {size} exceeds the exhaustive-enumeration cap of {cap}")]
    SizeCap { what: &'static str, size: usize, cap: usize },
    #[error("site {site} out of range for a boundary of {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("support is defined on {got} sites but the structure has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no crossover: x = {0} lies outside (-1/e, 0)")]
    NoCrossover(f64),
    #[error("{{{p},{q}}} tiling is not supported")]
    UnsupportedTiling { p: usize, q: usize },
    #[error("inconsistent planar embedding: {0}")]
    Embedding(String),
    #[error("support is not a contiguous boundary interval; use min_cut_exact instead")]
    NotContiguous,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("configuration does not assign vertex {0}")]
    MissingVertex(usize),
    #[error("least-squares design is degenerate: {0}")]
    DegenerateDesign(String),
    #[error("radius {0} is outside the Poincaré disk")]
    OutsideDisk(f64),
    #[error("malformed graph file: {0}")]
    Format(String),
}
