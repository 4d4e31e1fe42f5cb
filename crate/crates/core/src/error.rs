use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} has zero out-weight; normalized adjacency undefined")]
    IsolatedVertex(usize),

    #[error("chain is not reversible (detailed-balance residual {residual:e})")]
    NotReversible { residual: f64 },

    #[error("matrix has complex eigenvalues (max imaginary part {max_imag:e})")]
    ComplexSpectrum { max_imag: f64 },

    #[error("{0}")]
    Range(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("graph generation failed after {attempts} attempts")]
    GenerationFailure { attempts: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("face {0:?} is not in the complex")]
    MissingFace(Vec<u32>),

    #[error("top-face weights incomplete: face {0:?} has no weight")]
    IncompleteWeights(Vec<u32>),

    #[error("weights are not balanced (residual {residual:e})")]
    Unbalanced { residual: f64 },

    #[error("complex is not pure of the expected dimension")]
    NotPure,

    #[error("base graph must be triangle-free: triangle at vertices {0:?}")]
    TriangleFound([u32; 3]),

    #[error("partition error: {0}")]
    Partition(String),

    #[error("chain is reducible; stationary distribution is not unique")]
    Reducible,

    #[error("chain has non-positive spectral gap; mixing bound undefined")]
    NonMixing,

    #[error("invalid graph data: {0}")]
    InvalidGraph(String),

    #[error("row {row} of transition matrix sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
