use thiserror::Error;

/// Errors across the toolkit. Exit-code mapping for the CLI lives in
/// [`Error::exit_code`]: 2 for I/O and parsing, 3 for validation of inputs,
/// 4 for numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    // -- graph validation ---------------------------------------------------
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("non-positive weight {weight} on edge ({u}, {v})")]
    NonPositiveWeight { u: usize, v: usize, weight: f64 },

    #[error("graph is not connected")]
    NotConnected,

    // -- spectral / objective ------------------------------------------------
    #[error("matrix has more than one zero eigenvalue (disconnected input)")]
    SingularBeyondOnes,

    #[error("k = {k} too large for spectral projection of a {dim}-dimensional Laplacian")]
    KTooLarge { k: usize, dim: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{what} {index} of the matrix is entirely zero")]
    ZeroLine { what: &'static str, index: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("plan is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },

    // -- generators / experiments --------------------------------------------
    #[error("unachievable family spec: {0}")]
    Unachievable(String),

    #[error("could not produce a connected graph")]
    ConnectivityFailure,

    #[error("could not keep the graph connected while corrupting it")]
    CannotStayConnected,

    #[error("label vectors cover different vertex sets ({left} vs {right})")]
    LabelSetMismatch { left: usize, right: usize },

    #[error("vector mismatch: {0}")]
    VectorMismatch(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("sketch size must be at least 2, got {0}")]
    SketchTooSmall(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // -- I/O ------------------------------------------------------------------
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// CLI exit code for this error: 2 I/O or parse, 3 validation, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Io(_) | Parse(_) | Config(_) => 2,
            VertexOutOfRange { .. } | EmptyGraph | SelfLoop(_) | DuplicateEdge(..)
            | NonPositiveWeight { .. } | NotConnected | KTooLarge { .. }
            | DimensionMismatch(_) | NotSquare { .. } | Unachievable(_)
            | LabelSetMismatch { .. } | VectorMismatch(_) | EmptyDataset
            | SketchTooSmall(_) | InvalidParameter(_) | CannotStayConnected => 3,
            SingularBeyondOnes | NotPsd { .. } | ZeroLine { .. } | ConnectivityFailure
            | Numerical(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
