use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one of the CLI exit
/// codes through [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyOrder,

    #[error("order error: {0}")]
    Order(String),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("vertices must be distinct (got {0} twice)")]
    DistinctVertices(usize),

    #[error("graph6 parse error at byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },

    #[error("json error: {0}")]
    Json(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("power iteration did not converge after {iterations} matrix-vector products (best estimate {best}, residual {residual:e})")]
    NonConvergence {
        best: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("divergent walk series: max degree {max_degree} is not below candidate rho {rho}")]
    DivergentSeries { max_degree: usize, rho: f64 },

    #[error("degree sequence is not graphical: {0}")]
    NotGraphical(String),

    #[error("embedding is not cellular: {0}")]
    Cellularity(String),

    #[error("invalid embedding scheme at vertex {vertex}: {message}")]
    InvalidScheme { vertex: usize, message: String },

    #[error("face shape error: {0}")]
    FaceShape(String),

    #[error("splice changed the Euler genus from {before} to {after}")]
    SpliceIntegrity { before: usize, after: usize },

    #[error("spanning path witness error: {0}")]
    Witness(String),

    #[error("edge switch precondition violated: {0}")]
    Switch(String),

    #[error("scale refusal: {0}")]
    ScaleRefusal(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ScaleRefusal(_) => 3,
            Error::NonConvergence { .. } => 4,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
