use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("curve parameter {t} outside [{lo}, {hi}]")]
    ParameterOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid edge {edge}: {reason}")]
    InvalidEdge { edge: usize, reason: String },

    #[error("invalid element {element}: {reason}")]
    InvalidElement { element: usize, reason: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh generation failed: {0}")]
    MeshGeneration(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("element {element}: {reason}")]
    Operator { element: usize, reason: String },

    #[error("material: {0}")]
    Material(String),

    #[error("material failure in element {element}, point {point}: {reason}")]
    MaterialPoint {
        element: usize,
        point: usize,
        reason: String,
    },

    #[error("boundary condition: {0}")]
    BoundaryCondition(String),

    #[error("config: {0}")]
    Config(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("Newton did not converge at step {step} after {iterations} iterations (last residual {last_residual:.3e}; history {history:?})")]
    NewtonDivergence {
        step: usize,
        iterations: usize,
        last_residual: f64,
        history: Vec<f64>,
    },

    #[error("analysis: {0}")]
    Analysis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
