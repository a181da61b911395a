//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Rasterization cell size incompatible with the wire geometry.
    #[error("invalid discretization: cell size {cell_size} m exceeds diameter/2 = {limit} m")]
    InvalidDiscretization { cell_size: f64, limit: f64 },

    /// Field evaluation requested inside or touching a magnetized cell.
    #[error("singular evaluation at site ({x}, {y}, {z}) m: inside or touching a magnetized cell")]
    SingularEvaluation { x: f64, y: f64, z: f64 },

    /// Malformed OVF or config text.
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// Material lacks the constants a MIF problem description needs.
    #[error("incomplete material '{name}': positive K1 and A are required for MIF export")]
    IncompleteMaterial { name: String },

    /// Perturbative resonance expansion evaluated outside its validity domain.
    #[error("expansion domain: {msg}; use exact_resonances instead")]
    ExpansionDomain { msg: String },

    /// Fewer than three projection maps supplied for vector reconstruction.
    #[error("underdetermined reconstruction: {n} axis maps supplied, need at least 3")]
    Underdetermined { n: usize },

    /// Incompatible lattices, kernel pitches, or scene geometry.
    #[error("geometry mismatch: {0}")]
    Geometry(String),

    /// Config entry failed parsing or validation.
    #[error("config error at line {line}, key '{key}': {msg}")]
    Config {
        line: usize,
        key: String,
        msg: String,
    },

    /// Template regression system is singular.
    #[error("degenerate templates: regression matrix is singular")]
    DegenerateTemplate,

    /// Every grid-search candidate was rejected.
    #[error("fit failure: {0}")]
    FitFailure(String),

    /// TIRF angular domain is empty or produces no finite deposits.
    #[error("optics configuration: {0}")]
    OpticsConfig(String),

    /// Invalid field sweep for hysteresis analysis.
    #[error("sweep error: {0}")]
    Sweep(String),

    /// A pipeline stage failed; carries the failing stage name.
    #[error("[{stage}] {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Annotate an error with the pipeline stage it came from.
    pub fn in_stage(self, stage: &str) -> Error {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}
