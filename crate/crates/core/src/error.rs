use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("scene config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("scene config is missing key `{0}`")]
    MissingKey(&'static str),

    #[error("free-space coefficient is singular at zero distance")]
    ZeroDistance,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series did not converge within {0} terms")]
    SeriesTruncated(usize),

    #[error("degenerate separation: mean power under pattern 1 ({mu1:e}) does not exceed pattern 2 ({mu2:e})")]
    DegenerateSeparation { mu1: f64, mu2: f64 },

    #[error("degenerate channel model: component variance is zero")]
    DegenerateVariance,

    #[error("invalid experiment: {0}")]
    Experiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
