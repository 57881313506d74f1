use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid subsystem dimensions {dims:?} for vector of length {len}")]
    InvalidDims { dims: Vec<usize>, len: usize },

    #[error("invalid subsystem selection {indices:?} for {count} subsystems")]
    InvalidSubsystem { indices: Vec<usize>, count: usize },

    #[error("weights must be nonnegative and sum to 1 (sum = {sum})")]
    InvalidWeights { sum: f64 },

    #[error("matrix is not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("value {value} outside admissible range [{low}, {high}]")]
    OutOfRange { value: f64, low: f64, high: f64 },

    #[error("state pair overlap must be real and nonnegative, got {re}{im:+}i")]
    OverlapPhase { re: f64, im: f64 },

    #[error("degenerate geometry at overlap {overlap}: no super-quantum interval exists")]
    DegenerateGeometry { overlap: f64 },

    #[error("requested fidelity {requested} exceeds 1")]
    FidelityAboveOne { requested: f64 },

    #[error("machine anchors do not match probe branches (deviation {deviation:e})")]
    AnchorMismatch { deviation: f64 },

    #[error("machine kind {machine} does not match probe kind {probe}")]
    KindMismatch { machine: String, probe: String },

    #[error("evolved state has norm {norm}, expected 1")]
    EvolvedNorm { norm: f64 },

    #[error("A-part entropy {a} differs from B-part entropy {b} for a pure joint state")]
    PurityViolation { a: f64, b: f64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("search did not converge in any restart (best fidelity {best})")]
    SearchFailed { best: f64 },
}
