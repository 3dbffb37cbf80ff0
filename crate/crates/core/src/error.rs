use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis index {index} out of range for {n_spins} spins")]
    IndexOutOfRange { index: usize, n_spins: usize },
    #[error("spin index {site} out of range for {n_spins} spins")]
    SiteOutOfRange { site: usize, n_spins: usize },
    #[error("expected {expected} amplitudes, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("subsystem mask is empty")]
    EmptyMask,
    #[error("subsystem mask {mask:#b} does not fit {n_spins} spins")]
    MaskOutOfRange { mask: u64, n_spins: usize },
    #[error("{what} requires {required}, got {n_spins} spins")]
    WrongSystemSize {
        what: &'static str,
        required: &'static str,
        n_spins: usize,
    },
    #[error("{what} is capped at {cap} spins, got {n_spins}")]
    SizeCap {
        what: &'static str,
        cap: usize,
        n_spins: usize,
    },
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("quadrature needs at least {min_theta} theta nodes and {min_phi} phi nodes, got {theta} and {phi}")]
    TooFewNodes {
        theta: usize,
        phi: usize,
        min_theta: usize,
        min_phi: usize,
    },
    #[error("quadrature not exact: {coarse} vs {fine} after doubling the nodes")]
    QuadratureNotExact { coarse: f64, fine: f64 },
    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("projector pattern has length {got}, expected {expected}")]
    PatternLength { expected: usize, got: usize },
    #[error("non-negligible imaginary part {0:e} in a real expectation value")]
    ImaginaryResidue(f64),
    #[error("negative 3-tangle {0:e} beyond round-off")]
    NegativeTangle(f64),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    #[error("at theta = {theta}, g = {g}: {source}")]
    AtGridPoint {
        theta: f64,
        g: f64,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
