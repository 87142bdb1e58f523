use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported wavelet family: Daubechies with {0} vanishing moments (expected 1..=10)")]
    UnsupportedFamily(usize),
    #[error("bad resolution levels: j0 = {j0}, jmax = {jmax}")]
    BadLevels { j0: u32, jmax: u32 },
    #[error("grid length {0} is not a power of two")]
    GridNotDyadic(usize),
    #[error("maximum level {jmax} needs at least {needed} grid points, got {len}")]
    LevelsExceedGrid { jmax: u32, needed: usize, len: usize },
    #[error("coefficient layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("invalid curve panel: {0}")]
    InvalidPanel(String),
    #[error("maximum lag p = {p} is too large for n = {n} curves")]
    LagTooLarge { p: usize, n: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("requested {requested} components but only {available} are available")]
    RankRequestTooLarge { requested: usize, available: usize },
    #[error("unknown bootstrap method `{0}`")]
    InvalidMethod(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("aggregation window δ = {delta} is longer than the {n} available curves")]
    WindowTooLong { delta: usize, n: usize },
    #[error("empty lag window: p = {p} must be at least 2δ - 1 = {min}")]
    LagWindowEmpty { p: usize, min: usize },
    #[error("non-stationary AR coefficient {0}")]
    NonStationaryAr(f64),
    #[error("curve has (near) zero norm")]
    ZeroCurve,
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("grid is not uniform: {0}")]
    NonUniformGrid(String),
    #[error("too few curves: got {got}, need at least {need}")]
    TooFewCurves { got: usize, need: usize },
    #[error("eigen decomposition failed: {0}")]
    Eigen(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line runner: 3 for numerical
    /// failures, 2 for everything the user can fix by changing the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotSymmetric(_) | Error::Eigen(_) => 3,
            _ => 2,
        }
    }
}
