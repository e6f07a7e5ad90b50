use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: |m - m^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not antisymmetric: |m + m^T| = {deviation:.3e}")]
    NotAntisymmetric { deviation: f64 },
    #[error("antisymmetric matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("eigenvalue {value:.3e} is below the clipping threshold -{threshold:.3e}")]
    NegativeEigenvalue { value: f64, threshold: f64 },
    #[error("operator is not unitary: |U U^dag - 1| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("{what}: size {requested} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },
    #[error("invalid stabilizer state: {0}")]
    InvalidStabilizer(String),
    #[error("inconsistent destabilizer frame: {0}")]
    InconsistentFrame(String),
    #[error("hamiltonian terms {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("syndrome class count {count} exceeds the budget of {limit}")]
    ClassExplosion { count: usize, limit: usize },
    #[error("unsupported state family: {0}")]
    UnsupportedFamily(String),
    #[error("malformed circuit at line {line}: {message}")]
    MalformedCircuit { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vanishing normalization: {0}")]
    Normalization(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
