use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("state norm is {0}, expected 1")]
    BadNorm(f64),
    #[error("logarithm of a singular operator")]
    SingularLog,
    #[error("total width {width} exceeds the maximum of {max} qubits")]
    WidthOverflow { width: usize, max: usize },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("duplicate register `{0}`")]
    DuplicateRegister(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("rank {rank} exceeds dimension {dim}")]
    RankTooLarge { rank: usize, dim: usize },
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("label mismatch between distributions")]
    LabelMismatch,
    #[error("invalid cut: {0}")]
    BadCut(String),
    #[error("reference system too small: dim {reference} < {required}")]
    ReferenceTooSmall { reference: usize, required: usize },
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("protocol is not valid: {0}")]
    InvalidProtocol(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("condition outside support: {0}")]
    OutsideSupport(String),
    #[error("{0} parties are not supported here (two-party only)")]
    UnsupportedParties(usize),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("empty domain")]
    EmptyDomain,
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("audit precondition failed: {0}")]
    Audit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
