use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin: 2j = {0}")]
    InvalidSpin(u32),
    #[error("spin j = {0}/2 is not half-odd-integer; gates need j = (2n+1)/2")]
    NotGateSpin(u32),
    #[error("invalid direction (theta = {theta}, phi = {phi})")]
    InvalidDirection { theta: f64, phi: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("matrix is singular (smallest singular value {0:e})")]
    SingularInput(f64),
    #[error("degenerate cycle: leg {leg} has |R|^2 + |S|^2 = {weight:e}")]
    DegenerateCycle { leg: usize, weight: f64 },
    #[error("degenerate leg: |R|^2 + |xi S|^2 = {0:e}")]
    DegenerateLeg(f64),
    #[error("leg {0} joins antipodal points; geodesic is not unique")]
    AntipodalLeg(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("no subspace angle realizes relative phase {target}")]
    NoRoot { target: f64 },
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("numerical contract violated: {0}")]
    ContractViolation(String),
    #[error("leg {0} has R = 0; its phase is undefined")]
    ZeroR(usize),
    #[error("auxiliary overlap |xi| = {0} is neither 0 nor 1; P_a is not a projector")]
    UnsupportedXi(f64),
    #[error("state has zero weight")]
    ZeroWeight,
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
