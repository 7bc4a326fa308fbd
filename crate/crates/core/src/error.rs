use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("no channel in family {family} has total error probability {p}")]
    NoSolution { family: String, p: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("syndrome weight {r} out of range for a length-{m} code")]
    WeightOutOfRange { r: usize, m: usize },

    #[error("syndrome class r={r} has zero probability")]
    ZeroProbabilityClass { r: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumeration needs {required} configurations, cap is {cap}")]
    ResourceLimit { required: u128, cap: u128 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("no sign change bracketed: {0}")]
    NoBracket(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("oracle size cap exceeded: {qubits} qubits (max {max})")]
    OracleCap { qubits: usize, max: usize },
}
