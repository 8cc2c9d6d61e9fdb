use thiserror::Error;

/// Errors produced by the analytic engines and the statevector oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a^2 must lie in (0, 1], got {0}")]
    InvalidSchmidt(f64),
    #[error("a linear chain needs at least one link")]
    NoLinks,
    #[error("a star needs at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("register of {requested} qubits exceeds the limit of {limit}")]
    QubitLimit { requested: usize, limit: usize },
    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitIndex { index: usize, qubits: usize },
    #[error("gate operands must be distinct qubits")]
    RepeatedQubit,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("classification needs at least one candidate index")]
    NoCandidates,
    #[error("branch state matches no candidate (best fidelity {fidelity:.3e} for index {index})")]
    Unclassified { index: u32, fidelity: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
