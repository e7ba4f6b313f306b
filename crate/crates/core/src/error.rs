use thiserror::Error;

/// Errors raised by the simulator, the tabular codec and the graph parser.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {0} out of range 1..=16")]
    QubitCount(usize),

    #[error("amplitude vector length {0} is not a power of two")]
    BadDimension(usize),

    #[error("input state is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },

    #[error("qubit label {label} out of range for a {n}-qubit register")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("two-qubit operation needs distinct qubits, got {0} twice")]
    SameQubit(usize),

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("remaining subsystem is entangled with the kept qubits (purity {purity})")]
    EntangledRemainder { purity: f64 },

    #[error("impossible branch at step {step} (qubit {qubit}): outcome {outcome} has probability {probability}")]
    ImpossibleBranch {
        step: usize,
        qubit: usize,
        outcome: u8,
        probability: f64,
    },

    #[error("expected {expected} outcome bits, got {got}")]
    OutcomeCount { expected: usize, got: usize },

    #[error("qubit {0} appears twice in the measurement pattern")]
    DuplicateMeasurement(usize),

    #[error("missing outcome bit for qubit {0}")]
    MissingOutcome(usize),

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph with {0} vertices is too large for dense operator matrices (max 5)")]
    TooManyVertices(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("ragged row {row}: expected {expected} cells, got {got}")]
    RaggedRow { row: usize, expected: usize, got: usize },

    #[error("duplicate row {0} in table")]
    DuplicateRow(String),

    #[error("unknown subcluster {0:?}")]
    UnknownSubcluster(String),

    #[error("no input binding for column {0}")]
    UnboundInput(usize),

    #[error("degenerate input pair on column {0}: a*b = 0")]
    DegenerateInputPair(usize),

    #[error("state is not tabular in this basis; coefficient magnitudes {histogram:?}")]
    NotTabular { histogram: Vec<(f64, usize)> },

    #[error("column labels differ: {left:?} vs {right:?}")]
    LabelMismatch { left: Vec<usize>, right: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
