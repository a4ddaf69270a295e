use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a parity game needs at least one node")]
    EmptyGame,

    #[error("node {node} has no successor")]
    NoSuccessor { node: usize },

    #[error("node {node} has successor {target}, which is not a node of the game")]
    DanglingEdge { node: usize, target: usize },

    #[error("node {node} lists successor {target} more than once")]
    DuplicateEdge { node: usize, target: usize },

    #[error("node {node} has negative priority {priority}")]
    NegativePriority { node: usize, priority: i64 },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: node {node} is defined twice")]
    DuplicateNode { line: usize, node: usize },

    #[error("node {node} is never defined")]
    MissingNode { node: usize },

    #[error("timestamps have different lengths ({left} and {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("configuration is terminal: credit for priority {priority} is exhausted")]
    TerminalConfig { priority: usize },

    #[error("{what} exceeds the budget of {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },

    #[error("strategy extraction got stuck: node {node} has no usable decision left")]
    ExtractionStuck { node: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}
