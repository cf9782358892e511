use thiserror::Error;

/// Errors raised by net construction, exploration and complex assembly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("undeclared place `{0}`")]
    UnknownPlace(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("marking has {found} places, net has {expected}")]
    MarkingSize { expected: usize, found: usize },
    #[error("state space exceeds the cap of {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("state set is not forward closed: {state} fires {event} to {target}, which is missing")]
    NotForwardClosed {
        state: String,
        event: String,
        target: String,
    },
    #[error("state {0} is not in the state space")]
    UnknownState(String),
    #[error("face index out of range: n={n}, i={i}")]
    FaceIndex { n: usize, i: usize },
    #[error("cube is not a member of grade {0}")]
    UnknownCube(usize),
    #[error("malformed semicubical set: {0}")]
    MalformedComplex(String),
    #[error("semicubical sets live over different nets")]
    IncompatibleAmbient,
    #[error("d_{degree} composed with d_{next} is not zero", next = .degree + 1)]
    BoundaryNotClosed { degree: usize },
    #[error("invalid pipeline length {0}: need n >= 2")]
    InvalidPipeline(usize),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// Syntax or semantic error in a net definition document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
