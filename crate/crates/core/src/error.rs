use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edges between {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is not planar")]
    NonPlanar,
    #[error("inconsistent rotation system: {0}")]
    InconsistentRotation(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("face {0} is not a 3-face")]
    NotATriangle(usize),
    #[error("graph is not planar without 4-cycles and 5-cycles")]
    NotInClass,
    #[error("assignment leaves vertex {0} unassigned")]
    PartialAssignment(usize),
    #[error("graph has {n} vertices, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("no extension template applied when re-inserting vertex {0}")]
    NoTemplateApplied(usize),
    #[error("cannot bind witness roles: {0}")]
    RoleBindingFailure(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
