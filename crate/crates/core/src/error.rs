use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("dangling endpoint {0}")]
    DanglingEndpoint(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("input is not a tree")]
    NotATree,
    #[error("malformed group: {0}")]
    MalformedGroup(String),
    #[error("ball of radius {radius} exceeds the cap of {cap} vertices")]
    CapExceeded { radius: usize, cap: usize },
    #[error("radius too small: {0} escapes the ball")]
    RadiusTooSmall(String),
    #[error("interior-coboundary violated by edge {0}")]
    InteriorCoboundary(String),
    #[error("cuts live on different universes")]
    UniverseMismatch,
    #[error("atom cap exceeded: {atoms} atoms (cap {cap})")]
    AtomCap { atoms: usize, cap: usize },
    #[error("too many generators: {count} (cap {cap})")]
    GeneratorCap { count: usize, cap: usize },
    #[error("series truncation mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("truncation L = {given} is below the certified bound {required}")]
    Uncertified { given: usize, required: usize },
    #[error("undecided classification at truncation {0}")]
    Undecided(usize),
    #[error("no path crosses both edge sets within length {0}")]
    NoCrossingPath(usize),
    #[error("nested system precondition failed: {0}")]
    System(String),
    #[error("family is not closed under the action: {0}")]
    NotActionClosed(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("no balanced cut: {0}")]
    NoBalancedCut(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
