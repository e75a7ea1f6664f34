use thiserror::Error;

/// Errors raised by graph construction, parsing and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("vertex set must be non-empty")]
    EmptyVertexSet,

    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),

    #[error("{0}-{1} is an edge; the operation requires a non-adjacent pair")]
    AdjacentPair(usize, usize),

    #[error("the pair must consist of two distinct vertices (got {0} twice)")]
    SameVertex(usize),

    #[error("invalid clique identification: {0}")]
    InvalidIdentification(String),

    #[error("the given vertex set is not a component of G - {{{0}, {1}}}")]
    NotAComponent(usize, usize),

    #[error("graph is not 2-connected")]
    NotTwoConnected,

    #[error("graph is not 3-connected")]
    NotThreeConnected,

    #[error("pair {0},{1} is not linked")]
    NotLinked(usize, usize),

    #[error("kappa({0},{1}) is at most 2")]
    LowConnectivity(usize, usize),

    #[error("vertex set is not ({0},{1})-rigid")]
    NotPairRigid(usize, usize),

    #[error("graph has {0} edges; at least 3 are required")]
    TooFewEdges(usize),

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("realization is missing coordinates: {0}")]
    MissingCoordinates(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
}

impl Error {
    /// True for malformed input text, as opposed to a violated precondition.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::SelfLoop(_) | Error::DuplicateEdge(..)
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::InvalidVertex { .. } => "invalid_vertex",
            Error::SelfLoop(_) => "self_loop",
            Error::DuplicateEdge(..) => "duplicate_edge",
            Error::EmptyVertexSet => "empty_vertex_set",
            Error::NotAnEdge(..) => "not_an_edge",
            Error::AdjacentPair(..) => "adjacent_pair",
            Error::SameVertex(_) => "same_vertex",
            Error::InvalidIdentification(_) => "invalid_identification",
            Error::NotAComponent(..) => "not_a_component",
            Error::NotTwoConnected => "not_2_connected",
            Error::NotThreeConnected => "not_3_connected",
            Error::NotLinked(..) => "not_linked",
            Error::LowConnectivity(..) => "low_connectivity",
            Error::NotPairRigid(..) => "not_pair_rigid",
            Error::TooFewEdges(_) => "too_few_edges",
            Error::IsolatedVertex(_) => "isolated_vertex",
            Error::MissingCoordinates(_) => "missing_coordinates",
            Error::LimitExceeded(_) => "limit_exceeded",
            Error::UnknownVertex(_) => "unknown_vertex",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
