//! Generic rigidity of graphs in the plane: the rigidity matroid via the
//! pebble game, vertex connectivity and 3-blocks, global rigidity, and the
//! classification of vertex pairs as weakly globally linked or globally
//! loose. A numeric rank oracle and an equivalence sampler provide
//! independent cross-checks.

pub mod connectivity;
pub mod error;
pub mod graph;
pub mod io;
pub mod linkedness;
pub mod oracle;
pub mod sparsity;

pub use error::{Error, Result};
pub use graph::{edge, Edge, Graph, Projection, VertexSet};
pub use io::{parse_graph, serialize_graph, Format};
pub use linkedness::{
    classify_pair, is_globally_rigid2, weakly_linked_pairs, PairClassification, PairClassifier,
    Reason, Verdict,
};
pub use sparsity::{is_linked2, is_rigid2, rank2};
