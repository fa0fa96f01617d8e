//! D-separation on finite directed graphs that may contain cycles and loops.
//!
//! Three independent deciders are provided: a closed-form computation in the
//! algebra of binary relations ([`dsep`]), reachability over
//! `(vertex, last orientation)` states ([`reach`]), and bounded enumeration of
//! active undirected paths ([`upath`]). [`moral`] implements the ancestral
//! moral graph criterion and [`crosscheck`] compares all of them on random and
//! exhaustively generated graphs.

pub mod crosscheck;
pub mod dsep;
pub mod graph;
pub mod moral;
pub mod query;
pub mod reach;
pub mod relation;
pub mod upath;

pub use dsep::{d_separated, d_separated_sets, witness_active_path, ConditionalRelations, PlainVariant};
pub use graph::{Graph, GraphError};
pub use moral::{moral_relation, morally_blocked, MoralContext, MoralError};
pub use query::{run_query, Method, QueryReport};
pub use reach::{active_reach, d_connected_reach, ActiveReach, OrientState};
pub use relation::{Relation, RelationError, VertexId, VertexSet};
pub use upath::{
    completeness_bound, enumerate_undirected_paths, exists_active_path_bounded, EdgePath, Orientation, PathError,
    UndirectedPath,
};
