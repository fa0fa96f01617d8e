//! Moral relation, the ancestral moral subgraph, and moral separation.
//!
//! `M = (E ∪ E E⁻) ∪ (E ∪ E E⁻)⁻`: both orientations of every edge, plus a
//! "marriage" between any two vertices sharing a child. For pairwise disjoint
//! `B`, `C`, `W`, separation in the moral graph of the ancestral set
//! `S = E* (B ∪ C ∪ W)` coincides with d-separation of `B` and `C` given `W`.

use thiserror::Error;

use crate::graph::Graph;
use crate::relation::{Relation, RelationError, VertexId, VertexSet};
use crate::upath::{EdgePath, Orientation, PathError, UndirectedPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoralError {
    #[error("vertex sets must be pairwise disjoint ({0} overlap)")]
    NotDisjoint(&'static str),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// The moral relation of an edge relation.
pub fn moral_of(edges: &Relation) -> Relation {
    let married = edges.union(&edges.compose(&edges.converse()));
    married.union(&married.converse())
}

pub fn moral_relation(graph: &Graph) -> Relation {
    moral_of(graph.edges())
}

/// The ancestral subgraph of `B ∪ C ∪ W` and its moral relation, kept over the
/// full universe (pairs outside `S × S` are absent).
#[derive(Debug, Clone)]
pub struct MoralContext {
    sources: VertexSet,
    targets: VertexSet,
    given: VertexSet,
    ancestral: VertexSet,
    edges: Relation,
    moral: Relation,
}

impl MoralContext {
    pub fn new(graph: &Graph, sources: &VertexSet, targets: &VertexSet, given: &VertexSet) -> Result<Self, MoralError> {
        let n = graph.len();
        for s in [sources, targets, given] {
            if s.universe() != n {
                return Err(RelationError::UniverseMismatch { left: n, right: s.universe() }.into());
            }
        }
        if !sources.is_disjoint(targets) {
            return Err(MoralError::NotDisjoint("B and C"));
        }
        if !sources.is_disjoint(given) {
            return Err(MoralError::NotDisjoint("B and W"));
        }
        if !targets.is_disjoint(given) {
            return Err(MoralError::NotDisjoint("C and W"));
        }
        let ancestral = graph.ancestral_closure(&sources.union(targets).union(given));
        let edges = graph.edges().restrict_to(&ancestral);
        let moral = moral_of(&edges);
        Ok(MoralContext {
            sources: sources.clone(),
            targets: targets.clone(),
            given: given.clone(),
            ancestral,
            edges,
            moral,
        })
    }

    /// `S = E* (B ∪ C ∪ W)`.
    pub fn ancestral(&self) -> &VertexSet {
        &self.ancestral
    }

    /// `E_S = E ∩ (S × S)`.
    pub fn edges(&self) -> &Relation {
        &self.edges
    }

    /// `M_S`.
    pub fn moral(&self) -> &Relation {
        &self.moral
    }

    /// `Δ_B M_S (Δ_{¬W} M_S)* Δ_C = ∅`.
    pub fn blocked(&self) -> bool {
        let hop = &Relation::diagonal(&self.given.complement()) * &self.moral;
        let reach = &(&Relation::diagonal(&self.sources) * &self.moral) * &hop.reflexive_transitive_closure();
        (&reach * &Relation::diagonal(&self.targets)).is_empty()
    }
}

pub fn morally_blocked(
    graph: &Graph,
    sources: &VertexSet,
    targets: &VertexSet,
    given: &VertexSet,
) -> Result<bool, MoralError> {
    Ok(MoralContext::new(graph, sources, targets, given)?.blocked())
}

/// Turns an active undirected path into an edge path of the moral graph with
/// the same endpoints, dropping every collider vertex in favour of the
/// marriage between its two neighbours.
pub fn moral_path_from_active(graph: &Graph, path: &UndirectedPath, given: &VertexSet) -> Result<EdgePath, MoralError> {
    if !path.is_active(graph, given)? {
        return Err(PathError::NotActive.into());
    }
    let moral = moral_relation(graph);
    let verts = path.vertices();
    let orients = path.orientations();
    let mut kept: Vec<VertexId> = vec![verts[0]];
    for i in 1..verts.len() {
        let is_collider = i < orients.len()
            && orients[i - 1] == Orientation::Forward
            && orients[i] == Orientation::Backward;
        if !is_collider {
            kept.push(verts[i]);
        }
    }
    if path.is_empty() {
        return Ok(EdgePath::trivial(&moral, verts[0]).or_else(|_| EdgePath::through(&moral, &[verts[0], verts[0]]))?);
    }
    Ok(EdgePath::through(&moral, &kept)?)
}
