//! Orientation-state reachability.
//!
//! A state `(v, o)` records that some active undirected path from the source
//! ends at `v` with a last step of orientation `o`. Seeds are the one-step
//! paths out of the source; transitions follow the junction rules. The least
//! fixed point over the `2·|𝒱|` states decides d-connection in `O(|𝒱|·|E|)`,
//! independently of the relational computation.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::relation::{VertexId, VertexSet};
use crate::upath::{junction_open, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientState {
    pub vertex: VertexId,
    pub last: Orientation,
}

/// The reachable states from one source, split by last orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveReach {
    pub forward: VertexSet,
    pub backward: VertexSet,
}

impl ActiveReach {
    pub fn contains(&self, state: OrientState) -> bool {
        match state.last {
            Orientation::Forward => self.forward.contains(state.vertex),
            Orientation::Backward => self.backward.contains(state.vertex),
        }
    }

    /// States ordered by vertex index, forward before backward.
    pub fn states(&self) -> Vec<OrientState> {
        let mut out = Vec::new();
        for i in 0..self.forward.universe() {
            let v = VertexId(i);
            for last in Orientation::BOTH {
                let s = OrientState { vertex: v, last };
                if self.contains(s) {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn reaches(&self, v: VertexId) -> bool {
        self.forward.contains(v) || self.backward.contains(v)
    }
}

/// Least fixed point of the orientation-state transitions from `source`.
pub fn active_reach(graph: &Graph, source: VertexId, given: &VertexSet) -> ActiveReach {
    let n = graph.len();
    let e = graph.edges();
    let children: Vec<Vec<VertexId>> = graph.vertices().map(|v| e.successors(v).collect()).collect();
    let conv = e.converse();
    let parents: Vec<Vec<VertexId>> = graph.vertices().map(|v| conv.successors(v).collect()).collect();
    let star = graph.ancestral_closure(given);

    let mut reach = ActiveReach { forward: VertexSet::empty(n), backward: VertexSet::empty(n) };
    if source.0 >= n {
        return reach;
    }
    let mut queue = VecDeque::new();
    let mark = |reach: &mut ActiveReach, queue: &mut VecDeque<OrientState>, s: OrientState| {
        let fresh = match s.last {
            Orientation::Forward => reach.forward.insert(s.vertex),
            Orientation::Backward => reach.backward.insert(s.vertex),
        };
        if fresh {
            queue.push_back(s);
        }
    };

    for &u in &children[source.0] {
        mark(&mut reach, &mut queue, OrientState { vertex: u, last: Orientation::Forward });
    }
    for &u in &parents[source.0] {
        mark(&mut reach, &mut queue, OrientState { vertex: u, last: Orientation::Backward });
    }

    while let Some(s) = queue.pop_front() {
        let v = s.vertex;
        if junction_open(s.last, Orientation::Forward, v, given, &star) {
            for &u in &children[v.0] {
                mark(&mut reach, &mut queue, OrientState { vertex: u, last: Orientation::Forward });
            }
        }
        if junction_open(s.last, Orientation::Backward, v, given, &star) {
            for &u in &parents[v.0] {
                mark(&mut reach, &mut queue, OrientState { vertex: u, last: Orientation::Backward });
            }
        }
    }
    reach
}

/// `x = y`, or some active path from `x` reaches `y`.
pub fn d_connected_reach(graph: &Graph, x: VertexId, y: VertexId, given: &VertexSet) -> bool {
    x == y || active_reach(graph, x, given).reaches(y)
}
