//! Edge paths and undirected (orientation-carrying) paths.
//!
//! A path of length `n ≥ 1` is a chained sequence of steps `(tail, head)`.
//! An undirected path additionally carries, per step, whether the edge was
//! traversed forward (`tail → head` is in `E`) or backward (`head → tail` is
//! in `E`). The length-0 path at `v` exists only when `(v, v) ∉ E`; at a loop
//! vertex the shortest self-path is the loop itself.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::relation::{Relation, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("step {index} does not chain: previous head {expected}, got tail {found}")]
    Broken { index: usize, expected: VertexId, found: VertexId },
    #[error("step {index} ({tail} -> {head}) is not an edge for orientation {orient}")]
    MissingEdge { index: usize, tail: VertexId, head: VertexId, orient: Orientation },
    #[error("no length-0 path at {0}: the vertex carries a loop")]
    LoopedTrivial(VertexId),
    #[error("vertex {0} outside the graph")]
    OutOfRange(VertexId),
    #[error("cannot concatenate: first path ends at {left}, second starts at {right}")]
    EndpointMismatch { left: VertexId, right: VertexId },
    #[error("orientation word has {orients} entries for {steps} steps")]
    LengthMismatch { steps: usize, orients: usize },
    #[error("path is not active")]
    NotActive,
    #[error("unknown vertex {0:?} in serialized path")]
    UnknownVertex(String),
}

/// Direction in which an undirected path traverses an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    /// `+1`: the step `(tail, head)` is an edge.
    Forward,
    /// `−1`: the step `(tail, head)` is the converse of an edge.
    Backward,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Forward => 1,
            Orientation::Backward => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Orientation::Forward),
            -1 => Some(Orientation::Backward),
            _ => None,
        }
    }

    fn symbol(self) -> char {
        match self {
            Orientation::Forward => '+',
            Orientation::Backward => '-',
        }
    }

    pub const BOTH: [Orientation; 2] = [Orientation::Forward, Orientation::Backward];
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Step {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Step { tail, head }
    }
}

/// Whether a junction between two consecutive steps lets a path through.
///
/// Chains and forks pass at vertices outside `W`; a collider `(+1, −1)` passes
/// at vertices of `W*`.
#[inline]
pub fn junction_open(
    incoming: Orientation,
    outgoing: Orientation,
    at: VertexId,
    given: &VertexSet,
    given_star: &VertexSet,
) -> bool {
    match (incoming, outgoing) {
        (Orientation::Forward, Orientation::Backward) => given_star.contains(at),
        _ => !given.contains(at),
    }
}

/// A directed edge path in a relation (the graph's `E`, or e.g. a moral relation).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    universe: usize,
    start: VertexId,
    steps: Vec<Step>,
}

impl EdgePath {
    /// The length-0 path at `v`; requires `(v, v) ∉ relation`.
    pub fn trivial(relation: &Relation, v: VertexId) -> Result<Self, PathError> {
        if v.0 >= relation.universe() {
            return Err(PathError::OutOfRange(v));
        }
        if relation.contains(v, v) {
            return Err(PathError::LoopedTrivial(v));
        }
        Ok(EdgePath { universe: relation.universe(), start: v, steps: Vec::new() })
    }

    /// A path visiting `vertices` in order; every consecutive pair must be in `relation`.
    pub fn through(relation: &Relation, vertices: &[VertexId]) -> Result<Self, PathError> {
        let (&first, rest) = vertices.split_first().ok_or(PathError::OutOfRange(VertexId(usize::MAX)))?;
        if rest.is_empty() {
            return Self::trivial(relation, first);
        }
        let mut steps = Vec::with_capacity(rest.len());
        let mut prev = first;
        for (i, &v) in rest.iter().enumerate() {
            if v.0 >= relation.universe() || prev.0 >= relation.universe() {
                return Err(PathError::OutOfRange(v));
            }
            if !relation.contains(prev, v) {
                return Err(PathError::MissingEdge {
                    index: i,
                    tail: prev,
                    head: v,
                    orient: Orientation::Forward,
                });
            }
            steps.push(Step::new(prev, v));
            prev = v;
        }
        Ok(EdgePath { universe: relation.universe(), start: first, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        endpoints_of(self.start, &self.steps)
    }

    /// `{v₂, …, vₙ}`; empty for length ≤ 1.
    pub fn intermediates(&self) -> VertexSet {
        intermediates_of(self.universe, &self.steps)
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        vertices_of(self.start, &self.steps)
    }

    /// Checks that every step is in `relation`.
    pub fn is_path_in(&self, relation: &Relation) -> bool {
        if self.steps.is_empty() {
            return !relation.contains(self.start, self.start);
        }
        self.steps.iter().all(|s| relation.contains(s.tail, s.head))
    }
}

/// An undirected path `(ϱ, o)`: steps plus an orientation word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UndirectedPath {
    universe: usize,
    start: VertexId,
    steps: Vec<Step>,
    orients: Vec<Orientation>,
}

impl UndirectedPath {
    /// The length-0 path at `v`; requires `(v, v) ∉ E`.
    pub fn trivial(graph: &Graph, v: VertexId) -> Result<Self, PathError> {
        if v.0 >= graph.len() {
            return Err(PathError::OutOfRange(v));
        }
        if graph.has_edge(v, v) {
            return Err(PathError::LoopedTrivial(v));
        }
        Ok(UndirectedPath { universe: graph.len(), start: v, steps: Vec::new(), orients: Vec::new() })
    }

    /// A single step `(tail, head)` with the given orientation.
    pub fn single(graph: &Graph, tail: VertexId, head: VertexId, orient: Orientation) -> Result<Self, PathError> {
        Self::from_steps(graph, vec![(Step::new(tail, head), orient)])
    }

    /// Validates chaining and edge membership. An empty list is rejected; use
    /// [`UndirectedPath::trivial`] for length 0.
    pub fn from_steps(graph: &Graph, steps: Vec<(Step, Orientation)>) -> Result<Self, PathError> {
        let Some(&(first, _)) = steps.first() else {
            return Err(PathError::LengthMismatch { steps: 0, orients: 0 });
        };
        let path = UndirectedPath {
            universe: graph.len(),
            start: first.tail,
            orients: steps.iter().map(|(_, o)| *o).collect(),
            steps: steps.into_iter().map(|(s, _)| s).collect(),
        };
        path.validate(graph)?;
        Ok(path)
    }

    /// Walks `vertices` with the given orientations, e.g. `[a, c, b]` with `[+, −]`.
    pub fn walk(graph: &Graph, vertices: &[VertexId], orients: &[Orientation]) -> Result<Self, PathError> {
        if vertices.len() != orients.len() + 1 {
            return Err(PathError::LengthMismatch {
                steps: vertices.len().saturating_sub(1),
                orients: orients.len(),
            });
        }
        if orients.is_empty() {
            return Self::trivial(graph, vertices[0]);
        }
        let steps = vertices
            .windows(2)
            .zip(orients)
            .map(|(w, &o)| (Step::new(w[0], w[1]), o))
            .collect();
        Self::from_steps(graph, steps)
    }

    /// Checks the path against `graph`: chaining, orientation-consistent edge
    /// membership, and the loop rule for length 0.
    pub fn validate(&self, graph: &Graph) -> Result<(), PathError> {
        let n = graph.len();
        if self.start.0 >= n {
            return Err(PathError::OutOfRange(self.start));
        }
        if self.steps.len() != self.orients.len() {
            return Err(PathError::LengthMismatch { steps: self.steps.len(), orients: self.orients.len() });
        }
        if self.steps.is_empty() {
            return if graph.has_edge(self.start, self.start) {
                Err(PathError::LoopedTrivial(self.start))
            } else {
                Ok(())
            };
        }
        let mut prev = self.start;
        for (i, (s, &o)) in self.steps.iter().zip(&self.orients).enumerate() {
            if s.tail.0 >= n || s.head.0 >= n {
                return Err(PathError::OutOfRange(if s.tail.0 >= n { s.tail } else { s.head }));
            }
            if s.tail != prev {
                return Err(PathError::Broken { index: i, expected: prev, found: s.tail });
            }
            let present = match o {
                Orientation::Forward => graph.has_edge(s.tail, s.head),
                Orientation::Backward => graph.has_edge(s.head, s.tail),
            };
            if !present {
                return Err(PathError::MissingEdge { index: i, tail: s.tail, head: s.head, orient: o });
            }
            prev = s.head;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orients
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        endpoints_of(self.start, &self.steps)
    }

    pub fn intermediates(&self) -> VertexSet {
        intermediates_of(self.universe, &self.steps)
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        vertices_of(self.start, &self.steps)
    }

    /// Drops the orientation word, giving an edge path of the undirected extension.
    pub fn project(&self) -> EdgePath {
        EdgePath { universe: self.universe, start: self.start, steps: self.steps.clone() }
    }

    /// `p ⋉ q`. Length-0 operands are identities at their vertex.
    pub fn concatenate(&self, other: &UndirectedPath) -> Result<UndirectedPath, PathError> {
        let (_, head) = self.endpoints();
        let (tail, _) = other.endpoints();
        if head != tail {
            return Err(PathError::EndpointMismatch { left: head, right: tail });
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        let mut orients = self.orients.clone();
        orients.extend_from_slice(&other.orients);
        Ok(UndirectedPath { universe: self.universe.max(other.universe), start: self.start, steps, orients })
    }

    /// Splits into the first `at` steps and the remainder.
    ///
    /// Panics unless `1 ≤ at < len`.
    pub fn split_at(&self, at: usize) -> (UndirectedPath, UndirectedPath) {
        assert!(at >= 1 && at < self.len(), "split point {at} outside 1..{}", self.len());
        let left = UndirectedPath {
            universe: self.universe,
            start: self.start,
            steps: self.steps[..at].to_vec(),
            orients: self.orients[..at].to_vec(),
        };
        let right = UndirectedPath {
            universe: self.universe,
            start: self.steps[at].tail,
            steps: self.steps[at..].to_vec(),
            orients: self.orients[at..].to_vec(),
        };
        (left, right)
    }

    /// The sub-path made of steps `from..to`.
    pub fn segment(&self, from: usize, to: usize) -> UndirectedPath {
        assert!(from < to && to <= self.len());
        UndirectedPath {
            universe: self.universe,
            start: self.steps[from].tail,
            steps: self.steps[from..to].to_vec(),
            orients: self.orients[from..to].to_vec(),
        }
    }

    /// Activity with respect to `given`, for a precomputed `W*`.
    ///
    /// Assumes the path is valid for the graph `given_star` was computed on.
    pub fn is_active_with(&self, given: &VertexSet, given_star: &VertexSet) -> bool {
        self.steps.windows(2).zip(self.orients.windows(2)).all(|(s, o)| {
            junction_open(o[0], o[1], s[0].head, given, given_star)
        })
    }

    /// Validates the path against `graph`, then applies the four junction cases.
    pub fn is_active(&self, graph: &Graph, given: &VertexSet) -> Result<bool, PathError> {
        self.validate(graph)?;
        let star = graph.ancestral_closure(given);
        Ok(self.is_active_with(given, &star))
    }

    /// `a -[+]-> c -[-]-> b`; the length-0 path prints as its vertex.
    pub fn display<'a>(&'a self, graph: &'a Graph) -> impl fmt::Display + 'a {
        DisplayPath { path: self, graph }
    }

    pub fn to_records(&self, graph: &Graph) -> Vec<StepRecord> {
        if self.steps.is_empty() {
            let v = graph.name(self.start).to_string();
            return vec![StepRecord { tail: v.clone(), head: v, orient: 1 }];
        }
        self.steps
            .iter()
            .zip(&self.orients)
            .map(|(s, o)| StepRecord {
                tail: graph.name(s.tail).to_string(),
                head: graph.name(s.head).to_string(),
                orient: o.sign(),
            })
            .collect()
    }

    /// Inverse of [`UndirectedPath::to_records`]. A single `(v, v, +1)` record
    /// denotes the length-0 path when `v` has no loop, and the loop otherwise.
    pub fn from_records(graph: &Graph, records: &[StepRecord]) -> Result<Self, PathError> {
        let lookup = |name: &str| graph.vertex(name).map_err(|_| PathError::UnknownVertex(name.to_string()));
        let mut steps = Vec::with_capacity(records.len());
        for r in records {
            let orient = Orientation::from_sign(r.orient).ok_or(PathError::LengthMismatch {
                steps: records.len(),
                orients: 0,
            })?;
            steps.push((Step::new(lookup(&r.tail)?, lookup(&r.head)?), orient));
        }
        if let [(s, Orientation::Forward)] = steps.as_slice() {
            if s.tail == s.head && !graph.has_edge(s.tail, s.tail) {
                return Self::trivial(graph, s.tail);
            }
        }
        Self::from_steps(graph, steps)
    }
}

/// JSON form of one step: `{"tail": "a", "head": "c", "orient": 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub tail: String,
    pub head: String,
    pub orient: i8,
}

struct DisplayPath<'a> {
    path: &'a UndirectedPath,
    graph: &'a Graph,
}

impl fmt::Display for DisplayPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.graph.name(self.path.start))?;
        for (s, o) in self.path.steps.iter().zip(&self.path.orients) {
            write!(f, " -[{}]-> {}", o.symbol(), self.graph.name(s.head))?;
        }
        Ok(())
    }
}

fn endpoints_of(start: VertexId, steps: &[Step]) -> (VertexId, VertexId) {
    match steps.last() {
        Some(last) => (start, last.head),
        None => (start, start),
    }
}

fn intermediates_of(universe: usize, steps: &[Step]) -> VertexSet {
    let mut set = VertexSet::empty(universe);
    if steps.len() >= 2 {
        for s in &steps[..steps.len() - 1] {
            set.insert(s.head);
        }
    }
    set
}

fn vertices_of(start: VertexId, steps: &[Step]) -> Vec<VertexId> {
    std::iter::once(start).chain(steps.iter().map(|s| s.head)).collect()
}

/// `{(tail, head)}` over the endpoints of `paths`.
pub fn endpoint_relation<'a, I>(universe: usize, paths: I) -> Relation
where
    I: IntoIterator<Item = &'a UndirectedPath>,
{
    let mut r = Relation::empty(universe);
    for p in paths {
        let (a, b) = p.endpoints();
        r.insert(a, b);
    }
    r
}

/// Membership in the deployment `D_U(R)`: the path's endpoints are related by `R`.
pub fn in_deployment(path: &UndirectedPath, relation: &Relation) -> bool {
    let (a, b) = path.endpoints();
    relation.contains(a, b)
}

/// Undirected neighbours of `v` in enumeration order: by vertex index, forward
/// before backward.
fn moves(graph: &Graph, v: VertexId) -> Vec<(VertexId, Orientation)> {
    let e = graph.edges();
    let mut out = Vec::new();
    for u in graph.vertices() {
        for o in Orientation::BOTH {
            let present = match o {
                Orientation::Forward => e.contains(v, u),
                Orientation::Backward => e.contains(u, v),
            };
            if present {
                out.push((u, o));
            }
        }
    }
    out
}

/// Enumerates every undirected path from `x` to `y` of length at most
/// `max_len`, shortest first, lexicographic by `(vertex index, +/−)` within a
/// length. Includes the length-0 path when `x = y` has no loop.
pub fn enumerate_undirected_paths(
    graph: &Graph,
    x: VertexId,
    y: VertexId,
    max_len: usize,
) -> UndirectedPaths<'_> {
    let in_range = x.0 < graph.len() && y.0 < graph.len();
    UndirectedPaths {
        graph,
        x,
        y,
        max_len,
        adjacency: graph.vertices().map(|v| moves(graph, v)).collect(),
        dist: if in_range { undirected_distances_to(graph, y) } else { Vec::new() },
        length: if in_range { 0 } else { max_len + 1 },
        frames: Vec::new(),
        fresh: true,
    }
}

fn undirected_distances_to(graph: &Graph, y: VertexId) -> Vec<Option<usize>> {
    let e = graph.edges();
    let mut dist = vec![None; graph.len()];
    dist[y.0] = Some(0);
    let mut queue = std::collections::VecDeque::from([y]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.0].unwrap_or(0);
        for u in graph.vertices() {
            if (e.contains(u, v) || e.contains(v, u)) && dist[u.0].is_none() {
                dist[u.0] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

struct Frame {
    vertex: VertexId,
    orient: Orientation,
    next: usize,
}

/// Iterator returned by [`enumerate_undirected_paths`].
pub struct UndirectedPaths<'g> {
    graph: &'g Graph,
    x: VertexId,
    y: VertexId,
    max_len: usize,
    adjacency: Vec<Vec<(VertexId, Orientation)>>,
    dist: Vec<Option<usize>>,
    length: usize,
    // frames[0] sits at x; frames[i] for i ≥ 1 records the i-th step
    frames: Vec<Frame>,
    fresh: bool,
}

impl UndirectedPaths<'_> {
    fn current_path(&self) -> UndirectedPath {
        let mut steps = Vec::with_capacity(self.length);
        let mut orients = Vec::with_capacity(self.length);
        for w in self.frames.windows(2) {
            steps.push(Step::new(w[0].vertex, w[1].vertex));
            orients.push(w[1].orient);
        }
        UndirectedPath { universe: self.graph.len(), start: self.x, steps, orients }
    }
}

impl Iterator for UndirectedPaths<'_> {
    type Item = UndirectedPath;

    fn next(&mut self) -> Option<UndirectedPath> {
        loop {
            if self.length > self.max_len {
                return None;
            }
            if self.fresh {
                self.fresh = false;
                if self.length == 0 {
                    self.length = 1;
                    self.fresh = true;
                    if self.x == self.y && !self.graph.has_edge(self.x, self.x) {
                        return Some(UndirectedPath {
                            universe: self.graph.len(),
                            start: self.x,
                            steps: Vec::new(),
                            orients: Vec::new(),
                        });
                    }
                    continue;
                }
                self.frames = vec![Frame { vertex: self.x, orient: Orientation::Forward, next: 0 }];
            }
            while !self.frames.is_empty() {
                let depth = self.frames.len() - 1;
                if depth == self.length {
                    self.frames.pop();
                    continue;
                }
                let budget = self.length - depth - 1;
                let from = self.frames[depth].vertex;
                let start = self.frames[depth].next;
                let hit = self.adjacency[from.0]
                    .iter()
                    .enumerate()
                    .skip(start)
                    .find(|(_, (u, _))| matches!(self.dist[u.0], Some(d) if d <= budget))
                    .map(|(k, &(u, o))| (k, u, o));
                match hit {
                    Some((k, u, o)) => {
                        if let Some(top) = self.frames.last_mut() {
                            top.next = k + 1;
                        }
                        self.frames.push(Frame { vertex: u, orient: o, next: 0 });
                        if self.frames.len() - 1 == self.length {
                            return Some(self.current_path());
                        }
                    }
                    None => {
                        self.frames.pop();
                    }
                }
            }
            self.length += 1;
            self.fresh = true;
        }
    }
}

/// Whether some undirected path from `x` to `y` of length at most `max_len`
/// is active given `W`.
///
/// Depth-first over the same path tree as [`enumerate_undirected_paths`]. A
/// prefix that is already blocked is not extended (every extension of a
/// blocked path is blocked), and a `(vertex, last orientation)` frontier that
/// failed with a remaining budget of `r` is not re-explored with a budget of
/// `r` or less. Both cuts are exact because activity is a conjunction of
/// conditions on consecutive step pairs.
///
/// The answer is sound for every bound and complete once
/// `max_len ≥ 2·|𝒱| + 2` (see [`completeness_bound`]).
pub fn exists_active_path_bounded(
    graph: &Graph,
    x: VertexId,
    y: VertexId,
    given: &VertexSet,
    max_len: usize,
) -> bool {
    let n = graph.len();
    if x.0 >= n || y.0 >= n {
        return false;
    }
    if x == y {
        // the length-0 path, or the loop when there is one
        return max_len >= 1 || !graph.has_edge(x, x);
    }
    if max_len == 0 {
        return false;
    }
    let star = graph.ancestral_closure(given);
    let adjacency: Vec<_> = graph.vertices().map(|v| moves(graph, v)).collect();
    // failed[v][o] = largest remaining budget already shown not to reach y
    let mut failed = vec![[None::<usize>; 2]; n];
    let search = BoundedSearch { adjacency: &adjacency, y, given, star: &star };
    adjacency[x.0].iter().any(|&(u, o)| search.reach(u, o, max_len - 1, &mut failed))
}

struct BoundedSearch<'a> {
    adjacency: &'a [Vec<(VertexId, Orientation)>],
    y: VertexId,
    given: &'a VertexSet,
    star: &'a VertexSet,
}

impl BoundedSearch<'_> {
    fn reach(&self, at: VertexId, last: Orientation, budget: usize, failed: &mut [[Option<usize>; 2]]) -> bool {
        if at == self.y {
            return true;
        }
        let slot = last as usize;
        if matches!(failed[at.0][slot], Some(b) if b >= budget) {
            return false;
        }
        if budget > 0 {
            for &(u, o) in &self.adjacency[at.0] {
                if junction_open(last, o, at, self.given, self.star) && self.reach(u, o, budget - 1, failed) {
                    return true;
                }
            }
        }
        failed[at.0][slot] = Some(budget);
        false
    }
}

/// Path length that suffices for [`exists_active_path_bounded`] to be complete
/// on a graph with `vertices` vertices.
pub fn completeness_bound(vertices: usize) -> usize {
    2 * vertices + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use Orientation::{Backward as B, Forward as F};

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    fn chain3() -> Graph {
        Graph::from_edges(&[("a", "b"), ("b", "c")])
    }

    fn collider() -> Graph {
        Graph::from_edges(&[("a", "c"), ("b", "c")])
    }

    fn given(g: &Graph, names: &[&str]) -> VertexSet {
        g.vertex_set(names.iter().copied()).unwrap()
    }

    fn named(g: &Graph, names: &[&str], orients: &[Orientation]) -> UndirectedPath {
        let vs: Vec<_> = names.iter().map(|n| g.vertex(n).unwrap()).collect();
        UndirectedPath::walk(g, &vs, orients).unwrap()
    }

    #[test]
    fn endpoints_examples() {
        let g = chain3();
        assert_eq!(named(&g, &["a", "b", "c"], &[F, F]).endpoints(), (v(0), v(2)));
        assert_eq!(UndirectedPath::trivial(&g, v(1)).unwrap().endpoints(), (v(1), v(1)));
        let g = collider();
        let p = named(&g, &["a", "c", "b"], &[F, B]);
        assert_eq!(p.endpoints(), (g.vertex("a").unwrap(), g.vertex("b").unwrap()));
        assert_eq!(p.project().endpoints(), p.endpoints());
    }

    #[test]
    fn intermediates_examples() {
        let g = Graph::from_edges(&[("a", "b"), ("b", "c"), ("c", "d")]);
        assert!(named(&g, &["a", "b"], &[F]).intermediates().is_empty());
        assert_eq!(named(&g, &["a", "b", "c"], &[F, F]).intermediates(), given(&g, &["b"]));
        assert_eq!(
            named(&g, &["a", "b", "c", "d"], &[F, F, F]).intermediates(),
            given(&g, &["b", "c"])
        );
    }

    #[test]
    fn validation_rejects_bad_paths() {
        let g = chain3();
        assert!(matches!(
            UndirectedPath::walk(&g, &[v(0), v(1)], &[B]),
            Err(PathError::MissingEdge { index: 0, .. })
        ));
        assert!(matches!(
            UndirectedPath::from_steps(&g, vec![(Step::new(v(0), v(1)), F), (Step::new(v(2), v(1)), B)]),
            Err(PathError::Broken { index: 1, .. })
        ));
        let looped = Graph::from_edges(&[("a", "a")]);
        assert_eq!(UndirectedPath::trivial(&looped, v(0)), Err(PathError::LoopedTrivial(v(0))));
        assert!(UndirectedPath::single(&looped, v(0), v(0), F).is_ok());
        assert!(UndirectedPath::single(&looped, v(0), v(0), B).is_ok());
        // a path valid in one graph is checked again in is_active
        let p = named(&g, &["b", "c"], &[F]);
        assert!(p.is_active(&collider(), &VertexSet::empty(3)).is_err());
    }

    #[test]
    fn concatenation_examples() {
        let g = chain3();
        let ab = named(&g, &["a", "b"], &[F]);
        let bc = named(&g, &["b", "c"], &[F]);
        assert_eq!(ab.concatenate(&bc).unwrap(), named(&g, &["a", "b", "c"], &[F, F]));
        let at_a = UndirectedPath::trivial(&g, v(0)).unwrap();
        assert_eq!(at_a.concatenate(&ab).unwrap(), ab);
        let at_b = UndirectedPath::trivial(&g, v(1)).unwrap();
        assert_eq!(ab.concatenate(&at_b).unwrap(), ab);
        assert_eq!(
            bc.concatenate(&ab),
            Err(PathError::EndpointMismatch { left: v(2), right: v(0) })
        );
    }

    #[test]
    fn activity_examples() {
        let g = chain3();
        let p = named(&g, &["a", "b", "c"], &[F, F]);
        assert!(p.is_active(&g, &VertexSet::empty(3)).unwrap());
        assert!(!p.is_active(&g, &given(&g, &["b"])).unwrap());

        let g = collider();
        let p = named(&g, &["a", "c", "b"], &[F, B]);
        assert!(p.is_active(&g, &given(&g, &["c"])).unwrap());
        assert!(!p.is_active(&g, &VertexSet::empty(3)).unwrap());

        let g = Graph::from_edges(&[("a", "c"), ("b", "c"), ("c", "d")]);
        let p = named(&g, &["a", "c", "b"], &[F, B]);
        assert!(p.is_active(&g, &given(&g, &["d"])).unwrap());

        // lengths 0 and 1 are active whatever W is
        let full = VertexSet::full(4);
        assert!(UndirectedPath::trivial(&g, v(0)).unwrap().is_active(&g, &full).unwrap());
        assert!(named(&g, &["a", "c"], &[F]).is_active(&g, &full).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let g = chain3();
        let paths: Vec<_> = enumerate_undirected_paths(&g, v(0), v(2), 2).collect();
        assert_eq!(paths, vec![named(&g, &["a", "b", "c"], &[F, F])]);

        let g = Graph::from_edges(&[("a", "b"), ("b", "a")]);
        let paths: Vec<_> = enumerate_undirected_paths(&g, v(0), v(1), 1).collect();
        assert_eq!(
            paths,
            vec![named(&g, &["a", "b"], &[F]), named(&g, &["a", "b"], &[B])]
        );
        // projection is not injective
        assert_eq!(paths[0].project(), paths[1].project());

        assert_eq!(enumerate_undirected_paths(&g, v(0), v(1), 0).count(), 0);
        let at_a: Vec<_> = enumerate_undirected_paths(&chain3(), v(0), v(0), 0).collect();
        assert_eq!(at_a, vec![UndirectedPath::trivial(&chain3(), v(0)).unwrap()]);
        let looped = Graph::from_edges(&[("a", "a")]);
        let at_loop: Vec<_> = enumerate_undirected_paths(&looped, v(0), v(0), 1).collect();
        assert_eq!(at_loop.len(), 2);
        assert!(at_loop.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn enumeration_is_length_lexicographic() {
        let g = Graph::from_edges(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "c")]);
        let paths: Vec<_> = enumerate_undirected_paths(&g, v(0), v(2), 4).collect();
        for w in paths.windows(2) {
            let key = |p: &UndirectedPath| {
                let seq: Vec<_> = p.steps().iter().zip(p.orientations()).map(|(s, o)| (s.head, *o)).collect();
                (p.len(), seq)
            };
            assert!(key(&w[0]) < key(&w[1]), "{:?} !< {:?}", w[0], w[1]);
        }
        for p in &paths {
            p.validate(&g).unwrap();
            assert_eq!(p.endpoints(), (v(0), v(2)));
        }
    }

    #[test]
    fn bounded_search_examples() {
        let g = chain3();
        assert!(!exists_active_path_bounded(&g, v(0), v(2), &given(&g, &["b"]), 8));
        let g = collider();
        let (a, b) = (g.vertex("a").unwrap(), g.vertex("b").unwrap());
        assert!(exists_active_path_bounded(&g, a, b, &given(&g, &["c"]), 8));
        assert!(!exists_active_path_bounded(&g, a, b, &VertexSet::empty(3), 8));
        for w in [VertexSet::empty(3), VertexSet::full(3)] {
            assert!(exists_active_path_bounded(&g, a, a, &w, 0));
        }
        let looped = Graph::from_edges(&[("a", "a")]);
        assert!(!exists_active_path_bounded(&looped, v(0), v(0), &VertexSet::empty(1), 0));
        assert!(exists_active_path_bounded(&looped, v(0), v(0), &VertexSet::empty(1), 1));
    }

    #[test]
    fn endpoint_relation_examples() {
        assert!(endpoint_relation(3, std::iter::empty()).is_empty());
        let g = chain3();
        let to_c: Vec<_> = enumerate_undirected_paths(&g, v(0), v(2), 6).collect();
        assert!(endpoint_relation(3, &to_c).is_subset(&Relation::from_pairs(3, [(0, 2)])));

        let all: Vec<_> = g
            .vertices()
            .flat_map(|x| g.vertices().map(move |y| (x, y)))
            .flat_map(|(x, y)| enumerate_undirected_paths(&g, x, y, 2))
            .collect();
        let expected = Relation::from_pairs(
            3,
            [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)],
        );
        assert_eq!(endpoint_relation(3, &all), expected);
        assert!(all.iter().all(|p| in_deployment(p, &endpoint_relation(3, [p]))));
    }

    #[test]
    fn text_and_json_forms() {
        let g = collider();
        let p = named(&g, &["a", "c", "b"], &[F, B]);
        assert_eq!(p.display(&g).to_string(), "a -[+]-> c -[-]-> b");
        let records = p.to_records(&g);
        let json = serde_json::to_string(&records).unwrap();
        assert_eq!(
            json,
            r#"[{"tail":"a","head":"c","orient":1},{"tail":"c","head":"b","orient":-1}]"#
        );
        let back: Vec<StepRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(UndirectedPath::from_records(&g, &back).unwrap(), p);

        let t = UndirectedPath::trivial(&g, v(0)).unwrap();
        assert_eq!(t.display(&g).to_string(), "a");
        assert_eq!(UndirectedPath::from_records(&g, &t.to_records(&g)).unwrap(), t);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (1usize..=4, any::<u64>()).prop_map(|(n, mask)| {
                Graph::from_relation(Relation::from_mask(n, mask & ((1u64 << (n * n)) - 1)))
            })
        }

        /// A random walk in the undirected extension, guided by `choices`.
        fn random_walk(g: &Graph, start: usize, choices: &[usize]) -> Option<UndirectedPath> {
            let mut at = VertexId(start % g.len());
            let mut steps = Vec::new();
            for &c in choices {
                let opts = moves(g, at);
                if opts.is_empty() {
                    break;
                }
                let (u, o) = opts[c % opts.len()];
                steps.push((Step::new(at, u), o));
                at = u;
            }
            if steps.is_empty() {
                None
            } else {
                Some(UndirectedPath::from_steps(g, steps).unwrap())
            }
        }

        fn arb_case() -> impl Strategy<Value = (Graph, UndirectedPath, VertexSet)> {
            (arb_graph(), any::<usize>(), proptest::collection::vec(any::<usize>(), 1..9), any::<u64>())
                .prop_filter_map("isolated start", |(g, s, choices, wmask)| {
                    let p = random_walk(&g, s, &choices)?;
                    let w = VertexSet::from_mask(g.len(), wmask);
                    Some((g, p, w))
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(300))]

            #[test]
            fn reconcatenation((g, p, w) in arb_case()) {
                prop_assume!(p.len() >= 2);
                let active = p.is_active(&g, &w).unwrap();
                for at in 1..p.len() {
                    let (left, right) = p.split_at(at);
                    prop_assert_eq!(left.concatenate(&right).unwrap(), p.clone());
                    let junction = p.segment(at - 1, at + 1);
                    let split_active = left.is_active(&g, &w).unwrap()
                        && right.is_active(&g, &w).unwrap()
                        && junction.is_active(&g, &w).unwrap();
                    prop_assert_eq!(split_active, active);
                }
            }

            #[test]
            fn intermediates_of_concatenation((_g, p, _w) in arb_case()) {
                prop_assume!(p.len() >= 2);
                for at in 1..p.len() {
                    let (left, right) = p.split_at(at);
                    let mut expected = left.intermediates().union(&right.intermediates());
                    expected.insert(left.endpoints().1);
                    prop_assert_eq!(p.intermediates(), expected);
                }
            }

            #[test]
            fn concatenation_is_associative((g, p, _w) in arb_case()) {
                prop_assume!(p.len() >= 3);
                let (a, rest) = p.split_at(1);
                let (b, c) = rest.split_at(1);
                let left = a.concatenate(&b).unwrap().concatenate(&c).unwrap();
                let right = a.concatenate(&b.concatenate(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                let _ = g;
            }

            #[test]
            fn projection_is_a_path_of_the_extension((g, p, _w) in arb_case()) {
                prop_assert!(p.project().is_path_in(g.undirected_extension().edges()));
            }

            #[test]
            fn active_length_two_paths_classify((g, p, w) in arb_case()) {
                prop_assume!(p.len() >= 2);
                let q = p.segment(0, 2);
                prop_assume!(q.is_active(&g, &w).unwrap());
                let e = g.edges();
                let ec = e.converse();
                let not_w = Relation::diagonal(&w.complement());
                let star = Relation::diagonal(&g.ancestral_closure(&w));
                let (x, y) = q.endpoints();
                let ends_forward = q.orientations()[1] == Orientation::Forward;
                let allowed = if ends_forward {
                    &(&(e * &not_w) * e) | &(&(&ec * &not_w) * e)
                } else {
                    &(&(e * &star) * &ec) | &(&(&ec * &not_w) * &ec)
                };
                prop_assert!(allowed.contains(x, y));
            }

            #[test]
            fn bounded_search_matches_enumeration((g, _p, w) in arb_case(), len in 0usize..6) {
                let star = g.ancestral_closure(&w);
                for x in g.vertices() {
                    for y in g.vertices() {
                        let by_enum = enumerate_undirected_paths(&g, x, y, len)
                            .any(|p| p.is_active_with(&w, &star));
                        prop_assert_eq!(exists_active_path_bounded(&g, x, y, &w, len), by_enum);
                    }
                }
            }

            #[test]
            fn bounded_search_is_monotone_in_length((g, _p, w) in arb_case()) {
                for x in g.vertices() {
                    for y in g.vertices() {
                        let mut seen = false;
                        for len in 0..=completeness_bound(g.len()) {
                            let now = exists_active_path_bounded(&g, x, y, &w, len);
                            prop_assert!(now || !seen);
                            seen = now;
                        }
                    }
                }
            }

            #[test]
            fn enumeration_yields_exactly_the_valid_paths(g in arb_graph(), len in 0usize..4) {
                // compare against an unpruned generate-and-test over all vertex/orientation words
                let n = g.len();
                for x in g.vertices() {
                    for y in g.vertices() {
                        let got: Vec<_> = enumerate_undirected_paths(&g, x, y, len).collect();
                        let mut expected = Vec::new();
                        if x == y {
                            if let Ok(t) = UndirectedPath::trivial(&g, x) {
                                expected.push(t);
                            }
                        }
                        for l in 1..=len {
                            let words = (2 * n).pow(l as u32);
                            for code in 0..words {
                                let mut c = code;
                                let mut verts = vec![x];
                                let mut ors = Vec::new();
                                for _ in 0..l {
                                    let k = c % (2 * n);
                                    c /= 2 * n;
                                    verts.push(VertexId(k / 2));
                                    ors.push(if k % 2 == 0 { F } else { B });
                                }
                                if verts[l] != y {
                                    continue;
                                }
                                if let Ok(p) = UndirectedPath::walk(&g, &verts, &ors) {
                                    expected.push(p);
                                }
                            }
                        }
                        let mut sorted = got.clone();
                        sorted.sort_by_key(|p| (p.len(), p.steps().iter().zip(p.orientations()).map(|(s, o)| (s.head, *o)).collect::<Vec<_>>()));
                        prop_assert_eq!(&sorted, &got);
                        let as_set = |v: &Vec<UndirectedPath>| v.iter().cloned().collect::<std::collections::HashSet<_>>();
                        prop_assert_eq!(as_set(&got), as_set(&expected));
                        prop_assert_eq!(got.len(), expected.len());
                    }
                }
            }
        }
    }
}
