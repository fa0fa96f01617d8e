//! Directed graphs permitting loops, and the edge-list text format.
//!
//! ```text
//! # comment
//! node z
//! a -> b
//! b -> c   # trailing comment
//! ```
//!
//! Vertices are numbered in order of first appearance. Serialization writes
//! `node` lines for isolated vertices first, then edges in row-major order.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::relation::{Relation, RelationError, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: empty vertex name")]
    EmptyName { line: usize },
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// Result of [`Graph::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// `E ∩ E⁻ = ∅`.
    pub directed: bool,
    /// `E = E⁻`.
    pub undirected: bool,
    /// `Δ ∩ E ≠ ∅`.
    pub has_loops: bool,
}

/// A finite graph `(𝒱, ℰ)`: named vertices plus an edge relation.
///
/// Equality compares labelled graphs: two values are equal when they have the
/// same vertex names and the same edges between those names, whatever the
/// internal vertex order.
#[derive(Debug, Clone)]
pub struct Graph {
    names: Vec<String>,
    edges: Relation,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        if self.names == other.names {
            return self.edges == other.edges;
        }
        if self.len() != other.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let map: Option<Vec<VertexId>> = self.names.iter().map(|n| other.vertex(n).ok()).collect();
        let Some(map) = map else { return false };
        self.edges.pairs().all(|(b, c)| other.has_edge(map[b.0], map[c.0]))
    }
}

impl Eq for Graph {}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == '#' || c == '-' || c == '>' || c == ',')
}

impl Graph {
    /// Builds a graph from names and an edge relation over them.
    pub fn new(names: Vec<String>, edges: Relation) -> Result<Self, GraphError> {
        if edges.universe() != names.len() {
            return Err(RelationError::UniverseMismatch {
                left: names.len(),
                right: edges.universe(),
            }
            .into());
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(GraphError::InvalidName(n.clone()));
            }
            if seen.insert(n.as_str(), i).is_some() {
                return Err(GraphError::DuplicateName(n.clone()));
            }
        }
        Ok(Graph { names, edges })
    }

    /// A graph on vertices named `v0, v1, …`.
    pub fn from_relation(edges: Relation) -> Self {
        let names = (0..edges.universe()).map(|i| format!("v{i}")).collect();
        Graph { names, edges }
    }

    /// Builder used by tests and examples: vertex names are taken in order of
    /// first appearance among `edges`.
    pub fn from_edges(edges: &[(&str, &str)]) -> Self {
        let mut text = String::new();
        for (a, b) in edges {
            let _ = writeln!(text, "{a} -> {b}");
        }
        Self::parse_edge_list(&text).expect("well-formed edge list")
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut pairs = Vec::new();

        let mut intern = |name: &str, line: usize| -> Result<usize, GraphError> {
            if name.is_empty() {
                return Err(GraphError::EmptyName { line });
            }
            if !valid_name(name) {
                return Err(GraphError::Parse {
                    line,
                    message: format!("invalid vertex name {name:?}"),
                });
            }
            if let Some(&i) = index.get(name) {
                return Ok(i);
            }
            names.push(name.to_string());
            index.insert(name.to_string(), names.len() - 1);
            Ok(names.len() - 1)
        };

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some((src, dst)) = content.split_once("->") {
                let (src, dst) = (src.trim(), dst.trim());
                let s = intern(src, line)?;
                let d = intern(dst, line)?;
                pairs.push((s, d));
                continue;
            }
            let mut words = content.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("node"), Some(name), None) => {
                    intern(name, line)?;
                }
                (Some("node"), None, None) => return Err(GraphError::EmptyName { line }),
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        message: format!("expected `SRC -> DST` or `node NAME`, got {content:?}"),
                    })
                }
            }
        }

        let edges = Relation::from_pairs(names.len(), pairs);
        Ok(Graph { names, edges })
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let touched = self.edges.afterset(&VertexSet::full(self.len())).union(
            &self.edges.foreset(&VertexSet::full(self.len())),
        );
        for v in touched.complement().iter() {
            let _ = writeln!(out, "node {}", self.name(v));
        }
        for (b, c) in self.edges.pairs() {
            let _ = writeln!(out, "{} -> {}", self.name(b), self.name(c));
        }
        out
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edges(&self) -> &Relation {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.len()).map(VertexId)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(VertexId)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set<'a, I>(&self, names: I) -> Result<VertexSet, GraphError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = VertexSet::empty(self.len());
        for n in names {
            set.insert(self.vertex(n)?);
        }
        Ok(set)
    }

    pub fn has_edge(&self, b: VertexId, c: VertexId) -> bool {
        self.edges.contains(b, c)
    }

    pub fn classify(&self) -> Classification {
        let conv = self.edges.converse();
        Classification {
            directed: self.edges.intersection(&conv).is_empty(),
            undirected: self.edges == conv,
            has_loops: !self
                .edges
                .intersection(&Relation::identity(self.len()))
                .is_empty(),
        }
    }

    /// Same vertices, edges `E ∪ E⁻`.
    pub fn undirected_extension(&self) -> Graph {
        Graph {
            names: self.names.clone(),
            edges: self.edges.union(&self.edges.converse()),
        }
    }

    /// `W* = E* W`: every vertex that reaches `W` along directed edges, `W` included.
    pub fn ancestral_closure(&self, w: &VertexSet) -> VertexSet {
        self.edges.reflexive_transitive_closure().foreset(w)
    }

    /// Induced subgraph on `subset`; vertex names and relative order are kept.
    pub fn restrict(&self, subset: &VertexSet) -> Graph {
        let keep: Vec<VertexId> = subset.iter().collect();
        let mut edges = Relation::empty(keep.len());
        for (i, &b) in keep.iter().enumerate() {
            for (j, &c) in keep.iter().enumerate() {
                if self.edges.contains(b, c) {
                    edges.insert(VertexId(i), VertexId(j));
                }
            }
        }
        Graph {
            names: keep.iter().map(|&v| self.names[v.0].clone()).collect(),
            edges,
        }
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.name(v)).collect()
    }
}
