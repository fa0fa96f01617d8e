//! Single-pair queries and named relation lookup, as used by the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dsep::ConditionalRelations;
use crate::graph::Graph;
use crate::moral::moral_relation;
use crate::reach::d_connected_reach;
use crate::relation::{Relation, VertexId, VertexSet};
use crate::upath::{completeness_bound, exists_active_path_bounded, StepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Relational,
    Reachability,
    Enumeration,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Relational, Method::Reachability, Method::Enumeration];

    pub fn name(self) -> &'static str {
        match self {
            Method::Relational => "relational",
            Method::Reachability => "reachability",
            Method::Enumeration => "enumeration",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{name}` (expected one of: {expected})")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
    pub expected: String,
}

impl FromStr for Method {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| UnknownName {
            kind: "method",
            name: s.to_string(),
            expected: Method::ALL.map(Method::name).join(", "),
        })
    }
}

/// Result of one `(x, y, W)` query. Verdicts are `true` for "separated".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryReport {
    pub x: String,
    pub y: String,
    pub given: Vec<String>,
    pub verdicts: BTreeMap<String, bool>,
    pub witness: Option<Vec<StepRecord>>,
    pub agree: bool,
}

impl QueryReport {
    /// `Some(separated)` when every method agrees.
    pub fn verdict(&self) -> Option<bool> {
        if self.agree {
            self.verdicts.values().next().copied()
        } else {
            None
        }
    }
}

/// Runs `methods` on one pair. The relational verdict decides whether a
/// witness is attached; `max_len` defaults to the completeness bound.
pub fn run_query(
    graph: &Graph,
    x: VertexId,
    y: VertexId,
    given: &VertexSet,
    methods: &[Method],
    max_len: Option<usize>,
) -> QueryReport {
    let rel = ConditionalRelations::new(graph, given).expect("set over the graph's universe");
    let mut verdicts = BTreeMap::new();
    for &m in methods {
        let separated = match m {
            Method::Relational => rel.d_separated(x, y),
            Method::Reachability => !d_connected_reach(graph, x, y, given),
            Method::Enumeration => {
                let len = max_len.unwrap_or_else(|| completeness_bound(graph.len()));
                !exists_active_path_bounded(graph, x, y, given, len)
            }
        };
        verdicts.insert(m.name().to_string(), separated);
    }
    let witness = rel.witness(graph, x, y).map(|p| p.to_records(graph));
    let mut values = verdicts.values();
    let first = values.next();
    let agree = values.all(|v| Some(v) == first);
    QueryReport {
        x: graph.name(x).to_string(),
        y: graph.name(y).to_string(),
        given: graph.set_names(given).into_iter().map(str::to_string).collect(),
        verdicts,
        witness,
        agree,
    }
}

pub const RELATION_NAMES: [&str; 11] = [
    "parental",
    "ascendent",
    "ascendent-conv",
    "common-cause",
    "cousinhood",
    "cousinhood-star",
    "active",
    "active-star",
    "active-plus",
    "active-minus",
    "moral",
];

/// Looks up one of [`RELATION_NAMES`]. `moral` is the moral relation of the
/// whole graph and ignores `W`.
pub fn relation_by_name(graph: &Graph, given: &VertexSet, name: &str) -> Result<Relation, UnknownName> {
    if !RELATION_NAMES.contains(&name) {
        return Err(UnknownName {
            kind: "relation",
            name: name.to_string(),
            expected: RELATION_NAMES.join(", "),
        });
    }
    if name == "moral" {
        return Ok(moral_relation(graph));
    }
    let rel = ConditionalRelations::new(graph, given).expect("set over the graph's universe");
    let r = match name {
        "parental" => rel.parental(),
        "ascendent" => rel.ascendent(),
        "ascendent-conv" => rel.ascendent_conv(),
        "common-cause" => rel.common_cause(),
        "cousinhood" => rel.cousinhood(),
        "cousinhood-star" => rel.cousinhood_star(),
        "active" => rel.active(),
        "active-star" => rel.active_star(),
        "active-plus" => rel.active_plus(),
        _ => rel.active_minus(),
    };
    Ok(r.clone())
}

/// Row-major 0/1 rows, one per vertex.
pub fn matrix_rows(relation: &Relation) -> Vec<Vec<u8>> {
    let n = relation.universe();
    (0..n)
        .map(|b| (0..n).map(|c| relation.contains(VertexId(b), VertexId(c)) as u8).collect())
        .collect()
}

/// The matrix as text: a header row of vertex names, then one labelled row
/// per vertex.
pub fn format_matrix(graph: &Graph, relation: &Relation) -> String {
    let width = graph.names().iter().map(String::len).max().unwrap_or(1).max(1);
    let mut out = String::new();
    out.push_str(&format!("{:width$}", ""));
    for name in graph.names() {
        out.push_str(&format!(" {name:>width$}"));
    }
    out.push('\n');
    for (name, row) in graph.names().iter().zip(matrix_rows(relation)) {
        out.push_str(&format!("{name:width$}"));
        for bit in row {
            out.push_str(&format!(" {bit:>width$}"));
        }
        out.push('\n');
    }
    out
}
