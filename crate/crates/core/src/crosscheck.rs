//! Differential checking of the three separation procedures.
//!
//! Random graphs come from ChaCha8 (`rand_chacha::ChaCha8Rng`). Trial `t` of a
//! run with seed `s` draws from a stream seeded with
//! `splitmix64(s ^ splitmix64(t))`, so trials are independent of each other
//! and of execution order. Each edge `(b, c)`, loops included, is present with
//! probability `edge_prob`; `W` takes each vertex with probability 1/2; the
//! moral check assigns every vertex to `B`, `C`, `W` or none uniformly.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsep::ConditionalRelations;
use crate::graph::Graph;
use crate::moral::MoralContext;
use crate::reach::active_reach;
use crate::relation::{Relation, VertexId, VertexSet};
use crate::upath::{completeness_bound, exists_active_path_bounded};

pub const RELATIONAL: &str = "relational";
pub const REACHABILITY: &str = "reachability";
pub const ENUMERATION: &str = "enumeration";
pub const MORAL: &str = "moral";
pub const RELATIONAL_SETS: &str = "relational_sets";

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, edge_prob: f64) -> Graph {
    let mut e = Relation::empty(vertices);
    for b in 0..vertices {
        for c in 0..vertices {
            if rng.gen_bool(edge_prob) {
                e.insert(VertexId(b), VertexId(c));
            }
        }
    }
    Graph::from_relation(e)
}

pub fn random_subset<R: Rng>(rng: &mut R, vertices: usize) -> VertexSet {
    VertexSet::from_indices(vertices, (0..vertices).filter(|_| rng.gen_bool(0.5)))
}

/// Pairwise disjoint `(B, C, W)`.
pub fn random_disjoint_triple<R: Rng>(rng: &mut R, vertices: usize) -> (VertexSet, VertexSet, VertexSet) {
    let mut sets = [
        VertexSet::empty(vertices),
        VertexSet::empty(vertices),
        VertexSet::empty(vertices),
    ];
    for v in 0..vertices {
        let slot = rng.gen_range(0..4usize);
        if slot < 3 {
            sets[slot].insert(VertexId(v));
        }
    }
    let [b, c, w] = sets;
    (b, c, w)
}

/// One failed comparison, serialized with vertex names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub graph: String,
    pub given: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sources: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<String>>,
    /// Method name → "separated" verdict.
    pub verdicts: BTreeMap<String, bool>,
}

fn names(graph: &Graph, set: &VertexSet) -> Vec<String> {
    graph.set_names(set).into_iter().map(str::to_string).collect()
}

/// Outcome of comparing the procedures on every ordered pair of one `(graph, W)`.
#[derive(Debug, Clone, Default)]
pub struct PairCheck {
    pub pairs: u64,
    pub disagreements: u64,
    pub first: Option<Counterexample>,
}

impl PairCheck {
    fn absorb(&mut self, other: PairCheck) {
        self.pairs += other.pairs;
        self.disagreements += other.disagreements;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

/// Relational vs reachability (vs bounded enumeration when `enumeration_len`
/// is set) over all ordered pairs.
pub fn check_pairs(graph: &Graph, given: &VertexSet, enumeration_len: Option<usize>) -> PairCheck {
    let rel = ConditionalRelations::new(graph, given).expect("set over the graph's universe");
    let mut out = PairCheck::default();
    for x in graph.vertices() {
        let reach = active_reach(graph, x, given);
        for y in graph.vertices() {
            let mut verdicts = BTreeMap::new();
            verdicts.insert(RELATIONAL.to_string(), rel.d_separated(x, y));
            verdicts.insert(REACHABILITY.to_string(), !(x == y || reach.reaches(y)));
            if let Some(len) = enumeration_len {
                verdicts.insert(ENUMERATION.to_string(), !exists_active_path_bounded(graph, x, y, given, len));
            }
            out.pairs += 1;
            if !agree(&verdicts) {
                out.disagreements += 1;
                if out.first.is_none() {
                    out.first = Some(Counterexample {
                        graph: graph.to_edge_list(),
                        given: names(graph, given),
                        x: Some(graph.name(x).to_string()),
                        y: Some(graph.name(y).to_string()),
                        sources: None,
                        targets: None,
                        verdicts,
                    });
                }
            }
        }
    }
    out
}

/// Moral blocking vs relational set separation for disjoint `(B, C, W)`.
pub fn check_moral(graph: &Graph, sources: &VertexSet, targets: &VertexSet, given: &VertexSet) -> Option<Counterexample> {
    let moral = MoralContext::new(graph, sources, targets, given).expect("disjoint sets").blocked();
    let relational = ConditionalRelations::new(graph, given)
        .expect("set over the graph's universe")
        .d_separated_sets(sources, targets);
    if moral == relational {
        return None;
    }
    Some(Counterexample {
        graph: graph.to_edge_list(),
        given: names(graph, given),
        x: None,
        y: None,
        sources: Some(names(graph, sources)),
        targets: Some(names(graph, targets)),
        verdicts: BTreeMap::from([(MORAL.to_string(), moral), (RELATIONAL_SETS.to_string(), relational)]),
    })
}

pub fn agree(verdicts: &BTreeMap<String, bool>) -> bool {
    let mut it = verdicts.values();
    match it.next() {
        Some(first) => it.all(|v| v == first),
        None => true,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckConfig {
    pub vertices: usize,
    pub edge_prob: f64,
    pub trials: u64,
    pub seed: u64,
    /// Additionally sweep every graph and every `W` on `1..=m` vertices (`m ≤ 4`).
    pub max_vertices_exhaustive: Option<usize>,
    /// Bounded enumeration joins the comparison on graphs up to this size.
    pub enumeration_max_vertices: usize,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        CrosscheckConfig {
            vertices: 5,
            edge_prob: 0.3,
            trials: 100,
            seed: 0,
            max_vertices_exhaustive: None,
            enumeration_max_vertices: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("--vertices must be at least 1")]
    Vertices,
    #[error("--edge-prob must lie in [0, 1]")]
    EdgeProb,
    #[error("--trials must be at least 1")]
    Trials,
    #[error("--max-vertices-exhaustive must be at most 4")]
    Exhaustive,
}

impl CrosscheckConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.vertices < 1 {
            return Err(ConfigError::Vertices);
        }
        if !(0.0..=1.0).contains(&self.edge_prob) {
            return Err(ConfigError::EdgeProb);
        }
        if self.trials < 1 {
            return Err(ConfigError::Trials);
        }
        if matches!(self.max_vertices_exhaustive, Some(m) if m > 4) {
            return Err(ConfigError::Exhaustive);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveSummary {
    pub max_vertices: usize,
    pub graphs: u64,
    pub pairs_checked: u64,
    pub moral_checked: u64,
    pub disagreements: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckSummary {
    pub trials: u64,
    pub pairs_checked: u64,
    pub disagreements: u64,
    pub first_counterexample: Option<Counterexample>,
    pub seed: u64,
    pub moral_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<ExhaustiveSummary>,
}

struct TrialOutcome {
    pairs: PairCheck,
    moral: Option<Counterexample>,
}

fn run_trial(config: &CrosscheckConfig, trial: u64) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, trial);
    let n = config.vertices;
    let graph = random_graph(&mut rng, n, config.edge_prob);
    let given = random_subset(&mut rng, n);
    let (b, c, w) = random_disjoint_triple(&mut rng, n);
    let len = (n <= config.enumeration_max_vertices).then(|| completeness_bound(n));
    TrialOutcome {
        pairs: check_pairs(&graph, &given, len),
        moral: check_moral(&graph, &b, &c, &w),
    }
}

/// All graphs on `vertices` vertices, in mask order.
pub fn all_graphs(vertices: usize) -> impl Iterator<Item = Graph> {
    let count = 1u64 << (vertices * vertices);
    (0..count).map(move |mask| Graph::from_relation(Relation::from_mask(vertices, mask)))
}

/// Every disjoint `(B, C, W)` on `vertices` vertices.
pub fn all_disjoint_triples(vertices: usize) -> impl Iterator<Item = (VertexSet, VertexSet, VertexSet)> {
    let count = 4u64.pow(vertices as u32);
    (0..count).map(move |mut code| {
        let mut sets = [
            VertexSet::empty(vertices),
            VertexSet::empty(vertices),
            VertexSet::empty(vertices),
        ];
        for v in 0..vertices {
            let slot = (code % 4) as usize;
            code /= 4;
            if slot < 3 {
                sets[slot].insert(VertexId(v));
            }
        }
        let [b, c, w] = sets;
        (b, c, w)
    })
}

fn sweep(max_vertices: usize) -> (ExhaustiveSummary, Option<Counterexample>) {
    let mut summary = ExhaustiveSummary {
        max_vertices,
        graphs: 0,
        pairs_checked: 0,
        moral_checked: 0,
        disagreements: 0,
    };
    let mut first = None;
    for n in 1..=max_vertices {
        let triples: Vec<_> = all_disjoint_triples(n).collect();
        let len = completeness_bound(n);
        let per_graph: Vec<(PairCheck, u64, u64, Option<Counterexample>)> = (0..1u64 << (n * n))
            .into_par_iter()
            .map(|mask| {
                let graph = Graph::from_relation(Relation::from_mask(n, mask));
                let mut pairs = PairCheck::default();
                for wmask in 0..1u64 << n {
                    pairs.absorb(check_pairs(&graph, &VertexSet::from_mask(n, wmask), Some(len)));
                }
                let mut moral_bad = 0;
                let mut moral_first = None;
                for (b, c, w) in &triples {
                    if let Some(cx) = check_moral(&graph, b, c, w) {
                        moral_bad += 1;
                        moral_first.get_or_insert(cx);
                    }
                }
                (pairs, triples.len() as u64, moral_bad, moral_first)
            })
            .collect();
        for (pairs, moral_checked, moral_bad, moral_first) in per_graph {
            summary.graphs += 1;
            summary.pairs_checked += pairs.pairs;
            summary.moral_checked += moral_checked;
            summary.disagreements += pairs.disagreements + moral_bad;
            if first.is_none() {
                first = pairs.first.or(moral_first);
            }
        }
    }
    (summary, first)
}

pub fn run(config: &CrosscheckConfig) -> Result<CrosscheckSummary, ConfigError> {
    config.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();

    let mut summary = CrosscheckSummary {
        trials: config.trials,
        pairs_checked: 0,
        disagreements: 0,
        first_counterexample: None,
        seed: config.seed,
        moral_checked: 0,
        exhaustive: None,
    };
    for o in outcomes {
        summary.pairs_checked += o.pairs.pairs;
        summary.disagreements += o.pairs.disagreements;
        summary.moral_checked += 1;
        if o.moral.is_some() {
            summary.disagreements += 1;
        }
        if summary.first_counterexample.is_none() {
            summary.first_counterexample = o.pairs.first.or(o.moral);
        }
    }
    if let Some(m) = config.max_vertices_exhaustive {
        let (ex, first) = sweep(m);
        summary.disagreements += ex.disagreements;
        if summary.first_counterexample.is_none() {
            summary.first_counterexample = first;
        }
        summary.exhaustive = Some(ex);
    }
    Ok(summary)
}
