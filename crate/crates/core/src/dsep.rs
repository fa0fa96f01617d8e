//! Conditional relations on a graph and the relational d-separation test.
//!
//! For a conditioning set `W`, with `P = Δ_{¬W} E`:
//!
//! | relation | formula |
//! |---|---|
//! | parental `P^W` | `Δ_{¬W} E` |
//! | ascendent `B^W` | `E P*` |
//! | common cause `K^W` | `(P⁻)⁺ P⁺` |
//! | cousinhood `C^W` | `(Δ_W K Δ_W)⁺ ∪ Δ_W` |
//! | active `A^W` | `Δ ∪ B ∪ B⁻ ∪ K ∪ (B ∪ K) C (B⁻ ∪ K)` |
//!
//! The star variants replace `Δ_W` by `Δ_{W*}` inside the cousinhood. Two
//! vertices are d-separated given `W` exactly when they are not related by
//! `A^W`. [`ConditionalRelations::witness`] turns a positive answer into an
//! explicit active path.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::relation::{Relation, RelationError, VertexId, VertexSet};
use crate::upath::{Orientation, PathError, Step, UndirectedPath};

/// Every relation derived from a fixed `(graph, W)` pair.
#[derive(Debug, Clone)]
pub struct ConditionalRelations {
    given: VertexSet,
    given_star: VertexSet,
    parental: Relation,
    parental_plus: Relation,
    parental_star: Relation,
    ascendent: Relation,
    ascendent_conv: Relation,
    common_cause: Relation,
    cousinhood: Relation,
    cousinhood_star: Relation,
    active: Relation,
    active_star: Relation,
    active_plus: Relation,
    active_minus: Relation,
}

fn cousinhood_over(common_cause: &Relation, set: &VertexSet) -> Relation {
    let d = Relation::diagonal(set);
    (&(&d * common_cause) * &d).transitive_closure().union(&d)
}

impl ConditionalRelations {
    pub fn new(graph: &Graph, given: &VertexSet) -> Result<Self, RelationError> {
        let n = graph.len();
        if given.universe() != n {
            return Err(RelationError::UniverseMismatch { left: n, right: given.universe() });
        }
        let e = graph.edges();
        let delta = Relation::identity(n);
        let not_given = Relation::diagonal(&given.complement());

        let parental = &not_given * e;
        let parental_plus = parental.transitive_closure();
        let parental_star = parental_plus.union(&delta);
        let ascendent = e * &parental_star;
        let ascendent_conv = ascendent.converse();
        let common_cause = &parental_plus.converse() * &parental_plus;

        let given_star = graph.ancestral_closure(given);
        let cousinhood = cousinhood_over(&common_cause, given);
        let cousinhood_star = cousinhood_over(&common_cause, &given_star);

        let left = ascendent.union(&common_cause);
        let right = ascendent_conv.union(&common_cause);
        let base = delta.union(&ascendent).union(&ascendent_conv).union(&common_cause);
        let active = base.union(&(&(&left * &cousinhood) * &right));
        let left_star = &left * &cousinhood_star;
        let active_star = base.union(&(&left_star * &right));
        let active_plus = left.union(&(&left_star * &common_cause));
        let active_minus = ascendent_conv.union(&(&left_star * &ascendent_conv));

        Ok(ConditionalRelations {
            given: given.clone(),
            given_star,
            parental,
            parental_plus,
            parental_star,
            ascendent,
            ascendent_conv,
            common_cause,
            cousinhood,
            cousinhood_star,
            active,
            active_star,
            active_plus,
            active_minus,
        })
    }

    pub fn universe(&self) -> usize {
        self.given.universe()
    }

    /// `W`.
    pub fn given(&self) -> &VertexSet {
        &self.given
    }

    /// `W* = E* W`.
    pub fn given_star(&self) -> &VertexSet {
        &self.given_star
    }

    /// `P^W = Δ_{¬W} E`.
    pub fn parental(&self) -> &Relation {
        &self.parental
    }

    /// `(P^W)⁺`.
    pub fn parental_plus(&self) -> &Relation {
        &self.parental_plus
    }

    /// `(P^W)*`.
    pub fn parental_star(&self) -> &Relation {
        &self.parental_star
    }

    /// `B^W = E (P^W)*`.
    pub fn ascendent(&self) -> &Relation {
        &self.ascendent
    }

    /// `B^{−W}`, the converse of `B^W`.
    pub fn ascendent_conv(&self) -> &Relation {
        &self.ascendent_conv
    }

    /// `K^W = ((P^W)⁻)⁺ (P^W)⁺`.
    pub fn common_cause(&self) -> &Relation {
        &self.common_cause
    }

    pub fn cousinhood(&self) -> &Relation {
        &self.cousinhood
    }

    pub fn cousinhood_star(&self) -> &Relation {
        &self.cousinhood_star
    }

    /// `A^W`.
    pub fn active(&self) -> &Relation {
        &self.active
    }

    /// `A_*`, built on the star cousinhood.
    pub fn active_star(&self) -> &Relation {
        &self.active_star
    }

    /// Pairs joined by an active path whose last step is forward.
    pub fn active_plus(&self) -> &Relation {
        &self.active_plus
    }

    /// Pairs joined by an active path whose last step is backward.
    pub fn active_minus(&self) -> &Relation {
        &self.active_minus
    }

    pub fn d_separated(&self, x: VertexId, y: VertexId) -> bool {
        !self.active.contains(x, y)
    }

    /// `Δ_B A^W Δ_C = ∅`.
    pub fn d_separated_sets(&self, sources: &VertexSet, targets: &VertexSet) -> bool {
        let lhs = &(&Relation::diagonal(sources) * &self.active) * &Relation::diagonal(targets);
        lhs.is_empty()
    }

    /// `(P^W)⁺ {x, y} ∪ (P^W)* W`: where the intermediates of a witness may lie.
    pub fn witness_region(&self, x: VertexId, y: VertexId) -> VertexSet {
        let ends = VertexSet::from_indices(self.universe(), [x.0, y.0]);
        self.parental_plus.foreset(&ends).union(&self.parental_star.foreset(&self.given))
    }

    /// An active path from `x` to `y`, or `None` when they are d-separated.
    ///
    /// Cases are tried in the order `Δ`, `B`, `B⁻`, `K`, composite; relational
    /// facts are expanded into shortest vertex chains with lowest-index
    /// tie-breaking, so the result is deterministic.
    pub fn witness(&self, graph: &Graph, x: VertexId, y: VertexId) -> Option<UndirectedPath> {
        if self.d_separated(x, y) {
            return None;
        }
        let path = WitnessBuilder { graph, rel: self }
            .build(x, y)
            .expect("every pair related by A^W has an active path");
        debug_assert!(path.is_active_with(&self.given, &self.given_star));
        Some(path)
    }
}

/// Relational test on a graph: `¬(x A^W y)`.
pub fn d_separated(graph: &Graph, x: VertexId, y: VertexId, given: &VertexSet) -> Result<bool, RelationError> {
    Ok(ConditionalRelations::new(graph, given)?.d_separated(x, y))
}

pub fn d_separated_sets(
    graph: &Graph,
    sources: &VertexSet,
    targets: &VertexSet,
    given: &VertexSet,
) -> Result<bool, RelationError> {
    Ok(ConditionalRelations::new(graph, given)?.d_separated_sets(sources, targets))
}

pub fn witness_active_path(
    graph: &Graph,
    x: VertexId,
    y: VertexId,
    given: &VertexSet,
) -> Result<Option<UndirectedPath>, RelationError> {
    Ok(ConditionalRelations::new(graph, given)?.witness(graph, x, y))
}

struct WitnessBuilder<'a> {
    graph: &'a Graph,
    rel: &'a ConditionalRelations,
}

impl WitnessBuilder<'_> {
    fn build(&self, x: VertexId, y: VertexId) -> Option<UndirectedPath> {
        let rel = self.rel;
        if x == y {
            return Some(self.self_path(x));
        }
        if rel.ascendent.contains(x, y) {
            return self.forward_chain(x, y);
        }
        if rel.ascendent_conv.contains(x, y) {
            return self.backward_chain(x, y);
        }
        if rel.common_cause.contains(x, y) {
            return self.common_cause_path(x, y);
        }
        self.composite(x, y)
    }

    fn self_path(&self, x: VertexId) -> UndirectedPath {
        match UndirectedPath::trivial(self.graph, x) {
            Ok(p) => p,
            Err(_) => UndirectedPath::single(self.graph, x, x, Orientation::Forward)
                .expect("loop edge present"),
        }
    }

    /// `x B y`: all-forward chain `x → u → … → y` through `¬W`.
    fn forward_chain(&self, x: VertexId, y: VertexId) -> Option<UndirectedPath> {
        let verts = descend(self.graph.edges(), &self.rel.parental, x, y)?;
        self.oriented(&verts, Orientation::Forward)
    }

    /// `x B⁻ y`: the forward chain from `y` to `x`, walked backwards.
    fn backward_chain(&self, x: VertexId, y: VertexId) -> Option<UndirectedPath> {
        let mut verts = descend(self.graph.edges(), &self.rel.parental, y, x)?;
        verts.reverse();
        self.oriented(&verts, Orientation::Backward)
    }

    /// `x K y`: `x ← … ← z → … → y` with the fork and every intermediate in `¬W`.
    fn common_cause_path(&self, x: VertexId, y: VertexId) -> Option<UndirectedPath> {
        let p = &self.rel.parental;
        let to_x = distances_to(p, x);
        let to_y = distances_to(p, y);
        let plus = |z: VertexId, dist: &[Option<usize>]| {
            p.successors(z).filter_map(|s| dist[s.0]).min().map(|d| d + 1)
        };
        let z = self
            .graph
            .vertices()
            .filter_map(|z| Some((plus(z, &to_x)? + plus(z, &to_y)?, z)))
            .min()?
            .1;
        let mut left = descend(p, p, z, x)?;
        left.reverse();
        let right = descend(p, p, z, y)?;
        let back = self.oriented(&left, Orientation::Backward)?;
        let forth = self.oriented(&right, Orientation::Forward)?;
        back.concatenate(&forth).ok()
    }

    /// `x (B ∪ K) δ₀ C_* δₘ (B⁻ ∪ K) y`, joined at colliders `δᵢ ∈ W*`.
    fn composite(&self, x: VertexId, y: VertexId) -> Option<UndirectedPath> {
        let rel = self.rel;
        let star = &rel.given_star;
        let opens = |d: VertexId| rel.ascendent.contains(x, d) || rel.common_cause.contains(x, d);
        let closes = |d: VertexId| rel.ascendent_conv.contains(d, y) || rel.common_cause.contains(d, y);

        // multi-source BFS over W* along K, from the δ₀ candidates to the nearest δₘ
        let n = self.graph.len();
        let mut parent: Vec<Option<VertexId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for d in star.iter().filter(|&d| opens(d)) {
            seen[d.0] = true;
            queue.push_back(d);
        }
        let mut end = None;
        while let Some(d) = queue.pop_front() {
            if closes(d) {
                end = Some(d);
                break;
            }
            for next in rel.common_cause.successors(d) {
                if star.contains(next) && !seen[next.0] {
                    seen[next.0] = true;
                    parent[next.0] = Some(d);
                    queue.push_back(next);
                }
            }
        }
        let mut deltas = vec![end?];
        while let Some(prev) = parent[deltas.last()?.0] {
            deltas.push(prev);
        }
        deltas.reverse();

        let first = deltas[0];
        let last = *deltas.last()?;
        let mut path = if rel.ascendent.contains(x, first) {
            self.forward_chain(x, first)?
        } else {
            self.common_cause_path(x, first)?
        };
        for pair in deltas.windows(2) {
            path = path.concatenate(&self.common_cause_path(pair[0], pair[1])?).ok()?;
        }
        let tail = if rel.ascendent_conv.contains(last, y) {
            self.backward_chain(last, y)?
        } else {
            self.common_cause_path(last, y)?
        };
        path.concatenate(&tail).ok()
    }

    fn oriented(&self, verts: &[VertexId], orient: Orientation) -> Option<UndirectedPath> {
        let steps: Vec<_> = verts.windows(2).map(|w| (Step::new(w[0], w[1]), orient)).collect();
        UndirectedPath::from_steps(self.graph, steps).ok()
    }
}

/// Breadth-first distances to `target` along `rel` (0 at the target itself).
fn distances_to(rel: &Relation, target: VertexId) -> Vec<Option<usize>> {
    let conv = rel.converse();
    let mut dist = vec![None; rel.universe()];
    dist[target.0] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.0].unwrap_or(0);
        for u in conv.successors(v) {
            if dist[u.0].is_none() {
                dist[u.0] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Shortest chain `from → u → … → target` whose first step is in `first` and
/// whose later steps are in `rest`. Ties go to the lowest vertex index.
fn descend(first: &Relation, rest: &Relation, from: VertexId, target: VertexId) -> Option<Vec<VertexId>> {
    let dist = distances_to(rest, target);
    let (d, u) = first.successors(from).filter_map(|u| Some((dist[u.0]?, u))).min()?;
    let mut chain = vec![from, u];
    let mut at = u;
    let mut remaining = d;
    while remaining > 0 {
        at = rest.successors(at).find(|v| dist[v.0] == Some(remaining - 1))?;
        chain.push(at);
        remaining -= 1;
    }
    Some(chain)
}

/// Which closed form of "every directed path from x to y meets W" to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlainVariant {
    /// `¬(x (E Δ_{¬W} E)⁺ y)`, as printed. Only sees walks of even length.
    Literal,
    /// `¬(x E (Δ_{¬W} E)* y)`.
    Corrected,
}

/// Directed-path separation: true when no directed path from `x` to `y` has
/// all its intermediates outside `W`, as decided by the chosen closed form.
pub fn plain_separation(graph: &Graph, x: VertexId, y: VertexId, given: &VertexSet, variant: PlainVariant) -> bool {
    let e = graph.edges();
    let not_given = Relation::diagonal(&given.complement());
    let rel = match variant {
        PlainVariant::Literal => (&(e * &not_given) * e).transitive_closure(),
        PlainVariant::Corrected => e * &(&not_given * e).reflexive_transitive_closure(),
    };
    !rel.contains(x, y)
}

/// Depth-first search over simple directed paths from `x` to `y` whose
/// intermediates avoid `W`. For `x = y` this looks for such a cycle.
pub fn directed_path_avoiding(graph: &Graph, x: VertexId, y: VertexId, given: &VertexSet) -> bool {
    fn go(graph: &Graph, at: VertexId, y: VertexId, given: &VertexSet, on_path: &mut Vec<bool>) -> bool {
        for next in graph.edges().successors(at) {
            if next == y {
                return true;
            }
            if given.contains(next) || on_path[next.0] {
                continue;
            }
            on_path[next.0] = true;
            if go(graph, next, y, given, on_path) {
                return true;
            }
            on_path[next.0] = false;
        }
        false
    }
    let mut on_path = vec![false; graph.len()];
    on_path[x.0] = true;
    go(graph, x, y, given, &mut on_path)
}

/// Re-checks a witness: it must be active, join `x` to `y`, and keep its
/// intermediates inside [`ConditionalRelations::witness_region`].
pub fn check_witness(
    graph: &Graph,
    rel: &ConditionalRelations,
    path: &UndirectedPath,
    x: VertexId,
    y: VertexId,
) -> Result<(), WitnessDefect> {
    path.validate(graph).map_err(WitnessDefect::Invalid)?;
    if path.endpoints() != (x, y) {
        return Err(WitnessDefect::Endpoints);
    }
    if !path.is_active_with(rel.given(), rel.given_star()) {
        return Err(WitnessDefect::Blocked);
    }
    if !path.intermediates().is_subset(&rel.witness_region(x, y)) {
        return Err(WitnessDefect::Intermediates);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessDefect {
    #[error("invalid path: {0}")]
    Invalid(PathError),
    #[error("wrong endpoints")]
    Endpoints,
    #[error("path is blocked")]
    Blocked,
    #[error("intermediate vertex outside the admissible region")]
    Intermediates,
}
