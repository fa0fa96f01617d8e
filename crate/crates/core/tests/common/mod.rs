//! Brute-force reference implementations on plain boolean matrices. Nothing
//! here calls the library's relation algebra, path search or closures.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relsep::{Graph, Relation, VertexId, VertexSet};

pub type Mat = Vec<Vec<bool>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut e = Relation::empty(n);
    for b in 0..n {
        for c in 0..n {
            if mask >> (b * n + c) & 1 == 1 {
                e.insert(VertexId(b), VertexId(c));
            }
        }
    }
    Graph::from_relation(e)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut e = Relation::empty(n);
    for b in 0..n {
        for c in 0..n {
            if rng.gen_bool(p) {
                e.insert(VertexId(b), VertexId(c));
            }
        }
    }
    Graph::from_relation(e)
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    VertexSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

pub fn set_from_mask(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1))
}

pub fn bits(set: &VertexSet) -> Vec<bool> {
    (0..set.universe()).map(|i| set.contains(VertexId(i))).collect()
}

pub fn adjacency(graph: &Graph) -> Mat {
    let n = graph.len();
    (0..n)
        .map(|b| (0..n).map(|c| graph.has_edge(VertexId(b), VertexId(c))).collect())
        .collect()
}

pub fn mat_of(r: &Relation) -> Mat {
    let n = r.universe();
    (0..n)
        .map(|b| (0..n).map(|c| r.contains(VertexId(b), VertexId(c))).collect())
        .collect()
}

// naive relation algebra

pub fn compose(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).any(|k| a[i][k] && b[k][j]);
        }
    }
    out
}

pub fn union(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| *x || *y).collect())
        .collect()
}

pub fn converse(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

pub fn diag(set: &[bool]) -> Mat {
    let n = set.len();
    (0..n).map(|i| (0..n).map(|j| i == j && set[i]).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    diag(&vec![true; n])
}

/// `R⁺` as the union of powers `R¹ … Rⁿ`.
pub fn plus(a: &Mat) -> Mat {
    let n = a.len();
    let mut acc = a.clone();
    let mut power = a.clone();
    for _ in 1..n {
        power = compose(&power, a);
        acc = union(&acc, &power);
    }
    acc
}

pub fn star(a: &Mat) -> Mat {
    union(&identity(a.len()), &plus(a))
}

pub fn not(set: &[bool]) -> Vec<bool> {
    set.iter().map(|b| !b).collect()
}

/// Vertices from which some vertex of `w` is reachable by a directed walk,
/// `w` included.
pub fn ancestors(adj: &Mat, w: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut seen = w.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| w[v]).collect();
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if adj[u][v] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// The conditional active relation from its defining formula.
pub fn active_relation(adj: &Mat, w: &[bool]) -> Mat {
    let n = adj.len();
    let p = compose(&diag(&not(w)), adj);
    let b = compose(adj, &star(&p));
    let bc = converse(&b);
    let k = compose(&converse(&plus(&p)), &plus(&p));
    let dw = diag(w);
    let c = union(&plus(&compose(&compose(&dw, &k), &dw)), &dw);
    let head = union(&b, &k);
    let tail = union(&bc, &k);
    let composite = compose(&compose(&head, &c), &tail);
    [b, bc, k, composite].iter().fold(identity(n), |acc, m| union(&acc, m))
}

// paths

fn open(incoming: i8, outgoing: i8, at: usize, w: &[bool], w_star: &[bool]) -> bool {
    if incoming == 1 && outgoing == -1 {
        w_star[at]
    } else {
        !w[at]
    }
}

/// Depth-first search over every undirected walk from `x` with at most
/// `max_len` steps, abandoning a prefix as soon as one of its junctions is
/// blocked.
pub fn active_walk_exists(adj: &Mat, w: &[bool], x: usize, y: usize, max_len: usize) -> bool {
    if x == y && (!adj[x][x] || max_len >= 1) {
        return true;
    }
    let w_star = ancestors(adj, w);
    fn go(adj: &Mat, w: &[bool], ws: &[bool], at: usize, last: i8, y: usize, left: usize) -> bool {
        if at == y {
            return true;
        }
        if left == 0 {
            return false;
        }
        let n = adj.len();
        for u in 0..n {
            for (o, present) in [(1i8, adj[at][u]), (-1i8, adj[u][at])] {
                if present && open(last, o, at, w, ws) && go(adj, w, ws, u, o, y, left - 1) {
                    return true;
                }
            }
        }
        false
    }
    if max_len == 0 {
        return false;
    }
    let n = adj.len();
    (0..n).any(|u| {
        (adj[x][u] && go(adj, w, &w_star, u, 1, y, max_len - 1))
            || (adj[u][x] && go(adj, w, &w_star, u, -1, y, max_len - 1))
    })
}

/// Simple directed path `x → … → y` with at least one step and every
/// intermediate outside `w`; for `x = y` a simple cycle through `x`.
pub fn directed_path_avoiding(adj: &Mat, w: &[bool], x: usize, y: usize) -> bool {
    fn go(adj: &Mat, w: &[bool], at: usize, y: usize, used: &mut Vec<bool>) -> bool {
        for u in 0..adj.len() {
            if !adj[at][u] {
                continue;
            }
            if u == y {
                return true;
            }
            if w[u] || used[u] {
                continue;
            }
            used[u] = true;
            if go(adj, w, u, y, used) {
                return true;
            }
            used[u] = false;
        }
        false
    }
    let mut used = vec![false; adj.len()];
    used[x] = true;
    go(adj, w, x, y, &mut used)
}

/// Moral graph of the ancestral set of `b ∪ c ∪ w`, searched for a simple path
/// from `b` to `c` whose intermediates avoid `w`. `true` when none exists.
pub fn morally_separated(adj: &Mat, b: &[bool], c: &[bool], w: &[bool]) -> bool {
    let n = adj.len();
    let all: Vec<bool> = (0..n).map(|v| b[v] || c[v] || w[v]).collect();
    let s = ancestors(adj, &all);
    let mut moral = vec![vec![false; n]; n];
    for u in 0..n {
        for v in 0..n {
            if s[u] && s[v] && adj[u][v] {
                moral[u][v] = true;
                moral[v][u] = true;
            }
        }
    }
    for child in 0..n {
        if !s[child] {
            continue;
        }
        for u in 0..n {
            for v in 0..n {
                if s[u] && s[v] && adj[u][child] && adj[v][child] {
                    moral[u][v] = true;
                }
            }
        }
    }
    fn go(m: &Mat, c: &[bool], w: &[bool], at: usize, used: &mut Vec<bool>) -> bool {
        for u in 0..m.len() {
            if !m[at][u] {
                continue;
            }
            if c[u] {
                return true;
            }
            if w[u] || used[u] {
                continue;
            }
            used[u] = true;
            if go(m, c, w, u, used) {
                return true;
            }
            used[u] = false;
        }
        false
    }
    for start in 0..n {
        if b[start] {
            let mut used = vec![false; n];
            used[start] = true;
            if go(&moral, c, w, start, &mut used) {
                return false;
            }
        }
    }
    true
}

/// Vertices with a directed path into `x` or `y` whose vertices before the
/// last are outside `w`, plus vertices reaching `w` the same way (`w` itself
/// included).
pub fn witness_region(adj: &Mat, w: &[bool], x: usize, y: usize) -> Vec<bool> {
    let n = adj.len();
    let mut region = w.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| w[v]).collect();
    let mut first = vec![false; n];
    for target in [x, y] {
        for u in 0..n {
            if adj[u][target] && !w[u] && !first[u] {
                first[u] = true;
            }
        }
    }
    for u in 0..n {
        if first[u] && !region[u] {
            region[u] = true;
            stack.push(u);
        }
    }
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if adj[u][v] && !w[u] && !region[u] {
                region[u] = true;
                stack.push(u);
            }
        }
    }
    region
}
