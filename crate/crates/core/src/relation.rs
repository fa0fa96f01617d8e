//! Dense boolean relations over a finite vertex universe.
//!
//! A [`Relation`] is a square bit matrix whose rows are source vertices and
//! whose columns are target vertices. A [`VertexSet`] is a bit vector over
//! the same universe. Every relation used elsewhere in the crate (edges,
//! sub-diagonals, closures, the conditional relations) is one of these.
//!
//! Binary operations between values built over universes of different sizes
//! are a hard error: the `try_*` methods report it, the plain methods and the
//! operator impls panic.

use std::fmt;
use std::ops::{BitAnd, BitOr, Mul, Not};

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("universe mismatch: {left} vertices vs {right} vertices")]
    UniverseMismatch { left: usize, right: usize },
    #[error("vertex {index} out of range for a universe of {universe} vertices")]
    OutOfRange { index: usize, universe: usize },
}

/// Index of a vertex inside its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the vertex universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            bits: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.bits.iter_mut() {
            *w = !0;
        }
        s.clear_padding();
        s
    }

    pub fn singleton(universe: usize, v: VertexId) -> Self {
        let mut s = Self::empty(universe);
        s.insert(v);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(VertexId(i));
        }
        s
    }

    /// Builds a set from the low `universe` bits of `mask` (bit i = vertex i).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask constructor supports at most 64 vertices");
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.bits[0] = mask;
            s.clear_padding();
        }
        s
    }

    fn clear_padding(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.universe && self.bits[v.0 / WORD] >> (v.0 % WORD) & 1 == 1
    }

    /// Panics if `v` lies outside the universe.
    #[inline]
    pub fn insert(&mut self, v: VertexId) -> bool {
        assert!(
            v.0 < self.universe,
            "vertex {} out of range for a universe of {}",
            v.0,
            self.universe
        );
        let (w, b) = (v.0 / WORD, v.0 % WORD);
        let was = self.bits[w] >> b & 1 == 1;
        self.bits[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: VertexId) -> bool {
        if v.0 >= self.universe {
            return false;
        }
        let (w, b) = (v.0 / WORD, v.0 % WORD);
        let was = self.bits[w] >> b & 1 == 1;
        self.bits[w] &= !(1 << b);
        was
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        iter_bits(&self.bits).map(VertexId)
    }

    pub fn complement(&self) -> Self {
        let mut s = VertexSet {
            universe: self.universe,
            bits: self.bits.iter().map(|w| !w).collect(),
        };
        s.clear_padding();
        s
    }

    pub fn try_union(&self, other: &Self) -> Result<Self, RelationError> {
        same_universe(self.universe, other.universe)?;
        Ok(self.zip_with(other, |a, b| a | b))
    }

    pub fn try_intersection(&self, other: &Self) -> Result<Self, RelationError> {
        same_universe(self.universe, other.universe)?;
        Ok(self.zip_with(other, |a, b| a & b))
    }

    pub fn union(&self, other: &Self) -> Self {
        expect_same(self.try_union(other))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        expect_same(self.try_intersection(other))
    }

    pub fn difference(&self, other: &Self) -> Self {
        expect_same(same_universe(self.universe, other.universe));
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        expect_same(same_universe(self.universe, other.universe));
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        expect_same(same_universe(self.universe, other.universe));
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        VertexSet {
            universe: self.universe,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn intersects_words(&self, row: &[u64]) -> bool {
        self.bits.iter().zip(row).any(|(a, b)| a & b != 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// A binary relation on a finite universe, stored as a bit-packed square matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    universe: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Relation {
    /// The empty relation.
    pub fn empty(universe: usize) -> Self {
        let stride = words_for(universe);
        Relation {
            universe,
            stride,
            bits: vec![0; stride * universe],
        }
    }

    /// The full relation `𝒱 × 𝒱`.
    pub fn full(universe: usize) -> Self {
        Self::empty(universe).complement()
    }

    /// The identity relation Δ.
    pub fn identity(universe: usize) -> Self {
        Self::diagonal(&VertexSet::full(universe))
    }

    /// The sub-diagonal Δ_B: `(b, b)` for every `b ∈ B`.
    pub fn diagonal(set: &VertexSet) -> Self {
        let mut r = Self::empty(set.universe());
        for v in set.iter() {
            r.insert(v, v);
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(universe: usize, pairs: I) -> Self {
        let mut r = Self::empty(universe);
        for (a, b) in pairs {
            r.insert(VertexId(a), VertexId(b));
        }
        r
    }

    /// Row-major bit mask, bit `i * universe + j` = entry `(i, j)`. At most 8 vertices.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe * universe <= WORD, "mask constructor supports at most 8 vertices");
        let mut r = Self::empty(universe);
        for i in 0..universe {
            for j in 0..universe {
                if mask >> (i * universe + j) & 1 == 1 {
                    r.insert(VertexId(i), VertexId(j));
                }
            }
        }
        r
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn contains(&self, b: VertexId, c: VertexId) -> bool {
        b.0 < self.universe
            && c.0 < self.universe
            && self.bits[b.0 * self.stride + c.0 / WORD] >> (c.0 % WORD) & 1 == 1
    }

    pub fn try_insert(&mut self, b: VertexId, c: VertexId) -> Result<bool, RelationError> {
        for v in [b, c] {
            if v.0 >= self.universe {
                return Err(RelationError::OutOfRange {
                    index: v.0,
                    universe: self.universe,
                });
            }
        }
        let idx = b.0 * self.stride + c.0 / WORD;
        let was = self.bits[idx] >> (c.0 % WORD) & 1 == 1;
        self.bits[idx] |= 1 << (c.0 % WORD);
        Ok(!was)
    }

    /// Panics if either vertex lies outside the universe.
    pub fn insert(&mut self, b: VertexId, c: VertexId) -> bool {
        match self.try_insert(b, c) {
            Ok(fresh) => fresh,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn remove(&mut self, b: VertexId, c: VertexId) -> bool {
        if !self.contains(b, c) {
            return false;
        }
        self.bits[b.0 * self.stride + c.0 / WORD] &= !(1 << (c.0 % WORD));
        true
    }

    /// Number of pairs in the relation.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.universe)
            .flat_map(move |i| iter_bits(self.row(i)).map(move |j| (VertexId(i), VertexId(j))))
    }

    /// The afterset of a single vertex: `{c : b R c}`.
    pub fn successors(&self, b: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        iter_bits(self.row(b.0)).map(VertexId)
    }

    pub fn row_set(&self, b: VertexId) -> VertexSet {
        VertexSet {
            universe: self.universe,
            bits: self.row(b.0).to_vec(),
        }
    }

    pub fn converse(&self) -> Self {
        let mut r = Self::empty(self.universe);
        for (b, c) in self.pairs() {
            r.insert(c, b);
        }
        r
    }

    pub fn complement(&self) -> Self {
        let mut r = self.clone();
        for w in r.bits.iter_mut() {
            *w = !*w;
        }
        let rem = self.universe % WORD;
        if rem != 0 {
            let mask = (1u64 << rem) - 1;
            for i in 0..r.universe {
                let last = r.stride - 1;
                r.row_mut(i)[last] &= mask;
            }
        }
        r
    }

    pub fn try_compose(&self, other: &Self) -> Result<Self, RelationError> {
        same_universe(self.universe, other.universe)?;
        let mut out = Self::empty(self.universe);
        for i in 0..self.universe {
            let (row_start, row_end) = (i * self.stride, (i + 1) * self.stride);
            for k in iter_bits(&self.bits[row_start..row_end]) {
                let src = other.row(k);
                for (dst, s) in out.bits[row_start..row_end].iter_mut().zip(src) {
                    *dst |= s;
                }
            }
        }
        Ok(out)
    }

    pub fn try_union(&self, other: &Self) -> Result<Self, RelationError> {
        same_universe(self.universe, other.universe)?;
        Ok(self.zip_with(other, |a, b| a | b))
    }

    pub fn try_intersection(&self, other: &Self) -> Result<Self, RelationError> {
        same_universe(self.universe, other.universe)?;
        Ok(self.zip_with(other, |a, b| a & b))
    }

    pub fn try_is_subset(&self, other: &Self) -> Result<bool, RelationError> {
        same_universe(self.universe, other.universe)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// `(b, c)` iff there is `d` with `b R d` and `d S c`.
    pub fn compose(&self, other: &Self) -> Self {
        expect_same(self.try_compose(other))
    }

    pub fn union(&self, other: &Self) -> Self {
        expect_same(self.try_union(other))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        expect_same(self.try_intersection(other))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        expect_same(self.try_is_subset(other))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.converse()
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    /// `R⁺ = ⋃_{k≥1} Rᵏ`, by Warshall's algorithm on bit rows.
    pub fn transitive_closure(&self) -> Self {
        let mut r = self.clone();
        let stride = r.stride;
        for k in 0..r.universe {
            let (kw, kb) = (k / WORD, k % WORD);
            let row_k: Vec<u64> = r.row(k).to_vec();
            for i in 0..r.universe {
                if r.bits[i * stride + kw] >> kb & 1 == 1 {
                    for (dst, s) in r.row_mut(i).iter_mut().zip(&row_k) {
                        *dst |= s;
                    }
                }
            }
        }
        r
    }

    /// `R* = R⁺ ∪ Δ`.
    pub fn reflexive_transitive_closure(&self) -> Self {
        let mut r = self.transitive_closure();
        for i in 0..r.universe {
            r.insert(VertexId(i), VertexId(i));
        }
        r
    }

    /// `R C = {b : ∃ c ∈ C, b R c}`.
    pub fn foreset(&self, targets: &VertexSet) -> VertexSet {
        expect_same(same_universe(self.universe, targets.universe()));
        let mut out = VertexSet::empty(self.universe);
        for i in 0..self.universe {
            if targets.intersects_words(self.row(i)) {
                out.insert(VertexId(i));
            }
        }
        out
    }

    /// `B R = {c : ∃ b ∈ B, b R c}`.
    pub fn afterset(&self, sources: &VertexSet) -> VertexSet {
        expect_same(same_universe(self.universe, sources.universe()));
        let mut out = VertexSet::empty(self.universe);
        for b in sources.iter() {
            for (dst, s) in out.bits.iter_mut().zip(self.row(b.0)) {
                *dst |= s;
            }
        }
        out
    }

    /// Restriction to `S × S`, keeping the universe.
    pub fn restrict_to(&self, set: &VertexSet) -> Self {
        let d = Relation::diagonal(set);
        d.compose(self).compose(&d)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        Relation {
            universe: self.universe,
            stride: self.stride,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(b, c)| (b.0, c.0)))
            .finish()
    }
}

impl Mul for &Relation {
    type Output = Relation;
    fn mul(self, rhs: &Relation) -> Relation {
        self.compose(rhs)
    }
}

impl BitOr for &Relation {
    type Output = Relation;
    fn bitor(self, rhs: &Relation) -> Relation {
        self.union(rhs)
    }
}

impl BitAnd for &Relation {
    type Output = Relation;
    fn bitand(self, rhs: &Relation) -> Relation {
        self.intersection(rhs)
    }
}

impl Not for &Relation {
    type Output = Relation;
    fn not(self) -> Relation {
        self.complement()
    }
}

fn same_universe(left: usize, right: usize) -> Result<(), RelationError> {
    if left == right {
        Ok(())
    } else {
        Err(RelationError::UniverseMismatch { left, right })
    }
}

fn expect_same<T>(r: Result<T, RelationError>) -> T {
    match r {
        Ok(v) => v,
        Err(e) => panic!("{e}"),
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            }
        })
    })
}
