//! Storage, indexing and density predicates for 2-edge-coloured k-graphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subsets::{self, binomial, colex_rank_mask, BitIter, MAX_VERTICES};

/// Upper bound on `C(n, k)` for a materialised colour table.
pub const MAX_TABLE: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Colour {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Colour {
    pub const BOTH: [Colour; 2] = [Colour::Red, Colour::Blue];

    /// The colour-swap involution.
    #[inline]
    pub fn swap(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Colour::Red => 'R',
            Colour::Blue => 'B',
        }
    }

    pub fn index(self) -> usize {
        match self {
            Colour::Red => 0,
            Colour::Blue => 1,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        })
    }
}

/// A subset of `[0, n)` for `n <= 64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_mask(mask: u64) -> Self {
        VertexSet(mask)
    }

    /// `{0, ..., n-1}`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        VertexSet(subsets::low_bits(n))
    }

    #[inline]
    pub const fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    #[inline]
    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> BitIter {
        BitIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().filter(|&x| x < MAX_VERTICES).collect()
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.to_vec()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An edge of a k-graph: `k` distinct vertices, stored as a bitmask.
///
/// The derived order compares masks as integers, which is colex order on
/// edges of equal size.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct KEdge(u64);

impl KEdge {
    /// Validates `vertices` as a strictly increasing sequence of `k` indices in `[0, n)`.
    pub fn new(vertices: &[usize], n: usize, k: usize) -> Result<Self> {
        if vertices.len() != k {
            return Err(Error::InvalidInput(format!(
                "edge {vertices:?} has {} vertices, expected {k}",
                vertices.len()
            )));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "edge {vertices:?} is not strictly increasing"
            )));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidInput(format!("vertex {v} out of range for n = {n}")));
        }
        Ok(KEdge(vertices.iter().fold(0, |m, &v| m | 1 << v)))
    }

    /// Builds an edge from an arbitrary non-empty vertex set (order irrelevant).
    pub fn from_set(set: VertexSet) -> Self {
        KEdge(set.mask())
    }

    #[inline]
    pub const fn from_mask(mask: u64) -> Self {
        KEdge(mask)
    }

    #[inline]
    pub const fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn set(self) -> VertexSet {
        VertexSet::from_mask(self.0)
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.set().contains(v)
    }

    #[inline]
    pub fn intersection_size(self, other: KEdge) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    pub fn vertices(self) -> Vec<usize> {
        BitIter(self.0).collect()
    }

    pub fn iter(self) -> BitIter {
        BitIter(self.0)
    }
}

impl TryFrom<Vec<usize>> for KEdge {
    type Error = String;

    fn try_from(v: Vec<usize>) -> std::result::Result<Self, String> {
        let k = v.len();
        if k == 0 {
            return Err("empty edge".into());
        }
        KEdge::new(&v, MAX_VERTICES, k).map_err(|e| e.to_string())
    }
}

impl From<KEdge> for Vec<usize> {
    fn from(e: KEdge) -> Self {
        e.vertices()
    }
}

impl fmt::Debug for KEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Colex rank of `edge` among the `k`-subsets of `[0, n)`.
pub fn colex_rank(edge: KEdge, n: usize, k: usize) -> Result<u64> {
    if edge.size() != k || edge.mask() & !subsets::low_bits(n) != 0 {
        return Err(Error::InvalidInput(format!("{edge} is not a {k}-subset of [0, {n})")));
    }
    Ok(colex_rank_mask(edge.mask()))
}

pub fn colex_unrank(index: u64, n: usize, k: usize) -> Result<KEdge> {
    subsets::colex_unrank_mask(index, n, k).map(KEdge)
}

/// A k-graph on `[0, n)` whose edges are Absent, Red or Blue, indexed by colex rank.
#[derive(Clone, PartialEq, Eq)]
pub struct ColouredKGraph {
    n: usize,
    k: usize,
    table: Vec<Option<Colour>>,
}

impl fmt::Debug for ColouredKGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColouredKGraph")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl ColouredKGraph {
    fn check_dims(n: usize, k: usize) -> Result<usize> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("uniformity k = {k} must be at least 2")));
        }
        if n > MAX_VERTICES {
            return Err(Error::InvalidInput(format!(
                "n = {n} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        if k > n {
            return Err(Error::InvalidInput(format!("k = {k} exceeds n = {n}")));
        }
        let size = binomial(n, k);
        if size > MAX_TABLE {
            return Err(Error::TooLarge(format!("C({n},{k}) = {size} edges")));
        }
        Ok(size as usize)
    }

    /// Graph with every edge Absent.
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        let size = Self::check_dims(n, k)?;
        Ok(ColouredKGraph {
            n,
            k,
            table: vec![None; size],
        })
    }

    pub fn complete(n: usize, k: usize, colour: Colour) -> Result<Self> {
        Self::from_fn(n, k, |_| Some(colour))
    }

    /// Builds the table by visiting every `k`-set in colex order.
    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(KEdge) -> Option<Colour>) -> Result<Self> {
        let size = Self::check_dims(n, k)?;
        let mut table = Vec::with_capacity(size);
        table.extend(subsets::subsets(n, k).map(|m| f(KEdge(m))));
        debug_assert_eq!(table.len(), size);
        Ok(ColouredKGraph { n, k, table })
    }

    /// Builds a graph from an explicit edge list; unlisted sets take `default`.
    pub fn from_edges(
        n: usize,
        k: usize,
        default: Option<Colour>,
        edges: impl IntoIterator<Item = (KEdge, Colour)>,
    ) -> Result<Self> {
        let size = Self::check_dims(n, k)?;
        let mut table = vec![default; size];
        for (e, c) in edges {
            let r = colex_rank(e, n, k)? as usize;
            table[r] = Some(c);
        }
        Ok(ColouredKGraph { n, k, table })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// `C(n, k)`, the number of table slots.
    #[inline]
    pub fn slot_count(&self) -> usize {
        self.table.len()
    }

    pub fn edge_count(&self) -> usize {
        self.table.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    #[inline]
    pub fn is_edge_shape(&self, e: KEdge) -> bool {
        e.size() == self.k && e.mask() & !subsets::low_bits(self.n) == 0
    }

    /// Colex rank of a well-shaped edge.
    #[inline]
    pub fn rank(&self, e: KEdge) -> usize {
        debug_assert!(self.is_edge_shape(e));
        colex_rank_mask(e.mask()) as usize
    }

    pub fn unrank(&self, rank: usize) -> Result<KEdge> {
        colex_unrank(rank as u64, self.n, self.k)
    }

    /// The slot for `e`: `None` when the edge is Absent or `e` is not a `k`-subset of `[0, n)`.
    #[inline]
    pub fn slot(&self, e: KEdge) -> Option<Colour> {
        if !self.is_edge_shape(e) {
            return None;
        }
        self.table[self.rank(e)]
    }

    #[inline]
    pub fn slot_at(&self, rank: usize) -> Option<Colour> {
        self.table[rank]
    }

    #[inline]
    pub fn is_present(&self, e: KEdge) -> bool {
        self.slot(e).is_some()
    }

    /// Colour of a present edge. Reading the colour of an Absent edge is an error.
    pub fn colour(&self, e: KEdge) -> Result<Colour> {
        if !self.is_edge_shape(e) {
            return Err(Error::InvalidInput(format!(
                "{e} is not a {}-subset of [0, {})",
                self.k, self.n
            )));
        }
        self.slot(e).ok_or(Error::AbsentEdge(e))
    }

    /// Present edges in colex order with their ranks.
    pub fn edges(&self) -> impl Iterator<Item = (usize, KEdge, Colour)> + '_ {
        subsets::subsets(self.n, self.k)
            .zip(self.table.iter())
            .enumerate()
            .filter_map(|(r, (m, s))| s.map(|c| (r, KEdge(m), c)))
    }

    /// Present edges that share exactly `k - 1` vertices with `e`.
    pub fn tight_neighbours(&self, e: KEdge) -> impl Iterator<Item = KEdge> + '_ {
        let outside = self.vertices().difference(e.set());
        e.iter().flat_map(move |drop| {
            let shell = e.mask() & !(1 << drop);
            outside
                .iter()
                .map(move |add| KEdge(shell | 1 << add))
                .filter(|f| self.is_present(*f))
        })
    }

    pub fn swap_colours(&self) -> ColouredKGraph {
        ColouredKGraph {
            n: self.n,
            k: self.k,
            table: self.table.iter().map(|s| s.map(Colour::swap)).collect(),
        }
    }

    fn check_shell(&self, s: VertexSet) -> Result<()> {
        if s.len() >= self.k {
            return Err(Error::InvalidInput(format!(
                "set of size {} has no neighbourhood in a {}-graph",
                s.len(),
                self.k
            )));
        }
        if !s.is_subset(self.vertices()) {
            return Err(Error::InvalidInput(format!("{s:?} is not inside [0, {})", self.n)));
        }
        Ok(())
    }

    /// `N(S)`: the `(k - |S|)`-sets `S'` disjoint from `S` with `S ∪ S'` present.
    pub fn neighbourhood(&self, s: VertexSet) -> Result<Vec<VertexSet>> {
        self.check_shell(s)?;
        let rest = self.vertices().difference(s);
        Ok(subsets::subsets_of(rest.mask(), self.k - s.len())
            .filter(|&ext| self.table[colex_rank_mask(ext | s.mask()) as usize].is_some())
            .map(VertexSet::from_mask)
            .collect())
    }

    /// `d(S) = |N(S)|`.
    pub fn degree(&self, s: VertexSet) -> Result<usize> {
        self.check_shell(s)?;
        let rest = self.vertices().difference(s);
        Ok(subsets::subsets_of(rest.mask(), self.k - s.len())
            .filter(|&ext| self.table[colex_rank_mask(ext | s.mask()) as usize].is_some())
            .count())
    }

    /// Degrees of every `i`-set, indexed by colex rank at level `i`.
    pub fn level_degrees(&self, i: usize) -> Vec<u64> {
        let mut deg = vec![0u64; binomial(self.n, i) as usize];
        for (_, e, _) in self.edges() {
            for sub in subsets::subsets_of(e.mask(), i) {
                deg[colex_rank_mask(sub) as usize] += 1;
            }
        }
        deg
    }

    /// `(μ, α)`-density: for each level `i in [1, k-1]`, at most `α·C(n,i)` sets
    /// of size `i` have degree below `μ·C(n-i, k-i)`, and each of those has
    /// degree zero.
    pub fn is_dense(&self, mu: f64, alpha: f64) -> bool {
        (1..self.k).all(|i| {
            let threshold = mu * binomial(self.n - i, self.k - i) as f64;
            let allowed = alpha * binomial(self.n, i) as f64;
            let mut exceptional = 0u64;
            for d in self.level_degrees(i) {
                if (d as f64) < threshold {
                    if d != 0 {
                        return false;
                    }
                    exceptional += 1;
                }
            }
            exceptional as f64 <= allowed
        })
    }

    /// `H[W]` with vertex indices preserved: edges leaving `W` become Absent.
    pub fn restrict(&self, w: VertexSet) -> ColouredKGraph {
        let mut table = self.table.clone();
        for (slot, m) in table.iter_mut().zip(subsets::subsets(self.n, self.k)) {
            if m & !w.mask() != 0 {
                *slot = None;
            }
        }
        ColouredKGraph {
            n: self.n,
            k: self.k,
            table,
        }
    }

    pub(crate) fn set_slot(&mut self, rank: usize, value: Option<Colour>) {
        self.table[rank] = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn edge(v: &[usize]) -> KEdge {
        KEdge::from_set(vs(v))
    }

    /// Enumerates 3-subsets of {0..4} lexicographically, then sorts by the
    /// colex key (largest element first), independent of the bit trick.
    #[test]
    fn colex_rank_matches_enumeration() {
        let mut all = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    all.push([a, b, c]);
                }
            }
        }
        all.sort_by_key(|s| (s[2], s[1], s[0]));
        let pos = all.iter().position(|s| *s == [1, 2, 3]).unwrap();
        assert_eq!(pos, 3);
        assert_eq!(colex_rank(edge(&[1, 2, 3]), 5, 3).unwrap(), 3);
        assert_eq!(colex_rank(edge(&[0, 1, 2]), 5, 3).unwrap(), 0);
        for (r, s) in all.iter().enumerate() {
            assert_eq!(colex_rank(edge(s), 5, 3).unwrap(), r as u64);
        }
    }

    #[test]
    fn colex_round_trip_n7_k3() {
        for r in 0..binomial(7, 3) {
            let e = colex_unrank(r, 7, 3).unwrap();
            assert_eq!(colex_rank(e, 7, 3).unwrap(), r);
        }
    }

    #[test]
    fn malformed_edges_are_rejected() {
        assert!(KEdge::new(&[2, 1, 3], 5, 3).is_err());
        assert!(KEdge::new(&[1, 2], 5, 3).is_err());
        assert!(KEdge::new(&[1, 2, 5], 5, 3).is_err());
        assert!(colex_rank(edge(&[0, 1]), 5, 3).is_err());
        assert!(colex_unrank(binomial(5, 3), 5, 3).is_err());
    }

    #[test]
    fn neighbourhood_complete() {
        let g = ColouredKGraph::complete(8, 3, Colour::Red).unwrap();
        let nb = g.neighbourhood(vs(&[0, 1])).unwrap();
        assert_eq!(nb.len(), 6);
        assert!(nb.iter().all(|s| s.len() == 1 && s.is_disjoint(vs(&[0, 1]))));
        assert_eq!(g.degree(vs(&[0, 1])).unwrap(), 6);

        let mut g2 = g.clone();
        g2.set_slot(g.rank(edge(&[0, 1, 2])), None);
        assert_eq!(g2.degree(vs(&[0, 1])).unwrap(), 5);
        assert!(g.degree(vs(&[0, 1, 2])).is_err());
    }

    #[test]
    fn reading_absent_colour_is_an_error() {
        let g = ColouredKGraph::empty(5, 3).unwrap();
        assert_eq!(g.colour(edge(&[0, 1, 2])), Err(Error::AbsentEdge(edge(&[0, 1, 2]))));
    }

    #[test]
    fn density_examples() {
        let complete = ColouredKGraph::complete(10, 3, Colour::Blue).unwrap();
        assert!(complete.is_dense(1.0, 0.0));
        assert!(complete.is_dense(0.3, 0.7));

        let no_zero = ColouredKGraph::from_fn(10, 3, |e| (!e.contains(0)).then_some(Colour::Red)).unwrap();
        assert!(no_zero.is_dense(0.5, 0.25));
        assert!(!no_zero.is_dense(0.5, 0.1));

        let mut minus_one = complete.clone();
        minus_one.set_slot(0, None);
        assert!(!minus_one.is_dense(0.9, 0.0));
    }

    #[test]
    fn restrict_keeps_indices() {
        let g = ColouredKGraph::complete(7, 3, Colour::Red).unwrap();
        assert_eq!(g.restrict(g.vertices()), g);
        let w = vs(&[1, 4, 6]);
        let r = g.restrict(w);
        assert_eq!(r.n(), 7);
        assert_eq!(r.edge_count(), 1);
        assert!(r.is_present(edge(&[1, 4, 6])));
    }

    #[test]
    fn tight_neighbours_share_k_minus_one() {
        let g = ColouredKGraph::complete(6, 3, Colour::Red).unwrap();
        let e = edge(&[0, 2, 4]);
        let nb: Vec<KEdge> = g.tight_neighbours(e).collect();
        assert_eq!(nb.len(), 3 * 3);
        assert!(nb.iter().all(|f| f.intersection_size(e) == 2));
    }
}
