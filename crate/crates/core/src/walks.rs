//! Tight pseudo-walks: validation, the length-`2k` bridge, and a BFS oracle.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgraph::{ColouredKGraph, Colour, KEdge, VertexSet};

/// A sequence of edges in which consecutive edges share at least `k - 1`
/// vertices. Repeated edges are allowed; length is the number of entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightPseudoWalk {
    pub closed: bool,
    pub edges: Vec<KEdge>,
}

impl TightPseudoWalk {
    pub fn open(edges: Vec<KEdge>) -> Self {
        TightPseudoWalk { closed: false, edges }
    }

    pub fn closed(edges: Vec<KEdge>) -> Self {
        TightPseudoWalk { closed: true, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first(&self) -> Option<KEdge> {
        self.edges.first().copied()
    }

    pub fn last(&self) -> Option<KEdge> {
        self.edges.last().copied()
    }

    /// 1-based, cyclic for closed walks.
    pub fn at(&self, i: usize) -> KEdge {
        let m = self.edges.len();
        self.edges[(i + m - 1) % m]
    }

    /// Consecutive pairs to check, including the wrap-around pair when closed.
    fn junctions(&self) -> impl Iterator<Item = (usize, KEdge, KEdge)> + '_ {
        let m = self.edges.len();
        let count = if self.closed && m > 0 { m } else { m.saturating_sub(1) };
        (0..count).map(move |i| (i, self.edges[i], self.edges[(i + 1) % m]))
    }

    /// Detailed check: every edge present in `graph`, every junction tight.
    pub fn check(&self, graph: &ColouredKGraph) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::InvalidInput("empty walk".into()));
        }
        for &e in &self.edges {
            if !graph.is_present(e) {
                return Err(Error::AbsentEdge(e));
            }
        }
        let need = graph.k() - 1;
        for (_, a, b) in self.junctions() {
            let found = a.intersection_size(b);
            if found < need {
                return Err(Error::IntersectionTooSmall { found, needed: need });
            }
        }
        Ok(())
    }

    pub fn colours(&self, graph: &ColouredKGraph) -> Result<Vec<Colour>> {
        self.edges.iter().map(|&e| graph.colour(e)).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        self.edges.iter().fold(VertexSet::EMPTY, |s, e| s.union(e.set()))
    }
}

pub fn validate_walk(graph: &ColouredKGraph, walk: &TightPseudoWalk) -> bool {
    walk.check(graph).is_ok()
}

/// Bridge walk together with the apexes `z_1..z_{k-1}` that were chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub walk: TightPseudoWalk,
    pub apexes: Vec<usize>,
}

impl Bridge {
    /// The inner edges `f_1 .. f_{k-1} f'_{k-1} .. f'_1`.
    pub fn interior(&self) -> &[KEdge] {
        let e = &self.walk.edges;
        &e[1..e.len() - 1]
    }
}

/// Smallest `z ∈ W` outside both shells with `shell_a + z` and `shell_b + z` present.
fn common_apex(graph: &ColouredKGraph, w: VertexSet, a: VertexSet, b: VertexSet) -> Option<usize> {
    w.difference(a.union(b)).iter().find(|&z| {
        graph.is_present(KEdge::from_mask(a.mask() | 1 << z)) && graph.is_present(KEdge::from_mask(b.mask() | 1 << z))
    })
}

/// `e1 f_1 .. f_{k-1} f'_{k-1} .. f'_1 e2` inside `G[W]`, choosing each apex
/// as the smallest admissible vertex.
pub fn bridge_with_apexes(graph: &ColouredKGraph, w: VertexSet, e1: KEdge, e2: KEdge) -> Result<Bridge> {
    let k = graph.k();
    for e in [e1, e2] {
        if !graph.is_edge_shape(e) {
            return Err(Error::InvalidInput(format!("{e} is not an edge of a {k}-graph on {}", graph.n())));
        }
        if !e.set().is_subset(w) {
            return Err(Error::PreconditionViolation(format!("{e} is not inside W")));
        }
        if !graph.is_present(e) {
            return Err(Error::AbsentEdge(e));
        }
    }
    let x = e1.vertices();
    let y = e2.vertices();
    let mut z = VertexSet::EMPTY;
    let mut apexes = Vec::with_capacity(k - 1);
    let mut forward = Vec::with_capacity(k - 1);
    let mut backward = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let xs: VertexSet = x[i..k - 1].iter().copied().collect();
        let ys: VertexSet = y[i..k - 1].iter().copied().collect();
        let sa = z.union(xs);
        let sb = z.union(ys);
        let zi = common_apex(graph, w, sa, sb).ok_or(Error::NoBridge { step: i + 1 })?;
        z.insert(zi);
        apexes.push(zi);
        forward.push(KEdge::from_mask(sa.mask() | 1 << zi));
        backward.push(KEdge::from_mask(sb.mask() | 1 << zi));
    }
    let mut edges = Vec::with_capacity(2 * k);
    edges.push(e1);
    edges.extend(forward);
    edges.extend(backward.into_iter().rev());
    edges.push(e2);
    Ok(Bridge {
        walk: TightPseudoWalk::open(edges),
        apexes,
    })
}

pub fn bridge(graph: &ColouredKGraph, w: VertexSet, e1: KEdge, e2: KEdge) -> Result<TightPseudoWalk> {
    bridge_with_apexes(graph, w, e1, e2).map(|b| b.walk)
}

/// Minimum number of edges in a tight pseudo-walk from `e1` to `e2`, by BFS
/// over present edges (optionally only those of one colour).
pub fn shortest_pseudo_walk(graph: &ColouredKGraph, e1: KEdge, e2: KEdge, same_colour_only: Option<Colour>) -> Option<usize> {
    let allowed = |e: KEdge| match (graph.slot(e), same_colour_only) {
        (None, _) => false,
        (Some(c), Some(want)) => c == want,
        (Some(_), None) => true,
    };
    if !allowed(e1) || !allowed(e2) {
        return None;
    }
    let mut dist = vec![usize::MAX; graph.slot_count()];
    let target = graph.rank(e2);
    dist[graph.rank(e1)] = 1;
    let mut queue = VecDeque::from([e1]);
    while let Some(e) = queue.pop_front() {
        let d = dist[graph.rank(e)];
        if graph.rank(e) == target {
            return Some(d);
        }
        for f in graph.tight_neighbours(e) {
            let r = graph.rank(f);
            if dist[r] == usize::MAX && allowed(f) {
                dist[r] = d + 1;
                queue.push_back(f);
            }
        }
    }
    None
}

/// A shortest tight pseudo-walk from `e1` to `e2` through present edges,
/// preferring smaller colex ranks among equal-length walks.
pub fn shortest_walk(graph: &ColouredKGraph, e1: KEdge, e2: KEdge, same_colour_only: Option<Colour>) -> Option<TightPseudoWalk> {
    let allowed = |e: KEdge| match (graph.slot(e), same_colour_only) {
        (None, _) => false,
        (Some(c), Some(want)) => c == want,
        (Some(_), None) => true,
    };
    if !allowed(e1) || !allowed(e2) {
        return None;
    }
    let mut parent: Vec<Option<KEdge>> = vec![None; graph.slot_count()];
    let start = graph.rank(e1);
    parent[start] = Some(e1);
    let mut queue = VecDeque::from([e1]);
    while let Some(e) = queue.pop_front() {
        if e == e2 {
            let mut path = vec![e2];
            let mut cur = e2;
            while cur != e1 {
                cur = parent[graph.rank(cur)].unwrap();
                path.push(cur);
            }
            path.reverse();
            return Some(TightPseudoWalk::open(path));
        }
        let mut nbrs: Vec<KEdge> = graph.tight_neighbours(e).collect();
        nbrs.sort_unstable();
        for f in nbrs {
            let r = graph.rank(f);
            if parent[r].is_none() && allowed(f) {
                parent[r] = Some(e);
                queue.push_back(f);
            }
        }
    }
    None
}

/// `P P'` as one sequence; closing additionally requires the outer ends to be tight.
pub fn concatenate(p: &TightPseudoWalk, q: &TightPseudoWalk, close: bool, k: usize) -> Result<TightPseudoWalk> {
    let (Some(p_last), Some(q_first)) = (p.last(), q.first()) else {
        return Err(Error::InvalidInput("cannot concatenate an empty walk".into()));
    };
    let need = k - 1;
    let found = p_last.intersection_size(q_first);
    if found < need {
        return Err(Error::IntersectionTooSmall { found, needed: need });
    }
    if close {
        let found = p.edges[0].intersection_size(*q.edges.last().unwrap());
        if found < need {
            return Err(Error::IntersectionTooSmall { found, needed: need });
        }
    }
    let mut edges = p.edges.clone();
    edges.extend_from_slice(&q.edges);
    Ok(TightPseudoWalk { closed: close, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(v: &[usize]) -> KEdge {
        KEdge::from_set(v.iter().copied().collect())
    }

    #[test]
    fn validation_basics() {
        let g = ColouredKGraph::complete(6, 3, Colour::Red).unwrap();
        assert!(validate_walk(&g, &TightPseudoWalk::open(vec![edge(&[0, 1, 2])])));
        assert!(!validate_walk(&g, &TightPseudoWalk::open(vec![edge(&[0, 1, 2]), edge(&[3, 4, 5])])));
        assert!(validate_walk(&g, &TightPseudoWalk::closed(vec![edge(&[0, 1, 2])])));
        let sparse = ColouredKGraph::from_edges(6, 3, None, [(edge(&[0, 1, 2]), Colour::Red)]).unwrap();
        assert!(!validate_walk(&sparse, &TightPseudoWalk::open(vec![edge(&[0, 1, 2]), edge(&[0, 1, 3])])));
    }

    #[test]
    fn bridge_on_complete_k8() {
        let g = ColouredKGraph::complete(8, 3, Colour::Red).unwrap();
        let b = bridge_with_apexes(&g, g.vertices(), edge(&[0, 1, 2]), edge(&[3, 4, 5])).unwrap();
        assert_eq!(b.walk.len(), 6);
        assert!(validate_walk(&g, &b.walk));
        assert_eq!(b.walk.first(), Some(edge(&[0, 1, 2])));
        assert_eq!(b.walk.last(), Some(edge(&[3, 4, 5])));
        // N({0,1}) ∩ N({3,4}) already contains 2
        assert_eq!(b.apexes[0], 2);
        assert_eq!(b.walk.edges[1], edge(&[0, 1, 2]));
        assert_eq!(b.interior().len(), 4);
    }

    #[test]
    fn bridge_to_itself() {
        let g = ColouredKGraph::complete(7, 4, Colour::Blue).unwrap();
        let e = edge(&[1, 3, 5, 6]);
        let w = bridge(&g, g.vertices(), e, e).unwrap();
        assert_eq!(w.len(), 8);
        assert!(validate_walk(&g, &w));
    }

    #[test]
    fn bridge_fails_without_common_apex() {
        let g = ColouredKGraph::from_edges(
            7,
            3,
            None,
            [(edge(&[0, 1, 2]), Colour::Red), (edge(&[3, 4, 5]), Colour::Red)],
        )
        .unwrap();
        let err = bridge(&g, g.vertices(), edge(&[0, 1, 2]), edge(&[3, 4, 5])).unwrap_err();
        assert_eq!(err, Error::NoBridge { step: 1 });
    }

    #[test]
    fn bridge_respects_w() {
        let g = ColouredKGraph::complete(9, 3, Colour::Red).unwrap();
        let w: VertexSet = [0, 1, 2, 5, 6, 7, 8].into_iter().collect();
        let walk = bridge(&g, w, edge(&[0, 1, 2]), edge(&[6, 7, 8])).unwrap();
        assert!(walk.vertices().is_subset(w));
        assert!(bridge(&g, w, edge(&[0, 1, 3]), edge(&[6, 7, 8])).is_err());
    }

    #[test]
    fn shortest_walks() {
        let g = ColouredKGraph::complete(7, 3, Colour::Red).unwrap();
        let e = edge(&[0, 1, 2]);
        assert_eq!(shortest_pseudo_walk(&g, e, e, None), Some(1));
        assert_eq!(shortest_pseudo_walk(&g, e, edge(&[0, 1, 3]), None), Some(2));
        assert_eq!(shortest_pseudo_walk(&g, e, edge(&[4, 5, 6]), None), Some(4));

        // an isolated red edge among blue ones
        let mut h = ColouredKGraph::complete(6, 3, Colour::Blue).unwrap();
        h.set_slot(h.rank(edge(&[0, 1, 2])), Some(Colour::Red));
        h.set_slot(h.rank(edge(&[3, 4, 5])), Some(Colour::Red));
        assert_eq!(shortest_pseudo_walk(&h, edge(&[0, 1, 2]), edge(&[3, 4, 5]), Some(Colour::Red)), None);
        assert_eq!(shortest_pseudo_walk(&h, edge(&[0, 1, 2]), edge(&[3, 4, 5]), None), Some(4));

        let path = shortest_walk(&g, e, edge(&[4, 5, 6]), None).unwrap();
        assert_eq!(path.len(), 4);
        assert!(validate_walk(&g, &path));
        assert_eq!(path.last(), Some(edge(&[4, 5, 6])));
        assert!(shortest_walk(&h, edge(&[0, 1, 2]), edge(&[3, 4, 5]), Some(Colour::Red)).is_none());
    }

    #[test]
    fn concatenation() {
        let g = ColouredKGraph::complete(9, 3, Colour::Red).unwrap();
        let (a, b) = (edge(&[0, 1, 2]), edge(&[5, 7, 8]));
        let p = bridge(&g, g.vertices(), a, b).unwrap();
        let q = bridge(&g, g.vertices(), b, a).unwrap();
        let c = concatenate(&p, &q, true, 3).unwrap();
        assert!(c.closed);
        assert_eq!(c.len(), 12);
        assert!(validate_walk(&g, &c));

        let x = TightPseudoWalk::open(vec![a]);
        let y = TightPseudoWalk::open(vec![edge(&[3, 4, 5])]);
        assert_eq!(
            concatenate(&x, &y, false, 3),
            Err(Error::IntersectionTooSmall { found: 0, needed: 2 })
        );
    }

    #[test]
    fn walk_json_shape() {
        let w = TightPseudoWalk::closed(vec![edge(&[0, 1, 2]), edge(&[0, 1, 3])]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"closed":true,"edges":[[0,1,2],[0,1,3]]}"#);
        assert_eq!(serde_json::from_str::<TightPseudoWalk>(&s).unwrap(), w);
    }
}
