//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's algorithms; only its data types.
#![allow(dead_code)]

use std::collections::VecDeque;

use tightcover::plane::PlaneGraph;
use tightcover::{ColouredKGraph, Colour, KEdge};

/// Every `k`-subset of `0..n` in colex order, by trying all masks.
pub fn all_k_sets(n: usize, k: usize) -> Vec<KEdge> {
    let mut v: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() as usize == k).collect();
    v.sort_unstable();
    v.into_iter().map(KEdge::from_mask).collect()
}

/// Component labels by breadth-first search over same-coloured edges
/// meeting in `k - 1` vertices, numbered by first appearance in colex order.
pub fn bfs_components(g: &ColouredKGraph) -> Vec<Option<usize>> {
    let edges = all_k_sets(g.n(), g.k());
    let k = g.k();
    let mut label: Vec<Option<usize>> = vec![None; edges.len()];
    let mut next = 0;
    for s in 0..edges.len() {
        let Some(c) = g.slot(edges[s]) else { continue };
        if label[s].is_some() {
            continue;
        }
        label[s] = Some(next);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in 0..edges.len() {
                if label[y].is_none()
                    && g.slot(edges[y]) == Some(c)
                    && (edges[x].mask() & edges[y].mask()).count_ones() as usize == k - 1
                {
                    label[y] = Some(next);
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Vertices reachable from `start` through vertices of colour `c`.
pub fn plane_reach(plane: &PlaneGraph, colour: &[Colour], start: usize, c: Colour) -> Vec<bool> {
    let mut seen = vec![false; plane.rotation.len()];
    if colour[start] != c {
        return seen;
    }
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &plane.rotation[u] {
            if colour[w] == c && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// `walk` is a walk in `plane` of colour `c` from `a` to `b`.
pub fn is_mono_walk(plane: &PlaneGraph, colour: &[Colour], walk: &[usize], c: Colour, a: usize, b: usize) -> bool {
    walk.first() == Some(&a)
        && walk.last() == Some(&b)
        && walk.iter().all(|&v| colour[v] == c)
        && walk.windows(2).all(|p| plane.rotation[p[0]].contains(&p[1]))
}

/// Shortest number of edges in a tight pseudo-walk from `a` to `b` (BFS over all present edges).
pub fn shortest_len(g: &ColouredKGraph, a: KEdge, b: KEdge) -> Option<usize> {
    let edges: Vec<KEdge> = all_k_sets(g.n(), g.k()).into_iter().filter(|&e| g.slot(e).is_some()).collect();
    let idx = |e: KEdge| edges.iter().position(|&f| f == e);
    let (s, t) = (idx(a)?, idx(b)?);
    let mut dist = vec![usize::MAX; edges.len()];
    dist[s] = 1;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            return Some(dist[x]);
        }
        for y in 0..edges.len() {
            if dist[y] == usize::MAX && (edges[x].mask() & edges[y].mask()).count_ones() as usize + 1 >= g.k() {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    None
}
