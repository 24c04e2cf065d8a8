//! Triangulations of closed tight pseudo-walks.
//!
//! The direct construction builds `k` concentric rings around a centre edge:
//! ring 0 is the walk itself, ring `r` carries `z_1..z_r ∪ S_{i,r}` and the
//! centre carries `z_1..z_k`. Long walks are split in half by a bridge and the
//! two triangulations are glued along the bridge.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::graph::{rotation_from_triangles, PlaneGraph};
use crate::error::{Error, Result};
use crate::kgraph::{ColouredKGraph, Colour, KEdge, VertexSet};
use crate::subsets::smallest_bits;
use crate::walks::{self, TightPseudoWalk};

pub const DEFAULT_THRESHOLD: usize = 64;

/// A nearly triangulated plane graph with a map `phi` from its vertices to
/// edges of the host graph; the outer cycle realises the walk position by position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub plane: PlaneGraph,
    pub phi: Vec<KEdge>,
    /// Bridge splits performed (walks longer than the threshold).
    pub case_b_splits: usize,
    /// Splits along a chord or short detour after the ring construction ran out of apexes.
    pub shortcut_splits: usize,
    /// Depth of the split recursion; 0 when the ring construction applied directly.
    pub depth: usize,
}

impl Triangulation {
    pub fn outer_cycle(&self) -> &[usize] {
        &self.plane.outer_cycle
    }

    /// Every problem that makes this an invalid triangulation of `walk` in `graph`.
    pub fn check(&self, graph: &ColouredKGraph, walk: &TightPseudoWalk) -> std::result::Result<(), String> {
        self.plane.check()?;
        if self.phi.len() != self.plane.vertex_count() {
            return Err("phi does not cover every vertex".into());
        }
        let outer = self.outer_cycle();
        if outer.len() != walk.len() {
            return Err(format!("outer cycle has length {}, walk has {}", outer.len(), walk.len()));
        }
        for (i, (&x, &e)) in outer.iter().zip(&walk.edges).enumerate() {
            if self.phi[x] != e {
                return Err(format!("phi(x_{}) = {} but the walk has {}", i + 1, self.phi[x], e));
            }
        }
        if let Some(e) = self.phi.iter().find(|&&e| !graph.is_present(e)) {
            return Err(format!("phi image {e} is not an edge of the host graph"));
        }
        let need = graph.k() - 1;
        for (u, v) in self.plane.edges() {
            if self.phi[u].intersection_size(self.phi[v]) < need {
                return Err(format!("plane edge {u}-{v} maps to {} and {}", self.phi[u], self.phi[v]));
            }
        }
        Ok(())
    }

    pub fn to_export(&self, graph: &ColouredKGraph) -> TriangulationExport {
        TriangulationExport {
            vertices: self
                .phi
                .iter()
                .enumerate()
                .map(|(id, &edge)| PlaneVertex {
                    id,
                    edge,
                    colour: graph.slot(edge),
                })
                .collect(),
            rotation: self.plane.rotation.clone(),
            faces: self.plane.faces.clone(),
            outer_face: self.plane.outer_face,
            outer_cycle: self.plane.outer_cycle.clone(),
            case_b_splits: self.case_b_splits,
            shortcut_splits: self.shortcut_splits,
            depth: self.depth,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneVertex {
    pub id: usize,
    pub edge: KEdge,
    pub colour: Option<Colour>,
}

/// JSON form, sufficient for re-validation elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationExport {
    pub vertices: Vec<PlaneVertex>,
    pub rotation: Vec<Vec<usize>>,
    pub faces: Vec<Vec<usize>>,
    pub outer_face: usize,
    pub outer_cycle: Vec<usize>,
    pub case_b_splits: usize,
    pub shortcut_splits: usize,
    pub depth: usize,
}

impl TriangulationExport {
    pub fn into_triangulation(self) -> Triangulation {
        Triangulation {
            plane: PlaneGraph {
                rotation: self.rotation,
                faces: self.faces,
                outer_face: self.outer_face,
                outer_cycle: self.outer_cycle,
            },
            phi: self.vertices.into_iter().map(|v| v.edge).collect(),
            case_b_splits: self.case_b_splits,
            shortcut_splits: self.shortcut_splits,
            depth: self.depth,
        }
    }
}

pub fn validate_triangulation(t: &Triangulation, graph: &ColouredKGraph, walk: &TightPseudoWalk) -> bool {
    t.check(graph, walk).is_ok()
}

/// Triangles plus outer cycle, before the rotation system is derived.
#[derive(Clone, Debug)]
struct Piece {
    phi: Vec<KEdge>,
    triangles: Vec<[usize; 3]>,
    outer: Vec<usize>,
    case_b_splits: usize,
    shortcut_splits: usize,
    depth: usize,
}

impl Piece {
    fn trivial(edges: &[KEdge]) -> Piece {
        Piece {
            phi: edges.to_vec(),
            triangles: Vec::new(),
            outer: (0..edges.len()).collect(),
            case_b_splits: 0,
            shortcut_splits: 0,
            depth: 0,
        }
    }
}

/// Grid sets, apexes and the ring triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rings {
    /// `s[j][i]` is `S_{i,j}` for `j in 0..k`.
    pub s: Vec<Vec<VertexSet>>,
    pub apexes: Vec<usize>,
}

impl Rings {
    /// `e_{i,r}` of ring `r` (ring 0 is the walk).
    pub fn ring_edge(&self, i: usize, r: usize) -> KEdge {
        let z: VertexSet = self.apexes[..r].iter().copied().collect();
        KEdge::from_set(z.union(self.s[r][i]))
    }

    pub fn centre(&self) -> KEdge {
        KEdge::from_set(self.apexes.iter().copied().collect())
    }
}

/// Chooses every `S_{i,j}` as the smallest elements of `S_{i,j-1} ∩ S_{i+1,j-1}`
/// and every apex as the smallest vertex common to all neighbourhoods.
pub fn ring_sets(graph: &ColouredKGraph, edges: &[KEdge]) -> Result<Rings> {
    let (m, k) = (edges.len(), graph.k());
    let mut s = vec![edges.iter().map(|e| e.set()).collect::<Vec<_>>()];
    for j in 1..k {
        let prev = &s[j - 1];
        let mut level = Vec::with_capacity(m);
        for i in 0..m {
            let common = prev[i].intersection(prev[(i + 1) % m]);
            if common.len() < k - j {
                return Err(Error::ConstructionFailed(format!(
                    "S_{{{},{}}} has only {} candidates",
                    i + 1,
                    j,
                    common.len()
                )));
            }
            level.push(VertexSet::from_mask(smallest_bits(common.mask(), k - j)));
        }
        s.push(level);
    }
    let mut apexes = Vec::with_capacity(k);
    let mut z = VertexSet::EMPTY;
    for j in 1..=k {
        let shells: Vec<VertexSet> = (0..m)
            .map(|i| z.union(if j < k { s[j][i] } else { VertexSet::EMPTY }))
            .collect();
        let blocked = shells.iter().fold(VertexSet::EMPTY, |acc, t| acc.union(*t));
        let zj = graph
            .vertices()
            .difference(blocked)
            .iter()
            .find(|&c| shells.iter().all(|t| graph.is_present(KEdge::from_mask(t.mask() | 1 << c))))
            .ok_or_else(|| Error::ConstructionFailed(format!("no admissible apex z_{j}")))?;
        apexes.push(zj);
        z.insert(zj);
    }
    Ok(Rings { s, apexes })
}

fn ring_piece(graph: &ColouredKGraph, edges: &[KEdge]) -> Result<Piece> {
    let (m, k) = (edges.len(), graph.k());
    if m <= 2 {
        return Ok(Piece::trivial(edges));
    }
    let rings = ring_sets(graph, edges)?;
    let id = |i: usize, r: usize| r * m + i % m;
    let centre = k * m;
    let mut phi = Vec::with_capacity(k * m + 1);
    for r in 0..k {
        for i in 0..m {
            phi.push(rings.ring_edge(i, r));
        }
    }
    phi.push(rings.centre());
    let mut triangles = Vec::with_capacity(2 * m * k);
    for r in 1..k {
        for i in 0..m {
            triangles.push([id(i, r - 1), id(i + 1, r - 1), id(i, r)]);
            triangles.push([id(i, r), id(i + 1, r - 1), id(i + 1, r)]);
        }
    }
    for i in 0..m {
        triangles.push([id(i, k - 1), id(i + 1, k - 1), centre]);
    }
    Ok(Piece {
        phi,
        triangles,
        outer: (0..m).collect(),
        case_b_splits: 0,
        shortcut_splits: 0,
        depth: 0,
    })
}

/// Disjoint union of `a` and `b` with `b`'s vertex `bv` identified with `a`'s
/// vertex `av` for each pair. Returns the merged piece (outer left empty) and
/// the map from `b`'s ids to merged ids.
fn glue(a: &Piece, b: &Piece, identify: &[(usize, usize)]) -> Result<(Piece, Vec<usize>)> {
    let mut map = vec![usize::MAX; b.phi.len()];
    for &(bv, av) in identify {
        if a.phi[av] != b.phi[bv] {
            return Err(Error::InvariantViolated(format!(
                "glued vertices carry different edges {} and {}",
                a.phi[av], b.phi[bv]
            )));
        }
        map[bv] = av;
    }
    let mut phi = a.phi.clone();
    for (bv, slot) in map.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = phi.len();
            phi.push(b.phi[bv]);
        }
    }
    let mut triangles = a.triangles.clone();
    triangles.extend(b.triangles.iter().map(|t| t.map(|v| map[v])));
    // rejects a piece that already joins two glued vertices by an inner edge
    rotation_from_triangles(phi.len(), &triangles)?;
    let piece = Piece {
        phi,
        triangles,
        outer: Vec::new(),
        case_b_splits: a.case_b_splits + b.case_b_splits,
        shortcut_splits: a.shortcut_splits + b.shortcut_splits,
        depth: 1 + a.depth.max(b.depth),
    };
    Ok((piece, map))
}

/// Ways to cut the closed walk along a short tight walk `P` from `e_b` to
/// `e_a` (a chord when `P` has no interior) so that both pieces
/// `e_a .. e_b P` and `e_b .. e_a P^-1` are strictly shorter than the walk.
/// Ordered by the length of the longer piece, then `(a, b)`.
fn shortcuts(graph: &ColouredKGraph, edges: &[KEdge]) -> Vec<(usize, usize, Vec<KEdge>)> {
    let m = edges.len();
    let mut found = Vec::new();
    for a in 0..m {
        for b in a + 2..m {
            if a == 0 && b == m - 1 {
                continue;
            }
            let interior = if edges[a].intersection_size(edges[b]) + 1 >= graph.k() {
                Vec::new()
            } else {
                match walks::shortest_walk(graph, edges[b], edges[a], None) {
                    Some(p) => p.edges[1..p.len() - 1].to_vec(),
                    None => continue,
                }
            };
            let longer = (b - a + 1 + interior.len()).max(m - (b - a) + 1 + interior.len());
            if longer < m {
                found.push((longer, a, b, interior));
            }
        }
    }
    found.sort_by_key(|(l, a, b, _)| (*l, *a, *b));
    found.into_iter().map(|(_, a, b, p)| (a, b, p)).collect()
}

fn has_chord(k: usize, edges: &[KEdge]) -> bool {
    let m = edges.len();
    (0..m).any(|a| (a + 2..m).any(|b| (b - a) <= m - 2 && edges[a].intersection_size(edges[b]) + 1 >= k))
}

/// Shortest sequence (at most `MAX_FLIPS`) of boundary flips after which the
/// walk has a chord. A flip replaces `e_i` by an edge tight with `e_{i-1}`,
/// `e_i` and `e_{i+1}`.
fn flip_sequence(graph: &ColouredKGraph, edges: &[KEdge]) -> Option<Vec<(usize, KEdge)>> {
    let m = edges.len();
    if m < 4 {
        return None;
    }
    let k = graph.k();
    let tight = |a: KEdge, b: KEdge| a.intersection_size(b) + 1 >= k;
    let mut seen: HashSet<Vec<KEdge>> = HashSet::from([edges.to_vec()]);
    let mut frontier = vec![(edges.to_vec(), Vec::new())];
    for _ in 0..MAX_FLIPS {
        let mut next_frontier = Vec::new();
        for (walk, seq) in &frontier {
            for i in 0..m {
                let (p, nx) = (walk[(i + m - 1) % m], walk[(i + 1) % m]);
                for h in graph.tight_neighbours(walk[i]) {
                    if !tight(h, p) || !tight(h, nx) {
                        continue;
                    }
                    let mut w = walk.clone();
                    w[i] = h;
                    if !seen.insert(w.clone()) {
                        continue;
                    }
                    let mut s: Vec<(usize, KEdge)> = seq.clone();
                    s.push((i, h));
                    if has_chord(k, &w) {
                        return Some(s);
                    }
                    next_frontier.push((w, s));
                }
            }
        }
        frontier = next_frontier;
    }
    None
}

/// Longest flip sequence searched.
const MAX_FLIPS: usize = 3;

/// Candidate cuts tried before giving up on a walk.
const SHORTCUT_TRIES: usize = 4;

struct Builder<'a> {
    graph: &'a ColouredKGraph,
    threshold: usize,
}

impl Builder<'_> {
    fn build(&self, edges: &[KEdge]) -> Result<Piece> {
        let m = edges.len();
        if m <= 2 {
            return Ok(Piece::trivial(edges));
        }
        if m > self.threshold && m >= 4 {
            // gluing fails when a piece already joins two vertices of the bridge
            if let Ok(p) = self.split_by_bridge(edges) {
                return Ok(p);
            }
        }
        self.rings_or_shortcut(edges)
    }

    /// Pieces that do not get shorter go straight to the ring construction,
    /// so the recursion always terminates.
    fn build_piece(&self, edges: &[KEdge], parent_len: usize) -> Result<Piece> {
        if edges.len() < parent_len {
            self.build(edges)
        } else {
            self.rings_or_shortcut(edges)
        }
    }

    /// The ring construction; when it runs out of apexes, a walk of length 3
    /// becomes a single triangle and longer walks are cut along a shortcut.
    fn rings_or_shortcut(&self, edges: &[KEdge]) -> Result<Piece> {
        self.fill(edges, true)
    }

    fn fill(&self, edges: &[KEdge], allow_flip: bool) -> Result<Piece> {
        let why = match ring_piece(self.graph, edges) {
            Ok(p) => return Ok(p),
            Err(Error::ConstructionFailed(why)) => why,
            Err(e) => return Err(e),
        };
        if edges.len() == 3 {
            return Ok(Piece {
                triangles: vec![[0, 1, 2]],
                shortcut_splits: 1,
                ..Piece::trivial(edges)
            });
        }
        let mut last = Error::ConstructionFailed(why);
        for (a, b, path) in shortcuts(self.graph, edges).into_iter().take(SHORTCUT_TRIES) {
            match self.split_by_shortcut(edges, a, b, &path) {
                Ok(p) => return Ok(p),
                Err(e) => last = e,
            }
        }
        if allow_flip {
            if let Some(seq) = flip_sequence(self.graph, edges) {
                return self.split_by_flips(edges, &seq);
            }
        }
        Err(last)
    }

    /// Replaces boundary edges one at a time by common neighbours of their
    /// boundary neighbours, fills the final walk (which has a chord), then
    /// restores each replaced `e_i` with triangles `e_{i-1} e_i h`, `e_i e_{i+1} h`.
    fn split_by_flips(&self, edges: &[KEdge], seq: &[(usize, KEdge)]) -> Result<Piece> {
        let m = edges.len();
        let mut walks = vec![edges.to_vec()];
        for &(i, h) in seq {
            let mut next = walks.last().unwrap().clone();
            next[i] = h;
            walks.push(next);
        }
        let mut piece = self.fill(walks.last().unwrap(), false)?;
        for (step, &(i, _)) in seq.iter().enumerate().rev() {
            let (prev, next) = (piece.outer[(i + m - 1) % m], piece.outer[(i + 1) % m]);
            let inner = piece.outer[i];
            let v = piece.phi.len();
            piece.phi.push(walks[step][i]);
            piece.triangles.push([prev, v, inner]);
            piece.triangles.push([v, next, inner]);
            piece.outer[i] = v;
        }
        rotation_from_triangles(piece.phi.len(), &piece.triangles)?;
        piece.shortcut_splits += seq.len();
        Ok(piece)
    }

    /// Glues `e_a .. e_b P` to `e_b .. e_a P^-1` along `e_b P e_a`. Both
    /// pieces are strictly shorter and never split by a bridge again.
    fn split_by_shortcut(&self, edges: &[KEdge], a: usize, b: usize, path: &[KEdge]) -> Result<Piece> {
        let m = edges.len();
        let l = path.len();
        let q1: Vec<KEdge> = edges[a..=b].iter().chain(path).copied().collect();
        let q2: Vec<KEdge> = edges[b..]
            .iter()
            .chain(&edges[..=a])
            .chain(path.iter().rev())
            .copied()
            .collect();
        let p1 = self.rings_or_shortcut(&q1)?;
        let p2 = self.rings_or_shortcut(&q2)?;
        // the shared walk e_b P e_a runs forwards in q1 from position b - a,
        // and backwards in q2 from position 0
        let (l1, l2) = (q1.len(), q2.len());
        let pairs: Vec<(usize, usize)> = (0..l + 2)
            .map(|t| {
                let in1 = (b - a + t) % l1;
                let in2 = (l2 - t) % l2;
                (p2.outer[in2], p1.outer[in1])
            })
            .collect();
        let (mut piece, map) = glue(&p1, &p2, &pairs)?;
        piece.outer = (0..m)
            .map(|p| {
                if (a..=b).contains(&p) {
                    p1.outer[p - a]
                } else if p > b {
                    map[p2.outer[p - b]]
                } else {
                    map[p2.outer[m - b + p]]
                }
            })
            .collect();
        piece.shortcut_splits += 1;
        Ok(piece)
    }

    /// Splits at `i* = floor(m/2)` with a bridge `e_{i*} f_1 .. f_{2k-2} e_1`:
    /// `Q1 = e_1 .. e_{i*} f_1 .. f_{2k-2}` and
    /// `Q2 = e_1 f_{2k-2} .. f_1 e_{i*} .. e_m`, glued along the bridge.
    fn split_by_bridge(&self, edges: &[KEdge]) -> Result<Piece> {
        let (m, k) = (edges.len(), self.graph.k());
        let istar = m / 2;
        let b = walks::bridge_with_apexes(self.graph, self.graph.vertices(), edges[istar - 1], edges[0])
            .map_err(|e| Error::ConstructionFailed(format!("bridge for the split failed: {e}")))?;
        let f = b.interior();
        debug_assert_eq!(f.len(), 2 * k - 2);
        let q1: Vec<KEdge> = edges[..istar].iter().chain(f).copied().collect();
        let q2: Vec<KEdge> = std::iter::once(edges[0])
            .chain(f.iter().rev().copied())
            .chain(edges[istar - 1..].iter().copied())
            .collect();
        let p1 = self.build_piece(&q1, m)?;
        let p2 = self.build_piece(&q2, m)?;
        let mut pairs = vec![(p2.outer[0], p1.outer[0])];
        for t in 1..2 * k {
            pairs.push((p2.outer[t], p1.outer[istar - 1 + 2 * k - 1 - t]));
        }
        let (mut piece, map) = glue(&p1, &p2, &pairs)?;
        piece.outer = p1.outer[..istar]
            .iter()
            .copied()
            .chain(p2.outer[2 * k..].iter().map(|&v| map[v]))
            .collect();
        piece.case_b_splits += 1;
        Ok(piece)
    }
}

/// Triangulation of a closed walk. Walks longer than `threshold` are split
/// by a bridge; otherwise the ring construction is used, falling back to a
/// split along a chord or a short detour when no apex is available.
pub fn triangulate(graph: &ColouredKGraph, walk: &TightPseudoWalk, threshold: usize) -> Result<Triangulation> {
    if !walk.closed {
        return Err(Error::PreconditionViolation("walk is not closed".into()));
    }
    walk.check(graph)
        .map_err(|e| Error::PreconditionViolation(format!("walk is not a closed tight pseudo-walk: {e}")))?;
    let piece = Builder { graph, threshold }.build(&walk.edges)?;
    finish(piece)
}

/// The ring construction alone, with no splitting of any kind.
pub fn triangulate_rings(graph: &ColouredKGraph, walk: &TightPseudoWalk) -> Result<Triangulation> {
    walk.check(graph)
        .map_err(|e| Error::PreconditionViolation(format!("walk is not a closed tight pseudo-walk: {e}")))?;
    finish(ring_piece(graph, &walk.edges)?)
}

fn finish(piece: Piece) -> Result<Triangulation> {
    let plane = PlaneGraph::from_triangles(piece.phi.len(), &piece.triangles, piece.outer)?;
    plane
        .check()
        .map_err(|e| Error::ConstructionFailed(format!("assembled plane graph is invalid: {e}")))?;
    Ok(Triangulation {
        plane,
        phi: piece.phi,
        case_b_splits: piece.case_b_splits,
        shortcut_splits: piece.shortcut_splits,
        depth: piece.depth,
    })
}
