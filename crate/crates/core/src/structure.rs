//! Crossing witnesses on closed tight pseudo-walks.
//!
//! Let `Q = e_1 .. e_m` be closed and let `e_1`, `e_i` have colour `c` but lie
//! in different `c`-components. Then some edge of the opposite colour among
//! `e_2 .. e_{i-1}` shares a tight component with one among `e_{i+1} .. e_m`.
//! Positions here are 1-based, as in the statement.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::components::{tight_components, ComponentId, TightComponentLabeling};
use crate::error::{Error, Result};
use crate::generators;
use crate::kgraph::{ColouredKGraph, Colour, KEdge};
use crate::plane::{self, hex_walk};
use crate::subsets::binomial;
use crate::walks::TightPseudoWalk;

/// Edges at positions `a` (in `2..i`) and `b` (in `i+1..=m`) share a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingWitness {
    pub a: usize,
    pub b: usize,
    pub component: ComponentId,
    pub colour: Colour,
}

impl CrossingWitness {
    /// Re-checks positions, colours and the shared component.
    pub fn check(&self, graph: &ColouredKGraph, labeling: &TightComponentLabeling, walk: &TightPseudoWalk, i: usize) -> bool {
        let m = walk.len();
        if !(2..i).contains(&self.a) || !(i + 1..=m).contains(&self.b) {
            return false;
        }
        let (ea, eb) = (walk.at(self.a), walk.at(self.b));
        graph.slot(ea) == Some(self.colour)
            && graph.slot(eb) == Some(self.colour)
            && labeling.component_of(ea) == Some(self.component)
            && labeling.component_of(eb) == Some(self.component)
    }
}

/// Checks the lemma's hypothesis for `(walk, i, colour)`.
pub fn check_precondition(
    graph: &ColouredKGraph,
    labeling: &TightComponentLabeling,
    walk: &TightPseudoWalk,
    i: usize,
    colour: Colour,
) -> Result<()> {
    if !walk.closed {
        return Err(Error::PreconditionViolation("walk is not closed".into()));
    }
    walk.check(graph)
        .map_err(|e| Error::PreconditionViolation(format!("not a tight pseudo-walk: {e}")))?;
    let m = walk.len();
    if !(2..m).contains(&i) {
        return Err(Error::PreconditionViolation(format!("need 1 < i < m, got i = {i}, m = {m}")));
    }
    let (e1, ei) = (walk.at(1), walk.at(i));
    if graph.slot(e1) != Some(colour) || graph.slot(ei) != Some(colour) {
        return Err(Error::PreconditionViolation(format!("e_1 and e_{i} must both be {colour}")));
    }
    if labeling.component_of(e1) == labeling.component_of(ei) {
        return Err(Error::PreconditionViolation(format!("e_1 and e_{i} lie in the same {colour} component")));
    }
    Ok(())
}

/// Exhaustive scan; returns the lexicographically first `(a, b)`.
pub fn find_crossing_witness(
    graph: &ColouredKGraph,
    labeling: &TightComponentLabeling,
    walk: &TightPseudoWalk,
    i: usize,
    colour_of_endpoints: Colour,
) -> Result<CrossingWitness> {
    check_precondition(graph, labeling, walk, i, colour_of_endpoints)?;
    let other = colour_of_endpoints.swap();
    let m = walk.len();
    for a in 2..i {
        let ea = walk.at(a);
        if graph.slot(ea) != Some(other) {
            continue;
        }
        let ca = labeling.component_of(ea);
        for b in i + 1..=m {
            let eb = walk.at(b);
            if graph.slot(eb) == Some(other) && labeling.component_of(eb) == ca {
                return Ok(CrossingWitness {
                    a,
                    b,
                    component: ca.unwrap(),
                    colour: other,
                });
            }
        }
    }
    Err(Error::NoWitness)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProofCase {
    /// No `c`-coloured edge strictly between `e_1` and `e_i`: triangulate and trace.
    A,
    /// Splice a walk of the opposite colour over a `c`-coloured edge and recurse.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub walk: TightPseudoWalk,
    pub i: usize,
    /// `c`-coloured edges among `e_2 .. e_{i-1}`.
    pub s: usize,
    pub case: ProofCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructiveWitness {
    pub witness: CrossingWitness,
    pub trace: Vec<TraceStep>,
}

impl ConstructiveWitness {
    pub fn recursion_steps(&self) -> usize {
        self.trace.iter().filter(|t| t.case == ProofCase::B).count()
    }
}

fn count_between(graph: &ColouredKGraph, walk: &TightPseudoWalk, i: usize, colour: Colour) -> usize {
    (2..i).filter(|&p| graph.slot(walk.at(p)) == Some(colour)).count()
}

/// Case A on `walk`: the position (1-based, in `i+1..=m`) of an edge joined
/// to `e_2` by a walk of the opposite colour, together with that walk.
fn case_a(
    graph: &ColouredKGraph,
    walk: &TightPseudoWalk,
    i: usize,
    colour: Colour,
    threshold: usize,
) -> Result<(usize, Vec<KEdge>)> {
    let t = plane::triangulate(graph, walk, threshold)?;
    let vertex_colours = t
        .phi
        .iter()
        .map(|&e| graph.colour(e).map(|c| if c == colour { Colour::Red } else { Colour::Blue }))
        .collect::<Result<Vec<_>>>()?;
    let hex = hex_walk(&t.plane, &vertex_colours)?;
    let m = walk.len();
    if hex.i_star <= i || hex.i_star > m {
        return Err(Error::InvariantViolated(format!(
            "Hex trace ended at x_{} although e_1 and e_{i} are in different components",
            hex.i_star
        )));
    }
    let path = hex.blue_walk.iter().map(|&v| t.phi[v]).collect();
    Ok((hex.i_star, path))
}

/// The inductive proof as an algorithm. Each step either finishes through
/// Case A, or finds `j2` (first `c`-edge in a different component from
/// `e_1`) and `j1` (last `c`-edge before it), runs Case A on the walk rotated
/// to start at `e_{j1}`, and splices the resulting opposite-colour walk into
/// `Q` so that the count `s` strictly drops.
pub fn constructive_crossing_witness(
    graph: &ColouredKGraph,
    labeling: &TightComponentLabeling,
    walk: &TightPseudoWalk,
    i: usize,
    colour_of_endpoints: Colour,
    threshold: usize,
) -> Result<ConstructiveWitness> {
    check_precondition(graph, labeling, walk, i, colour_of_endpoints)?;
    let c = colour_of_endpoints;
    let first_component = labeling.component_of(walk.at(1));
    let mut cur = walk.clone();
    let mut cur_i = i;
    // original (1-based) position standing in for each current position
    let mut origin: Vec<usize> = (1..=walk.len()).collect();
    let mut trace = Vec::new();

    loop {
        let s = count_between(graph, &cur, cur_i, c);
        let m = cur.len();
        if s == 0 {
            trace.push(TraceStep { walk: cur.clone(), i: cur_i, s, case: ProofCase::A });
            let (b, _) = case_a(graph, &cur, cur_i, c, threshold)?;
            return finish(graph, labeling, walk, i, origin[1], origin[b - 1], trace);
        }
        trace.push(TraceStep { walk: cur.clone(), i: cur_i, s, case: ProofCase::B });
        let j2 = (3..=cur_i)
            .find(|&p| graph.slot(cur.at(p)) == Some(c) && labeling.component_of(cur.at(p)) != first_component)
            .ok_or_else(|| Error::InvariantViolated("no j2".into()))?;
        let j1 = (1..=j2 - 2)
            .rev()
            .find(|&p| graph.slot(cur.at(p)) == Some(c))
            .ok_or_else(|| Error::InvariantViolated("no j1".into()))?;
        if (j1 + 1..j2).any(|p| graph.slot(cur.at(p)) == Some(c)) {
            return Err(Error::InvariantViolated("edges between j1 and j2 are not all of the opposite colour".into()));
        }
        let rotated = TightPseudoWalk::closed((0..m).map(|t| cur.edges[(j1 - 1 + t) % m]).collect());
        let (b_rot, path) = case_a(graph, &rotated, j2 - j1 + 1, c, threshold)?;
        let f_pos = (j1 - 1 + b_rot - 1) % m + 1;
        if (cur_i + 1..=m).contains(&f_pos) {
            return finish(graph, labeling, walk, i, origin[j1], origin[f_pos - 1], trace);
        }
        let interior = &path[1..path.len() - 1];
        let stand_in = origin[j1];
        let mut edges = Vec::with_capacity(m + interior.len());
        let mut next_origin = Vec::with_capacity(m + interior.len());
        let new_i;
        if (2..j1).contains(&f_pos) {
            // e_1 .. e_f (reversed interior) e_{j1+1} .. e_m
            edges.extend_from_slice(&cur.edges[..f_pos]);
            next_origin.extend_from_slice(&origin[..f_pos]);
            edges.extend(interior.iter().rev());
            next_origin.extend(std::iter::repeat_n(stand_in, interior.len()));
            edges.extend_from_slice(&cur.edges[j1..]);
            next_origin.extend_from_slice(&origin[j1..]);
            new_i = cur_i - (j1 - f_pos) + interior.len();
        } else if (j2 + 1..cur_i).contains(&f_pos) {
            // e_1 .. e_{j1+1} (interior) e_f .. e_m
            edges.extend_from_slice(&cur.edges[..=j1]);
            next_origin.extend_from_slice(&origin[..=j1]);
            edges.extend_from_slice(interior);
            next_origin.extend(std::iter::repeat_n(stand_in, interior.len()));
            edges.extend_from_slice(&cur.edges[f_pos - 1..]);
            next_origin.extend_from_slice(&origin[f_pos - 1..]);
            new_i = cur_i - (f_pos - j1 - 2) + interior.len();
        } else {
            return Err(Error::InvariantViolated(format!("Case A returned position {f_pos}")));
        }
        let next = TightPseudoWalk::closed(edges);
        let next_s = count_between(graph, &next, new_i, c);
        if next.at(new_i) != cur.at(cur_i) || next_s >= s {
            return Err(Error::InvariantViolated("splice did not reduce the count".into()));
        }
        cur = next;
        cur_i = new_i;
        origin = next_origin;
    }
}

fn finish(
    graph: &ColouredKGraph,
    labeling: &TightComponentLabeling,
    walk: &TightPseudoWalk,
    i: usize,
    a: usize,
    b: usize,
    trace: Vec<TraceStep>,
) -> Result<ConstructiveWitness> {
    let colour = graph.colour(walk.at(a))?;
    let component = labeling.component_of(walk.at(a)).ok_or(Error::NoComponent)?;
    let witness = CrossingWitness { a, b, component, colour };
    if !witness.check(graph, labeling, walk, i) {
        return Err(Error::InvariantViolated(format!("constructed witness {witness:?} does not check")));
    }
    Ok(ConstructiveWitness { witness, trace })
}

/// A qualifying walk with no witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub walk: TightPseudoWalk,
    pub i: usize,
    pub colour: Colour,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub max_len: usize,
    pub instances_checked: u64,
    pub witnesses_found: u64,
    pub counterexample_count: u64,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<ConstructiveWitness>>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.counterexample_count == 0
    }

    pub fn merge(&mut self, other: LemmaReport) {
        self.instances_checked += other.instances_checked;
        self.witnesses_found += other.witnesses_found;
        self.counterexample_count += other.counterexample_count;
        self.counterexamples.extend(other.counterexamples);
    }
}

/// Largest edge count accepted by the exhaustive check.
pub const EXHAUSTIVE_LIMIT: u64 = 300;
/// Counterexamples reconstructed per report.
pub const MAX_REPORTED: usize = 10;

/// Walk counts from one start edge: `layers[t][e]` maps the set of
/// opposite-colour components met strictly inside the walk to the number of
/// walks of `t + 1` edges from the start to `e`.
struct WalkCounts {
    layers: Vec<Vec<HashMap<u64, u64>>>,
}

struct Exhaustive<'a> {
    graph: &'a ColouredKGraph,
    labeling: &'a TightComponentLabeling,
    edges: Vec<KEdge>,
    colour: Vec<Colour>,
    /// Bit of the component among components of the same colour.
    bit: Vec<u32>,
    /// Adjacency including the edge itself (a walk may repeat an edge).
    adj: Vec<Vec<usize>>,
}

impl<'a> Exhaustive<'a> {
    fn new(graph: &'a ColouredKGraph, labeling: &'a TightComponentLabeling) -> Result<Self> {
        let edges: Vec<KEdge> = graph.edges().map(|(_, e, _)| e).collect();
        let colour: Vec<Colour> = graph.edges().map(|(_, _, c)| c).collect();
        let mut index = vec![usize::MAX; graph.slot_count()];
        for (x, e) in edges.iter().enumerate() {
            index[graph.rank(*e)] = x;
        }
        let mut next_bit = [0u32; 2];
        let mut bit_of_component = vec![0u32; labeling.len()];
        for info in labeling.components() {
            let slot = &mut next_bit[info.colour.index()];
            if *slot >= 64 {
                return Err(Error::TooLarge(format!("more than 64 {} components", info.colour)));
            }
            bit_of_component[info.id.index()] = *slot;
            *slot += 1;
        }
        let bit = edges
            .iter()
            .map(|&e| bit_of_component[labeling.component_of(e).unwrap().index()])
            .collect();
        let adj = edges
            .iter()
            .map(|&e| {
                let mut nb: Vec<usize> = graph.tight_neighbours(e).map(|f| index[graph.rank(f)]).collect();
                nb.push(index[graph.rank(e)]);
                nb.sort_unstable();
                nb
            })
            .collect();
        Ok(Exhaustive { graph, labeling, edges, colour, bit, adj })
    }

    /// Interior mask contribution of edge `x` for walks whose endpoints have colour `c`.
    fn contribution(&self, x: usize, c: Colour) -> u64 {
        if self.colour[x] == c {
            0
        } else {
            1 << self.bit[x]
        }
    }

    fn counts_from(&self, start: usize, max_edges: usize) -> WalkCounts {
        let c = self.colour[start];
        let n = self.edges.len();
        let mut layers = vec![vec![HashMap::new(); n]];
        layers[0][start].insert(0u64, 1u64);
        for t in 1..max_edges {
            let mut next: Vec<HashMap<u64, u64>> = vec![HashMap::new(); n];
            for (x, masks) in layers[t - 1].iter().enumerate() {
                if masks.is_empty() {
                    continue;
                }
                // x turns into an interior edge once the walk moves on, unless it is the start
                let add = if t >= 2 { self.contribution(x, c) } else { 0 };
                for (&mask, &count) in masks {
                    for &y in &self.adj[x] {
                        *next[y].entry(mask | add).or_insert(0) += count;
                    }
                }
            }
            layers.push(next);
        }
        WalkCounts { layers }
    }

    /// Some walk of `len` edges from `start` to `end` with interior mask `mask`.
    fn reconstruct(&self, counts: &WalkCounts, start: usize, end: usize, len: usize, mask: u64) -> Vec<usize> {
        let c = self.colour[start];
        let mut path = vec![end];
        let (mut cur, mut m) = (end, mask);
        for t in (1..len).rev() {
            let prev = (0..self.edges.len()).find_map(|x| {
                if !self.adj[x].contains(&cur) {
                    return None;
                }
                let add = if t >= 2 { self.contribution(x, c) } else { 0 };
                if m & add != add {
                    return None;
                }
                let layer = &counts.layers[t - 1][x];
                [m, m & !add].into_iter().find(|cand| cand | add == m && layer.contains_key(cand)).map(|cand| (x, cand))
            });
            let (x, pm) = prev.expect("walk counts are inconsistent");
            path.push(x);
            cur = x;
            m = pm;
        }
        debug_assert_eq!(cur, start);
        path.reverse();
        path
    }

    fn run(&self, max_len: usize) -> LemmaReport {
        let mut report = LemmaReport { max_len, ..Default::default() };
        if max_len < 4 {
            return report;
        }
        // arc A = e_1 .. e_i has i >= 2 edges, arc B = e_i .. e_m e_1 has m - i + 2 >= 3
        let parts: Vec<LemmaReport> = (0..self.edges.len())
            .into_par_iter()
            .map(|u| self.run_from(u, max_len))
            .collect();
        for part in parts {
            report.merge(part);
        }
        report.counterexamples.truncate(MAX_REPORTED);
        report
    }

    fn run_from(&self, u: usize, max_len: usize) -> LemmaReport {
        let mut report = LemmaReport { max_len, ..Default::default() };
        let max_arc = max_len - 1;
        {
            let counts = self.counts_from(u, max_arc);
            let cu = self.labeling.component_of(self.edges[u]);
            for v in 0..self.edges.len() {
                if self.colour[v] != self.colour[u] || self.labeling.component_of(self.edges[v]) == cu {
                    continue;
                }
                for len_a in 2..=max_arc {
                    let arcs_a = &counts.layers[len_a - 1][v];
                    if arcs_a.is_empty() {
                        continue;
                    }
                    for len_b in 3..=max_len + 2 - len_a {
                        // walks v -> u are the reverses of walks u -> v
                        let arcs_b = &counts.layers[len_b - 1][v];
                        for (&ma, &na) in arcs_a {
                            for (&mb, &nb) in arcs_b {
                                let total = na * nb;
                                report.instances_checked += total;
                                if ma & mb != 0 {
                                    report.witnesses_found += total;
                                    continue;
                                }
                                report.counterexample_count += total;
                                if report.counterexamples.len() < MAX_REPORTED {
                                    report.counterexamples.push(self.counterexample(&counts, u, v, len_a, ma, len_b, mb));
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    #[allow(clippy::too_many_arguments)]
    fn counterexample(&self, counts: &WalkCounts, u: usize, v: usize, len_a: usize, ma: u64, len_b: usize, mb: u64) -> Counterexample {
        let arc_a = self.reconstruct(counts, u, v, len_a, ma);
        let mut arc_b = self.reconstruct(counts, u, v, len_b, mb);
        arc_b.reverse();
        let mut seq: Vec<KEdge> = arc_a.iter().map(|&x| self.edges[x]).collect();
        seq.extend(arc_b[1..len_b - 1].iter().map(|&x| self.edges[x]));
        let walk = TightPseudoWalk::closed(seq);
        debug_assert!(walk.check(self.graph).is_ok());
        Counterexample {
            walk,
            i: len_a,
            colour: self.colour[u],
        }
    }
}

/// Counts every qualifying `(Q, i)` with `|Q| <= max_len` and checks that a
/// witness exists. Walks are not listed one by one: for each pair of start
/// and end edges the two arcs of `Q` are counted by the set of
/// opposite-colour components they meet, and a pair of arcs has no witness
/// exactly when those sets are disjoint.
pub fn verify_lemma_exhaustive(graph: &ColouredKGraph, max_len: usize) -> Result<LemmaReport> {
    let size = binomial(graph.n(), graph.k());
    if size > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!("C({},{}) = {size} exceeds {EXHAUSTIVE_LIMIT}", graph.n(), graph.k())));
    }
    let labeling = tight_components(graph);
    Ok(Exhaustive::new(graph, &labeling)?.run(max_len))
}

/// Explicit enumeration of every closed walk with at most `max_len` edges,
/// each checked with [`find_crossing_witness`]. Exponential; for cross-checks only.
pub fn verify_lemma_by_enumeration(graph: &ColouredKGraph, max_len: usize) -> Result<LemmaReport> {
    let size = binomial(graph.n(), graph.k());
    if size > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!("C({},{}) = {size} exceeds {EXHAUSTIVE_LIMIT}", graph.n(), graph.k())));
    }
    let labeling = tight_components(graph);
    let edges: Vec<KEdge> = graph.edges().map(|(_, e, _)| e).collect();
    let mut report = LemmaReport { max_len, ..Default::default() };
    let mut seq = Vec::with_capacity(max_len);
    fn extend(
        graph: &ColouredKGraph,
        labeling: &TightComponentLabeling,
        edges: &[KEdge],
        seq: &mut Vec<KEdge>,
        max_len: usize,
        report: &mut LemmaReport,
    ) {
        let k = graph.k();
        let m = seq.len();
        if m >= 3 && seq[m - 1].intersection_size(seq[0]) + 1 >= k {
            let walk = TightPseudoWalk::closed(seq.clone());
            let c = graph.slot(seq[0]).unwrap();
            for i in 2..m {
                if graph.slot(seq[i - 1]) != Some(c) || labeling.component_of(seq[i - 1]) == labeling.component_of(seq[0]) {
                    continue;
                }
                report.instances_checked += 1;
                match find_crossing_witness(graph, labeling, &walk, i, c) {
                    Ok(_) => report.witnesses_found += 1,
                    Err(_) => {
                        report.counterexample_count += 1;
                        if report.counterexamples.len() < MAX_REPORTED {
                            report.counterexamples.push(Counterexample { walk: walk.clone(), i, colour: c });
                        }
                    }
                }
            }
        }
        if m == max_len {
            return;
        }
        let last = seq[m - 1];
        for &e in edges {
            if e.intersection_size(last) + 1 >= k {
                seq.push(e);
                extend(graph, labeling, edges, seq, max_len, report);
                seq.pop();
            }
        }
    }
    for &e in &edges {
        seq.push(e);
        extend(graph, &labeling, &edges, &mut seq, max_len, &mut report);
        seq.pop();
    }
    Ok(report)
}

/// A qualifying instance: closed walk, index and endpoint colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaInstance {
    pub walk: TightPseudoWalk,
    pub i: usize,
    pub colour: Colour,
}

/// Random qualifying instances drawn from random closed walks of at most
/// `max_len` edges; stops after `count` instances or `attempts` walks.
pub fn sample_instances(
    graph: &ColouredKGraph,
    labeling: &TightComponentLabeling,
    max_len: usize,
    count: usize,
    attempts: usize,
    seed: u64,
) -> Vec<LemmaInstance> {
    let mut rng = generators::rng(seed);
    let mut out = Vec::new();
    for _ in 0..attempts {
        if out.len() >= count {
            break;
        }
        let m = 3 + generators::index(&mut rng, max_len.saturating_sub(2).max(1));
        let walk_seed = rand_chacha::rand_core::RngCore::next_u64(&mut rng);
        let Ok(walk) = generators::random_closed_walk(graph, m, walk_seed) else {
            continue;
        };
        if walk.len() > max_len {
            continue;
        }
        let Some(c) = graph.slot(walk.at(1)) else { continue };
        let candidates: Vec<usize> = (2..walk.len())
            .filter(|&i| check_precondition(graph, labeling, &walk, i, c).is_ok())
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let i = candidates[generators::index(&mut rng, candidates.len())];
        out.push(LemmaInstance { walk, i, colour: c });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_colouring;

    fn edge(v: &[usize]) -> KEdge {
        KEdge::from_set(v.iter().copied().collect())
    }

    /// Two red edges far apart, joined through blue edges on both sides.
    fn two_red_islands() -> (ColouredKGraph, TightPseudoWalk) {
        let mut g = ColouredKGraph::complete(7, 3, Colour::Blue).unwrap();
        for e in [edge(&[0, 1, 2]), edge(&[4, 5, 6])] {
            g.set_slot(g.rank(e), Some(Colour::Red));
        }
        let q = TightPseudoWalk::closed(vec![
            edge(&[0, 1, 2]),
            edge(&[1, 2, 4]),
            edge(&[2, 4, 5]),
            edge(&[4, 5, 6]),
            edge(&[0, 5, 6]),
            edge(&[0, 1, 6]),
        ]);
        (g, q)
    }

    #[test]
    fn witness_on_islands() {
        let (g, q) = two_red_islands();
        let l = tight_components(&g);
        let w = find_crossing_witness(&g, &l, &q, 4, Colour::Red).unwrap();
        assert_eq!((w.a, w.b, w.colour), (2, 5, Colour::Blue));
        assert!(w.check(&g, &l, &q, 4));

        let cw = constructive_crossing_witness(&g, &l, &q, 4, Colour::Red, 64).unwrap();
        assert!(cw.witness.check(&g, &l, &q, 4));
        assert_eq!(cw.witness.component, w.component);
        assert_eq!(cw.recursion_steps(), 0);
    }

    #[test]
    fn colour_swap() {
        let (g, q) = two_red_islands();
        let h = g.swap_colours();
        let l = tight_components(&h);
        let w = find_crossing_witness(&h, &l, &q, 4, Colour::Blue).unwrap();
        assert_eq!((w.a, w.b, w.colour), (2, 5, Colour::Red));
        let cw = constructive_crossing_witness(&h, &l, &q, 4, Colour::Blue, 64).unwrap();
        assert!(cw.witness.check(&h, &l, &q, 4));
    }

    #[test]
    fn preconditions() {
        let g = ColouredKGraph::complete(7, 3, Colour::Red).unwrap();
        let l = tight_components(&g);
        let q = generators::random_closed_walk(&g, 6, 1).unwrap();
        assert!(matches!(find_crossing_witness(&g, &l, &q, 3, Colour::Red), Err(Error::PreconditionViolation(_))));
        assert!(matches!(find_crossing_witness(&g, &l, &q, 1, Colour::Red), Err(Error::PreconditionViolation(_))));
        let (g, q) = two_red_islands();
        let l = tight_components(&g);
        assert!(matches!(find_crossing_witness(&g, &l, &q, 4, Colour::Blue), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn one_red_edge_in_the_arc_takes_one_step() {
        // search a random colouring for an instance with s = 1
        for seed in 0..200 {
            let g = random_colouring(7, 3, 0.5, seed).unwrap();
            let l = tight_components(&g);
            for inst in sample_instances(&g, &l, 8, 20, 400, seed) {
                if count_between(&g, &inst.walk, inst.i, inst.colour) != 1 {
                    continue;
                }
                let cw = constructive_crossing_witness(&g, &l, &inst.walk, inst.i, inst.colour, 64).unwrap();
                assert_eq!(cw.recursion_steps(), 1);
                // either the spliced walk is finished by Case A, or Case B ends directly
                match cw.trace.as_slice() {
                    [b] => assert_eq!((b.case, b.s), (ProofCase::B, 1)),
                    [b, a] => assert_eq!((b.s, a.s, a.case), (1, 0, ProofCase::A)),
                    t => panic!("unexpected trace {t:?}"),
                }
                assert!(cw.witness.check(&g, &l, &inst.walk, inst.i));
                return;
            }
        }
        panic!("no instance with s = 1 found");
    }

    #[test]
    fn exhaustive_is_vacuous_on_one_component() {
        let g = ColouredKGraph::complete(6, 3, Colour::Red).unwrap();
        let r = verify_lemma_exhaustive(&g, 6).unwrap();
        assert_eq!(r.instances_checked, 0);
        assert!(r.is_clean());
    }

    #[test]
    fn exhaustive_matches_enumeration() {
        for seed in 0..4 {
            let g = random_colouring(6, 3, 0.5, seed).unwrap();
            let fast = verify_lemma_exhaustive(&g, 5).unwrap();
            let slow = verify_lemma_by_enumeration(&g, 5).unwrap();
            assert_eq!(fast.instances_checked, slow.instances_checked, "seed {seed}");
            assert_eq!(fast.counterexample_count, slow.counterexample_count, "seed {seed}");
        }
    }

    #[test]
    fn sparse_graphs_admit_counterexamples() {
        // red {0,1,2} and {2,3,4} joined by blue {1,2,3} and {0,2,4}, which share one vertex
        let g = ColouredKGraph::from_edges(
            5,
            3,
            None,
            [
                (edge(&[0, 1, 2]), Colour::Red),
                (edge(&[1, 2, 3]), Colour::Blue),
                (edge(&[2, 3, 4]), Colour::Red),
                (edge(&[0, 2, 4]), Colour::Blue),
            ],
        )
        .unwrap();
        let l = tight_components(&g);
        let q = TightPseudoWalk::closed(vec![edge(&[0, 1, 2]), edge(&[1, 2, 3]), edge(&[2, 3, 4]), edge(&[0, 2, 4])]);
        assert_eq!(find_crossing_witness(&g, &l, &q, 3, Colour::Red), Err(Error::NoWitness));

        let r = verify_lemma_exhaustive(&g, 6).unwrap();
        assert!(r.counterexample_count > 0);
        let slow = verify_lemma_by_enumeration(&g, 6).unwrap();
        assert_eq!((r.instances_checked, r.counterexample_count), (slow.instances_checked, slow.counterexample_count));
        for ce in &r.counterexamples {
            assert!(check_precondition(&g, &l, &ce.walk, ce.i, ce.colour).is_ok());
            assert_eq!(find_crossing_witness(&g, &l, &ce.walk, ce.i, ce.colour), Err(Error::NoWitness));
        }
    }

    #[test]
    fn guard() {
        let g = ColouredKGraph::complete(14, 3, Colour::Red).unwrap();
        assert!(matches!(verify_lemma_exhaustive(&g, 4), Err(Error::TooLarge(_))));
    }
}
