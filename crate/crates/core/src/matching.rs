//! Layered connected matchings.
//!
//! Starting from a component `F*` spanning the most vertices, layer `i`
//! holds the components at distance `i - 1` from `F*` in the component
//! graph. Round `i` greedily matches inside the vertices left over so far,
//! using only edges of layer `i`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::components::{
    almost_spanning_component, bfs_layers, component_graph, tight_components, ComponentId, TightComponentLabeling,
};
use crate::error::{Error, Result};
use crate::kgraph::{ColouredKGraph, Colour, KEdge, VertexSet};
use crate::subsets;

/// Pairwise disjoint present edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub edges: Vec<KEdge>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.edges.iter().fold(VertexSet::EMPTY, |acc, e| acc.union(e.set()))
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = VertexSet::EMPTY;
        for e in &self.edges {
            if !seen.is_disjoint(e.set()) {
                return false;
            }
            seen = seen.union(e.set());
        }
        true
    }
}

/// Greedy maximal matching among allowed present edges inside `w`, in colex order.
pub fn maximal_matching_in(graph: &ColouredKGraph, w: VertexSet, allowed: impl Fn(KEdge) -> bool) -> Matching {
    let mut used = VertexSet::EMPTY;
    let mut edges = Vec::new();
    for (_, e, _) in graph.edges() {
        if e.set().is_subset(w) && e.set().is_disjoint(used) && allowed(e) {
            used = used.union(e.set());
            edges.push(e);
        }
    }
    Matching { edges }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourCounts {
    pub red: usize,
    pub blue: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedEdge {
    pub edge: KEdge,
    pub component: ComponentId,
    /// 1-based round that added the edge.
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectedMatchingResult {
    pub n: usize,
    pub k: usize,
    pub eta: f64,
    pub root: ComponentId,
    /// `layers[i - 1]` is the component set of layer `i`.
    pub layers: Vec<Vec<ComponentId>>,
    /// All `k` rounds, whether or not they fall within `i_star`.
    pub rounds: Vec<Matching>,
    /// `w_sizes[i] = |W_i|` for `i` in `0..=k`.
    pub w_sizes: Vec<usize>,
    pub i_star: usize,
    /// Union of the first `i_star` rounds.
    pub matching: Matching,
    pub per_edge_component: Vec<MatchedEdge>,
    pub components_used: usize,
    pub colour_counts: ColourCounts,
    /// `W_{i_star}`.
    pub leftover: VertexSet,
}

/// Runs all `k` rounds and reports the first `i_star` with `|W_i| <= eta n`
/// (or `k` when none qualifies).
pub fn connected_matching(graph: &ColouredKGraph, eta: f64) -> Result<ConnectedMatchingResult> {
    let labeling = tight_components(graph);
    connected_matching_with(graph, &labeling, eta)
}

pub fn connected_matching_with(
    graph: &ColouredKGraph,
    labeling: &TightComponentLabeling,
    eta: f64,
) -> Result<ConnectedMatchingResult> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidInput(format!("eta = {eta} is not in [0, 1]")));
    }
    let (n, k) = (graph.n(), graph.k());
    let root = almost_spanning_component(labeling)?;
    let cg = component_graph(graph, labeling);
    let layers = bfs_layers(&cg, root, k)?;
    let mut layer_of = vec![usize::MAX; labeling.len()];
    for (i, layer) in layers.iter().enumerate() {
        for id in layer {
            layer_of[id.index()] = i;
        }
    }

    let mut w = graph.vertices();
    let mut w_sizes = vec![w.len()];
    let mut rounds = Vec::with_capacity(k);
    for i in 0..k {
        let m = maximal_matching_in(graph, w, |e| labeling.component_of(e).is_some_and(|c| layer_of[c.index()] == i));
        w = w.difference(m.vertices());
        w_sizes.push(w.len());
        rounds.push(m);
        debug_assert!(edges_inside(graph, w).all(|e| labeling
            .component_of(e)
            .is_none_or(|c| layer_of[c.index()] > i)));
    }

    let limit = eta * n as f64;
    let i_star = (1..=k).find(|&i| w_sizes[i] as f64 <= limit).unwrap_or(k);
    let mut per_edge_component = Vec::new();
    let mut matching = Matching::default();
    for (r, m) in rounds.iter().enumerate().take(i_star) {
        for &e in &m.edges {
            per_edge_component.push(MatchedEdge {
                edge: e,
                component: labeling.component_of(e).ok_or(Error::AbsentEdge(e))?,
                round: r + 1,
            });
            matching.edges.push(e);
        }
    }
    let used: BTreeSet<ComponentId> = per_edge_component.iter().map(|m| m.component).collect();
    let mut colour_counts = ColourCounts::default();
    for &id in &used {
        match labeling.colour_of(id)? {
            Colour::Red => colour_counts.red += 1,
            Colour::Blue => colour_counts.blue += 1,
        }
    }
    let leftover = graph.vertices().difference(matching.vertices());
    Ok(ConnectedMatchingResult {
        n,
        k,
        eta,
        root,
        layers,
        rounds,
        w_sizes,
        i_star,
        components_used: used.len(),
        matching,
        per_edge_component,
        colour_counts,
        leftover,
    })
}

/// Present edges of `graph` inside `w`.
fn edges_inside(graph: &ColouredKGraph, w: VertexSet) -> impl Iterator<Item = KEdge> + '_ {
    subsets::subsets_of(w.mask(), graph.k())
        .map(KEdge::from_mask)
        .filter(|&e| graph.is_present(e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &str, problems: Vec<String>, ok_detail: impl Into<String>) {
        let passed = problems.is_empty();
        self.checks.push(AuditCheck {
            name: name.into(),
            passed,
            detail: if passed { ok_detail.into() } else { problems.join("; ") },
        });
    }
}

/// Re-derives every claim about `result` from the graph alone. `epsilon` is
/// the density parameter behind the one-component-per-round escape clause
/// (`|W_{i-1}| <= 2 epsilon n`); use 0 for complete graphs.
pub fn audit_result(graph: &ColouredKGraph, result: &ConnectedMatchingResult, epsilon: f64) -> AuditReport {
    let mut report = AuditReport::default();
    let (n, k) = (graph.n(), graph.k());
    let labeling = tight_components(graph);
    let layer_of = |c: ComponentId| result.layers.iter().position(|l| l.contains(&c));

    // leftover sets recomputed from the rounds
    let mut ws = vec![graph.vertices()];
    for m in &result.rounds {
        ws.push(ws.last().unwrap().difference(m.vertices()));
    }

    let mut problems = Vec::new();
    if result.rounds.len() != k || result.layers.len() != k {
        problems.push(format!("{} rounds and {} layers for k = {k}", result.rounds.len(), result.layers.len()));
    }
    for (r, m) in result.rounds.iter().enumerate() {
        if !m.is_disjoint() {
            problems.push(format!("round {} is not a matching", r + 1));
        }
        for &e in &m.edges {
            if !graph.is_present(e) {
                problems.push(format!("round {} uses absent edge {e}", r + 1));
            } else if !e.set().is_subset(ws[r]) {
                problems.push(format!("round {} edge {e} leaves W_{r}", r + 1));
            } else if labeling.component_of(e).and_then(layer_of) != Some(r) {
                problems.push(format!("round {} edge {e} is not in layer {}", r + 1, r + 1));
            }
        }
    }
    let claimed: Vec<KEdge> = result.rounds.iter().take(result.i_star).flat_map(|m| m.edges.iter().copied()).collect();
    if claimed != result.matching.edges || !result.matching.is_disjoint() {
        problems.push("matching is not the disjoint union of the first i_star rounds".into());
    }
    for me in &result.per_edge_component {
        if labeling.component_of(me.edge) != Some(me.component) {
            problems.push(format!("edge {} is not in component {}", me.edge, me.component));
        }
    }
    report.record("matching_valid", problems, format!("{} edges in {} rounds", result.matching.len(), k));

    let used: BTreeSet<ComponentId> = result.matching.edges.iter().filter_map(|&e| labeling.component_of(e)).collect();
    let mut problems = Vec::new();
    if used.len() != result.components_used {
        problems.push(format!("reported {} components, found {}", result.components_used, used.len()));
    }
    if used.len() > result.i_star || result.i_star > k || result.i_star == 0 {
        problems.push(format!("{} components with i_star = {} and k = {k}", used.len(), result.i_star));
    }
    report.record("components_bound", problems, format!("{} components, i_star = {}", used.len(), result.i_star));

    let mut problems = Vec::new();
    let mut escapes = Vec::new();
    for (r, m) in result.rounds.iter().enumerate() {
        let comps: BTreeSet<ComponentId> = m.edges.iter().filter_map(|&e| labeling.component_of(e)).collect();
        if comps.len() > 1 {
            if ws[r].len() as f64 <= 2.0 * epsilon * n as f64 {
                escapes.push(format!("round {} ({} components, |W| = {})", r + 1, comps.len(), ws[r].len()));
            } else {
                problems.push(format!("round {} draws from {} components with |W_{r}| = {}", r + 1, comps.len(), ws[r].len()));
            }
        }
    }
    let detail = if escapes.is_empty() { "one component per round".to_string() } else { format!("small-W escape: {}", escapes.join(", ")) };
    report.record("one_component_per_round", problems, detail);

    let mut problems = Vec::new();
    for i in 1..ws.len() {
        for e in edges_inside(graph, ws[i]) {
            if let Some(l) = labeling.component_of(e).and_then(layer_of) {
                if l < i {
                    problems.push(format!("W_{i} still spans {e} from layer {}", l + 1));
                    break;
                }
            }
        }
    }
    report.record("no_edges_left", problems, "H[W_i] misses layers 1..i for every i");

    let mut problems = Vec::new();
    if result.w_sizes.len() != ws.len() || result.w_sizes.iter().zip(&ws).any(|(&s, w)| s != w.len()) {
        problems.push(format!("reported |W_i| {:?} differ from recomputed", result.w_sizes));
    }
    if ws.windows(2).any(|p| !p[1].is_subset(p[0])) {
        problems.push("leftover sets are not nested".into());
    }
    if result.i_star > 0 && result.i_star < ws.len() && result.leftover != ws[result.i_star] {
        problems.push("leftover is not W_{i_star}".into());
    }
    if result.leftover != graph.vertices().difference(result.matching.vertices()) {
        problems.push("leftover is not the complement of the matching".into());
    }
    report.record("leftover_consistent", problems, format!("|W_(i_star)| = {}", result.leftover.len()));

    let mut problems = Vec::new();
    match labeling.colour_of(result.root) {
        Ok(root_colour) => {
            for (i, layer) in result.layers.iter().enumerate() {
                let want = if i % 2 == 0 { root_colour } else { root_colour.swap() };
                for &c in layer {
                    if labeling.colour_of(c).ok() != Some(want) {
                        problems.push(format!("layer {} holds {c} of the wrong colour", i + 1));
                    }
                }
            }
            if result.layers.first().map(Vec::as_slice) != Some(&[result.root][..]) {
                problems.push("layer 1 is not {F*}".into());
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    report.record("colour_alternation", problems, "odd layers share the colour of F*");

    if graph.is_complete() {
        let mut problems = Vec::new();
        let root_span = labeling.spanned_vertices(result.root).unwrap_or(VertexSet::EMPTY);
        if root_span != graph.vertices() {
            problems.push(format!("F* spans {} of {n} vertices", root_span.len()));
        }
        report.record("root_spans_all", problems, format!("F* spans all {n} vertices"));

        let mut problems = Vec::new();
        if root_span == graph.vertices() {
            let mut root_at: Vec<Option<KEdge>> = vec![None; n];
            for e in labeling.edges_of(result.root) {
                for v in e.iter() {
                    root_at[v].get_or_insert(e);
                }
            }
            for (_, f, _) in graph.edges() {
                let start = f.iter().find_map(|v| root_at[v].map(|e| (v, e)));
                match start.map(|(v, e)| reach_walk(e, v, f)) {
                    Some(walk) => {
                        let switches = walk.windows(2).filter(|p| graph.slot(p[0]) != graph.slot(p[1])).count();
                        let layer = labeling.component_of(f).and_then(layer_of);
                        if layer.is_none_or(|l| l > switches) {
                            problems.push(format!("{f} is {switches} colour changes from F* but in layer {layer:?}"));
                        }
                    }
                    None => problems.push(format!("no walk from F* to {f}")),
                }
                if problems.len() >= 5 {
                    break;
                }
            }
        }
        report.record("every_edge_within_k_layers", problems, "every edge lies in layers 1..k");

        let wk = ws.last().unwrap().len();
        let problems = if wk < k { Vec::new() } else { vec![format!("|W_k| = {wk} >= k = {k}")] };
        report.record("small_leftover", problems, format!("|W_k| = {wk} < k"));
    }
    report
}

/// The walk `e e_1(f) .. e_(k-2)(f) f` from an edge `e` of the root through
/// a common vertex `v`: `e_j(f)` takes the first `j` vertices of `f - v` and
/// the last `k - 1 - j` of `e - v`, with shared vertices aligned so that
/// every step is a `k`-set.
fn reach_walk(e: KEdge, v: usize, f: KEdge) -> Vec<KEdge> {
    let xs: Vec<usize> = e.iter().filter(|&x| x != v).collect();
    let ys: Vec<usize> = f.iter().filter(|&y| y != v).collect();
    let shared: Vec<usize> = xs.iter().copied().filter(|x| ys.contains(x)).collect();
    // x positions: shared vertices first; y positions: shared first too
    let mut xo: Vec<usize> = shared.clone();
    xo.extend(xs.iter().copied().filter(|x| !shared.contains(x)));
    let mut yo: Vec<usize> = shared.clone();
    yo.extend(ys.iter().copied().filter(|y| !shared.contains(y)));
    let k1 = xo.len();
    let mut walk = vec![e];
    for j in 1..k1 {
        let mut set: VertexSet = [v].into_iter().collect();
        for &y in &yo[..j] {
            set.insert(y);
        }
        for &x in &xo[j..] {
            set.insert(x);
        }
        walk.push(KEdge::from_set(set));
    }
    walk.push(f);
    walk
}
