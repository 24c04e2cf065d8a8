//! Monochromatic tight components, the component adjacency graph, and
//! spanning-component selection.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgraph::{ColouredKGraph, Colour, KEdge, VertexSet};
use crate::subsets::{self, colex_rank_mask};
use crate::unionfind::DisjointSet;

/// Dense component index; ids are ordered by the smallest member edge rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(pub usize);

impl ComponentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub id: ComponentId,
    pub colour: Colour,
    pub edge_count: usize,
    pub first_edge: KEdge,
    pub spanned: VertexSet,
}

/// Partition of the present edges into monochromatic tight components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightComponentLabeling {
    n: usize,
    k: usize,
    labels: Vec<Option<ComponentId>>,
    components: Vec<ComponentInfo>,
}

impl TightComponentLabeling {
    /// Canonical labeling from arbitrary per-rank class keys: ids are
    /// assigned in order of first appearance along colex rank.
    pub fn from_classes(graph: &ColouredKGraph, mut class: impl FnMut(usize) -> usize) -> Self {
        let mut labels = vec![None; graph.slot_count()];
        let mut components: Vec<ComponentInfo> = Vec::new();
        let mut id_of_class = std::collections::HashMap::new();
        for (r, e, c) in graph.edges() {
            let next = ComponentId(components.len());
            let id = *id_of_class.entry(class(r)).or_insert(next);
            if id == next {
                components.push(ComponentInfo {
                    id,
                    colour: c,
                    edge_count: 0,
                    first_edge: e,
                    spanned: VertexSet::EMPTY,
                });
            }
            let info = &mut components[id.0];
            info.edge_count += 1;
            info.spanned = info.spanned.union(e.set());
            labels[r] = Some(id);
        }
        TightComponentLabeling {
            n: graph.n(),
            k: graph.k(),
            labels,
            components,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    pub fn info(&self, id: ComponentId) -> Result<&ComponentInfo> {
        self.components
            .get(id.0)
            .ok_or_else(|| Error::InvalidInput(format!("unknown component {id}")))
    }

    #[inline]
    pub fn label_at(&self, rank: usize) -> Option<ComponentId> {
        self.labels[rank]
    }

    pub fn component_of(&self, e: KEdge) -> Option<ComponentId> {
        if e.size() != self.k || e.mask() & !subsets::low_bits(self.n) != 0 {
            return None;
        }
        self.labels[colex_rank_mask(e.mask()) as usize]
    }

    pub fn colour_of(&self, id: ComponentId) -> Result<Colour> {
        self.info(id).map(|i| i.colour)
    }

    /// Union of all edges labelled `id`.
    pub fn spanned_vertices(&self, id: ComponentId) -> Result<VertexSet> {
        self.info(id).map(|i| i.spanned)
    }

    pub fn count_by_colour(&self, colour: Colour) -> usize {
        self.components.iter().filter(|c| c.colour == colour).count()
    }

    /// Members of `id` in colex order.
    pub fn edges_of(&self, id: ComponentId) -> Vec<KEdge> {
        subsets::subsets(self.n, self.k)
            .zip(&self.labels)
            .filter(|(_, l)| **l == Some(id))
            .map(|(m, _)| KEdge::from_mask(m))
            .collect()
    }

    pub fn to_export(&self, graph: &ColouredKGraph) -> LabelingExport {
        LabelingExport {
            n: self.n,
            k: self.k,
            components: self
                .components
                .iter()
                .map(|c| ComponentSummary {
                    id: c.id,
                    colour: c.colour,
                    edge_count: c.edge_count,
                    spanned: c.spanned,
                })
                .collect(),
            edges: graph
                .edges()
                .map(|(r, edge, colour)| LabeledEdge {
                    edge,
                    colour,
                    component: self.labels[r].expect("present edge without label"),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LabeledEdge {
    pub edge: KEdge,
    pub colour: Colour,
    pub component: ComponentId,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentSummary {
    pub id: ComponentId,
    pub colour: Colour,
    pub edge_count: usize,
    pub spanned: VertexSet,
}

/// JSON form of a labeling.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LabelingExport {
    pub n: usize,
    pub k: usize,
    pub components: Vec<ComponentSummary>,
    pub edges: Vec<LabeledEdge>,
}

/// Union-find closure over shells: for every `(k-1)`-set and colour, all
/// present edges of that colour containing the set are united.
pub fn tight_components(graph: &ColouredKGraph) -> TightComponentLabeling {
    let (n, k) = (graph.n(), graph.k());
    let mut dsu = DisjointSet::new(graph.slot_count());
    for shell in subsets::subsets(n, k - 1) {
        let mut last = [None::<usize>; 2];
        for v in subsets::BitIter(subsets::low_bits(n) & !shell) {
            let r = colex_rank_mask(shell | 1 << v) as usize;
            if let Some(c) = graph.slot_at(r) {
                if let Some(prev) = last[c.index()] {
                    dsu.union(prev, r);
                }
                last[c.index()] = Some(r);
            }
        }
    }
    TightComponentLabeling::from_classes(graph, |r| dsu.find(r))
}

/// A connected monochromatic subgraph of a 2-coloured 2-graph, by vertex set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonoComponent {
    pub colour: Colour,
    pub vertices: VertexSet,
}

impl MonoComponent {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }
}

/// Largest monochromatic connected component of a 2-coloured graph (`k = 2`).
///
/// Only components with at least one edge count; `None` for an edgeless
/// graph. Ties go to Red, then to the component with the smaller vertex mask.
pub fn largest_mono_component_2graph(graph: &ColouredKGraph) -> Result<Option<MonoComponent>> {
    if graph.k() != 2 {
        return Err(Error::InvalidInput(format!("expected a 2-graph, got k = {}", graph.k())));
    }
    let n = graph.n();
    let mut best: Option<MonoComponent> = None;
    for colour in Colour::BOTH {
        let mut dsu = DisjointSet::new(n);
        let mut touched = VertexSet::EMPTY;
        for (_, e, c) in graph.edges() {
            if c == colour {
                let vs = e.vertices();
                dsu.union(vs[0], vs[1]);
                touched = touched.union(e.set());
            }
        }
        let mut classes = vec![VertexSet::EMPTY; n];
        for v in touched.iter() {
            let root = dsu.find(v);
            classes[root].insert(v);
        }
        for vertices in classes.into_iter().filter(|s| !s.is_empty()) {
            let cand = MonoComponent { colour, vertices };
            let better = match best {
                None => true,
                Some(b) => {
                    cand.order() > b.order()
                        || (cand.order() == b.order() && cand.colour == b.colour && cand.vertices.mask() < b.vertices.mask())
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}

/// The link graph `H_S` of a `(k-2)`-set `S`, as a 2-graph on the same vertex indices.
pub fn link_graph(graph: &ColouredKGraph, s: VertexSet) -> Result<ColouredKGraph> {
    if s.len() + 2 != graph.k() {
        return Err(Error::InvalidInput(format!(
            "link graph needs |S| = k - 2 = {}, got {}",
            graph.k() - 2,
            s.len()
        )));
    }
    ColouredKGraph::from_fn(graph.n(), 2, |pair| {
        if !pair.set().is_disjoint(s) {
            return None;
        }
        graph.slot(KEdge::from_mask(pair.mask() | s.mask()))
    })
}

/// Spanning component via a maximum-degree `(k-2)`-set and its link graph.
pub fn link_route_component(graph: &ColouredKGraph, labeling: &TightComponentLabeling) -> Result<ComponentId> {
    let k = graph.k();
    let mut best: Option<(usize, u64)> = None;
    for s in subsets::subsets(graph.n(), k - 2) {
        let d = graph.degree(VertexSet::from_mask(s))?;
        if best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, s));
        }
    }
    let (_, s) = best.ok_or(Error::NoComponent)?;
    let s = VertexSet::from_mask(s);
    let link = link_graph(graph, s)?;
    let mono = largest_mono_component_2graph(&link)?.ok_or(Error::NoComponent)?;
    let (_, pair, _) = link
        .edges()
        .find(|(_, e, c)| *c == mono.colour && e.set().is_subset(mono.vertices))
        .ok_or(Error::NoComponent)?;
    labeling
        .component_of(KEdge::from_mask(pair.mask() | s.mask()))
        .ok_or(Error::NoComponent)
}

/// Component spanning the most vertices; ties go to the smallest id.
pub fn almost_spanning_component(labeling: &TightComponentLabeling) -> Result<ComponentId> {
    labeling
        .components()
        .iter()
        .max_by(|a, b| a.spanned.len().cmp(&b.spanned.len()).then(b.id.cmp(&a.id)))
        .map(|c| c.id)
        .ok_or(Error::NoComponent)
}

/// Components joined when opposite-coloured members meet in `k - 1` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGraph {
    pub colours: Vec<Colour>,
    pub adjacency: Vec<Vec<ComponentId>>,
}

impl ComponentGraph {
    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, id: ComponentId) -> &[ComponentId] {
        &self.adjacency[id.0]
    }

    /// Graph distances from `root`; `None` when unreachable.
    pub fn distances(&self, root: ComponentId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[root.0] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            let d = dist[c.0].unwrap();
            for &nb in &self.adjacency[c.0] {
                if dist[nb.0].is_none() {
                    dist[nb.0] = Some(d + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }
}

pub fn component_graph(graph: &ColouredKGraph, labeling: &TightComponentLabeling) -> ComponentGraph {
    let (n, k) = (graph.n(), graph.k());
    let mut adj: Vec<BTreeSet<ComponentId>> = vec![BTreeSet::new(); labeling.len()];
    let mut by_colour: [Vec<ComponentId>; 2] = [Vec::new(), Vec::new()];
    for shell in subsets::subsets(n, k - 1) {
        by_colour[0].clear();
        by_colour[1].clear();
        for v in subsets::BitIter(subsets::low_bits(n) & !shell) {
            let r = colex_rank_mask(shell | 1 << v) as usize;
            if let (Some(c), Some(id)) = (graph.slot_at(r), labeling.label_at(r)) {
                let bucket = &mut by_colour[c.index()];
                if !bucket.contains(&id) {
                    bucket.push(id);
                }
            }
        }
        for &r in &by_colour[0] {
            for &b in &by_colour[1] {
                adj[r.0].insert(b);
                adj[b.0].insert(r);
            }
        }
    }
    ComponentGraph {
        colours: labeling.components().iter().map(|c| c.colour).collect(),
        adjacency: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
    }
}

/// `layers[i]` holds the components at distance `i` from `root`, for `i < depth`.
pub fn bfs_layers(cg: &ComponentGraph, root: ComponentId, depth: usize) -> Result<Vec<Vec<ComponentId>>> {
    if root.0 >= cg.len() {
        return Err(Error::InvalidInput(format!("unknown root component {root}")));
    }
    let mut layers = vec![Vec::new(); depth];
    for (i, d) in cg.distances(root).into_iter().enumerate() {
        if let Some(d) = d.filter(|&d| d < depth) {
            layers[d].push(ComponentId(i));
        }
    }
    Ok(layers)
}
