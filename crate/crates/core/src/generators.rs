//! Instance construction. All randomness comes from ChaCha8 seeded with
//! `seed_from_u64`; a unit draw is `(next_u64 >> 11) * 2^-53` and an index
//! draw is `next_u64 % len`, so instances reproduce bit for bit.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kgraph::{ColouredKGraph, Colour, KEdge, VertexSet};
use crate::subsets::{self, binomial, colex_rank_mask};
use crate::walks::{self, TightPseudoWalk};

/// Number of fresh deletion rounds `sparsify` tries before giving up.
pub const SPARSIFY_ATTEMPTS: usize = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[0, 1)` with 53 bits of precision.
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn index(rng: &mut impl RngCore, len: usize) -> usize {
    (rng.next_u64() % len as u64) as usize
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

/// Complete graph; each edge Red with probability `p_red`, in colex order.
pub fn random_colouring(n: usize, k: usize, p_red: f64, seed: u64) -> Result<ColouredKGraph> {
    check_probability("p_red", p_red)?;
    let mut r = rng(seed);
    ColouredKGraph::from_fn(n, k, |_| {
        Some(if unit(&mut r) < p_red { Colour::Red } else { Colour::Blue })
    })
}

/// Part index of `v` when `[0, n)` is cut into `l` consecutive near-equal ranges.
pub fn part_of(v: usize, n: usize, l: usize) -> usize {
    v * l / n
}

/// Complete graph; an edge is Blue iff some part holds a strict majority of it.
pub fn partition_adversary(n: usize, k: usize, l: usize) -> Result<ColouredKGraph> {
    if l == 0 || l > n {
        return Err(Error::InvalidInput(format!("need 1 <= l <= n, got l = {l}, n = {n}")));
    }
    ColouredKGraph::from_fn(n, k, |e| {
        let mut counts = vec![0usize; l];
        for v in e.iter() {
            counts[part_of(v, n, l)] += 1;
        }
        Some(if counts.iter().any(|&c| 2 * c > k) { Colour::Blue } else { Colour::Red })
    })
}

/// Vertices of part `i` (0-based) of the adversarial partition.
pub fn adversary_part(n: usize, l: usize, i: usize) -> VertexSet {
    (0..n).filter(|&v| part_of(v, n, l) == i).collect()
}

/// Zeroes every `i`-set whose degree lies strictly between 0 and `threshold(i)`
/// until no such set remains.
fn cleanup(graph: &mut ColouredKGraph, mu: f64) {
    let (n, k) = (graph.n(), graph.k());
    loop {
        let mut changed = false;
        for i in 1..k {
            let threshold = mu * binomial(n - i, k - i) as f64;
            let degrees = graph.level_degrees(i);
            for (s, &d) in subsets::subsets(n, i).zip(&degrees) {
                if d > 0 && (d as f64) < threshold {
                    for ext in subsets::subsets_of(subsets::low_bits(n) & !s, k - i) {
                        let r = colex_rank_mask(s | ext) as usize;
                        if graph.slot_at(r).is_some() {
                            graph.set_slot(r, None);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Random edge deletion with probability `eps`, followed by zeroing every set
/// whose degree fell below the `1 - 2ε` threshold. Retries with fresh
/// randomness until the result is `(1 - 2ε, 2ε)`-dense.
pub fn sparsify(graph: &ColouredKGraph, eps: f64, seed: u64) -> Result<ColouredKGraph> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!("eps = {eps} is not in [0, 1)")));
    }
    if eps == 0.0 {
        return Ok(graph.clone());
    }
    let (mu, alpha) = (1.0 - 2.0 * eps, 2.0 * eps);
    let mut r = rng(seed);
    for _ in 0..SPARSIFY_ATTEMPTS {
        let mut h = graph.clone();
        for rank in 0..h.slot_count() {
            if h.slot_at(rank).is_some() && unit(&mut r) < eps {
                h.set_slot(rank, None);
            }
        }
        cleanup(&mut h, mu);
        if h.edge_count() > 0 && h.is_dense(mu, alpha) {
            return Ok(h);
        }
    }
    Err(Error::DensificationFailed(SPARSIFY_ATTEMPTS))
}

/// Random closed walk of at least `m` edges: a uniform start edge, then
/// uniform steps to edges sharing exactly `k - 1` vertices, closed by a bridge
/// when the ends are not already tight.
pub fn random_closed_walk(graph: &ColouredKGraph, m: usize, seed: u64) -> Result<TightPseudoWalk> {
    if m == 0 {
        return Err(Error::InvalidInput("walk length must be at least 1".into()));
    }
    let present: Vec<KEdge> = graph.edges().map(|(_, e, _)| e).collect();
    if present.is_empty() {
        return Err(Error::NoComponent);
    }
    let mut r = rng(seed);
    let mut edges = vec![present[index(&mut r, present.len())]];
    while edges.len() < m {
        let cur = *edges.last().unwrap();
        let nbrs: Vec<KEdge> = graph.tight_neighbours(cur).collect();
        let next = if nbrs.is_empty() { cur } else { nbrs[index(&mut r, nbrs.len())] };
        edges.push(next);
    }
    let (first, last) = (edges[0], *edges.last().unwrap());
    if first.intersection_size(last) + 1 < graph.k() {
        let b = walks::bridge_with_apexes(graph, graph.vertices(), last, first).map_err(|_| Error::CannotClose)?;
        edges.extend_from_slice(b.interior());
    }
    Ok(TightPseudoWalk::closed(edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::tight_components;

    #[test]
    fn colouring_extremes_and_determinism() {
        let red = random_colouring(8, 3, 1.0, 9).unwrap();
        assert!(red.edges().all(|(_, _, c)| c == Colour::Red));
        let blue = random_colouring(8, 3, 0.0, 9).unwrap();
        assert!(blue.edges().all(|(_, _, c)| c == Colour::Blue));
        assert_eq!(random_colouring(10, 3, 0.5, 77).unwrap(), random_colouring(10, 3, 0.5, 77).unwrap());
        assert_ne!(random_colouring(10, 3, 0.5, 77).unwrap(), random_colouring(10, 3, 0.5, 78).unwrap());
        assert!(random_colouring(5, 3, 1.5, 0).is_err());
    }

    #[test]
    fn adversary_colour_rule() {
        let g = partition_adversary(12, 4, 3).unwrap();
        // V1 = {0..3}, V2 = {4..7}, V3 = {8..11}
        assert_eq!(g.colour(KEdge::from_set([0, 1, 2, 5].into_iter().collect())).unwrap(), Colour::Blue);
        assert_eq!(g.colour(KEdge::from_set([0, 1, 4, 5].into_iter().collect())).unwrap(), Colour::Red);
        assert_eq!(g.colour(KEdge::from_set([0, 4, 5, 8].into_iter().collect())).unwrap(), Colour::Red);
        assert_eq!(adversary_part(12, 3, 1).to_vec(), vec![4, 5, 6, 7]);

        let v1 = g.restrict(adversary_part(12, 3, 0));
        assert_eq!(v1.edge_count(), 1);
        assert!(v1.edges().all(|(_, _, c)| c == Colour::Blue));

        let one = partition_adversary(9, 3, 1).unwrap();
        assert!(one.edges().all(|(_, _, c)| c == Colour::Blue));
        assert!(partition_adversary(5, 3, 0).is_err());
    }

    #[test]
    fn adversary_neighbourhood_inside_a_part() {
        let g = partition_adversary(8, 4, 2).unwrap();
        let s: VertexSet = [0, 1, 2].into_iter().collect();
        let nb = g.neighbourhood(s).unwrap();
        assert_eq!(nb.len(), 5);
        assert!(nb.iter().all(|ext| g.colour(KEdge::from_set(ext.union(s))).unwrap() == Colour::Blue));
    }

    #[test]
    fn adversary_blue_component_counts() {
        for (n, k, l) in [(12, 4, 3), (8, 4, 2), (16, 4, 4), (12, 6, 2)] {
            let lab = tight_components(&partition_adversary(n, k, l).unwrap());
            assert_eq!(lab.count_by_colour(Colour::Blue), l, "n={n} k={k} l={l}");
        }
        // odd k: an edge with a bare majority in one part is one swap away
        // from a bare majority in another, so the blue classes merge
        let lab = tight_components(&partition_adversary(15, 5, 3).unwrap());
        assert_eq!(lab.count_by_colour(Colour::Blue), 1);
    }

    #[test]
    fn sparsify_zero_is_identity() {
        let g = random_colouring(9, 3, 0.5, 1).unwrap();
        assert_eq!(sparsify(&g, 0.0, 5).unwrap(), g);
    }

    #[test]
    fn sparsify_output_is_dense() {
        let g = random_colouring(12, 3, 0.5, 2).unwrap();
        for seed in 0..5 {
            let h = sparsify(&g, 0.1, seed).unwrap();
            assert!(h.is_dense(0.8, 0.2));
            assert!(h.edge_count() < g.edge_count());
            assert_eq!(sparsify(&g, 0.1, seed).unwrap(), h);
        }
    }

    #[test]
    fn sparsify_cannot_meet_tight_thresholds_on_k20() {
        // Any deleted edge drops three pair degrees below 0.96*17, and zeroing
        // a pair overloads its vertices, so only the complete graph is
        // (0.96, 0.04)-dense at this size.
        let g = random_colouring(20, 3, 0.5, 5).unwrap();
        assert_eq!(sparsify(&g, 0.02, 5), Err(Error::DensificationFailed(SPARSIFY_ATTEMPTS)));
    }

    #[test]
    fn closed_walks() {
        let g = ColouredKGraph::complete(10, 3, Colour::Red).unwrap();
        let one = random_closed_walk(&g, 1, 0).unwrap();
        assert_eq!(one.len(), 1);
        assert!(walks::validate_walk(&g, &one));

        let w = random_closed_walk(&g, 8, 3).unwrap();
        assert!(w.closed);
        assert!((8..=8 + 6).contains(&w.len()), "{}", w.len());
        assert!(walks::validate_walk(&g, &w));
        assert_eq!(random_closed_walk(&g, 8, 3).unwrap(), w);
        for seed in 0..50 {
            let w = random_closed_walk(&g, 1 + seed as usize % 12, seed).unwrap();
            assert!(walks::validate_walk(&g, &w));
        }
    }
}
