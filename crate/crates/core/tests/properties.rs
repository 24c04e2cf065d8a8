mod common;

use proptest::prelude::*;

use tightcover::components::tight_components;
use tightcover::generators::{self, random_colouring};
use tightcover::kgraph::{colex_rank, colex_unrank};
use tightcover::matching::{audit_result, connected_matching};
use tightcover::plane::{self, hex_walk};
use tightcover::structure::{verify_lemma_by_enumeration, verify_lemma_exhaustive};
use tightcover::subsets::binomial;
use tightcover::walks;
use tightcover::{ColouredKGraph, Colour, KEdge};

fn graph_with_holes(n: usize, k: usize, seed: u64, hole: f64) -> ColouredKGraph {
    let mut rng = generators::rng(seed);
    ColouredKGraph::from_fn(n, k, |_| {
        let u = generators::unit(&mut rng);
        if u < hole {
            None
        } else if u < (1.0 + hole) / 2.0 {
            Some(Colour::Red)
        } else {
            Some(Colour::Blue)
        }
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colex_round_trip(n in 1usize..=24, k_frac in 0.0f64..1.0, x in any::<u64>()) {
        let k = 1 + ((n as f64 * k_frac) as usize).min(n - 1);
        let total = binomial(n, k);
        let r = x % total;
        let e = colex_unrank(r, n, k).unwrap();
        prop_assert_eq!(e.size(), k);
        prop_assert!(e.mask() >> n == 0);
        prop_assert_eq!(colex_rank(e, n, k).unwrap(), r);
    }

    #[test]
    fn components_match_search(n in 4usize..=7, k in 2usize..=4, seed in any::<u64>(), hole in 0.0f64..0.6) {
        prop_assume!(k < n);
        let g = graph_with_holes(n, k, seed, hole);
        let lab = tight_components(&g);
        let ours: Vec<Option<usize>> = (0..g.slot_count()).map(|r| lab.label_at(r).map(|c| c.index())).collect();
        prop_assert_eq!(ours, common::bfs_components(&g));
    }

    #[test]
    fn swapping_colours_swaps_components(n in 4usize..=8, seed in any::<u64>(), hole in 0.0f64..0.5) {
        let g = graph_with_holes(n, 3, seed, hole);
        let s = g.swap_colours();
        let (a, b) = (tight_components(&g), tight_components(&s));
        for r in 0..g.slot_count() {
            prop_assert_eq!(a.label_at(r), b.label_at(r));
        }
        for c in a.components() {
            prop_assert_eq!(b.colour_of(c.id).unwrap(), a.colour_of(c.id).unwrap().swap());
        }
        prop_assert_eq!(a.count_by_colour(Colour::Red), b.count_by_colour(Colour::Blue));
    }

    #[test]
    fn bridges_have_length_2k(n in 8usize..=14, k in 2usize..=4, seed in any::<u64>()) {
        let g = random_colouring(n, k, 0.5, seed).unwrap();
        let mut rng = generators::rng(seed ^ 0x5eed);
        let slots = g.slot_count();
        let e1 = g.unrank(generators::index(&mut rng, slots)).unwrap();
        let e2 = g.unrank(generators::index(&mut rng, slots)).unwrap();
        let mut w = e1.set().union(e2.set());
        for v in 0..n {
            if generators::unit(&mut rng) < 0.3 {
                w.insert(v);
            }
        }
        let b = walks::bridge(&g, w, e1, e2).unwrap();
        prop_assert_eq!(b.len(), 2 * k);
        prop_assert!(walks::validate_walk(&g, &b));
        prop_assert_eq!(b.first(), Some(e1));
        prop_assert_eq!(b.last(), Some(e2));
        prop_assert!(b.edges.iter().all(|e| e.set().is_subset(w)));
        let d = walks::shortest_pseudo_walk(&g, e1, e2, None).unwrap();
        prop_assert!(d <= 2 * k);
    }

    #[test]
    fn triangulations_are_valid_and_hex_walks_agree(
        k in 3usize..=4,
        m in 3usize..=12,
        threshold in prop::sample::select(vec![4usize, 64]),
        seed in any::<u64>(),
    ) {
        let n = k + 5;
        let g = random_colouring(n, k, 0.5, seed).unwrap();
        let walk = generators::random_closed_walk(&g, m, seed).unwrap();
        let t = plane::triangulate(&g, &walk, threshold).unwrap();
        prop_assert!(plane::validate_triangulation(&t, &g, &walk));

        let x = t.outer_cycle().to_vec();
        prop_assume!(x.len() >= 2);
        let mut rng = generators::rng(seed.rotate_left(7));
        let mut colour: Vec<Colour> = (0..t.phi.len())
            .map(|_| if generators::unit(&mut rng) < 0.5 { Colour::Red } else { Colour::Blue })
            .collect();
        colour[x[0]] = Colour::Red;
        colour[x[1]] = Colour::Blue;
        let h = hex_walk(&t.plane, &colour).unwrap();
        let mm = x.len();
        let (xi, xi1) = (x[h.i_star - 1], x[h.i_star % mm]);
        prop_assert_eq!(colour[xi], Colour::Blue);
        prop_assert_eq!(colour[xi1], Colour::Red);
        prop_assert!(common::is_mono_walk(&t.plane, &colour, &h.red_walk, Colour::Red, x[0], xi1));
        prop_assert!(common::is_mono_walk(&t.plane, &colour, &h.blue_walk, Colour::Blue, x[1], xi));
        prop_assert!(common::plane_reach(&t.plane, &colour, x[0], Colour::Red)[xi1]);
        prop_assert!(common::plane_reach(&t.plane, &colour, x[1], Colour::Blue)[xi]);
    }

    #[test]
    fn matching_invariants(n in 8usize..=16, k in 3usize..=4, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_colouring(n, k, p, seed).unwrap();
        let r = connected_matching(&g, 0.0).unwrap();
        let audit = audit_result(&g, &r, 0.0);
        prop_assert!(audit.passed(), "{:?}", audit.failures().collect::<Vec<_>>());
        prop_assert!(r.components_used <= k);
        prop_assert!(r.leftover.len() < k);
        prop_assert!(r.matching.is_disjoint());
        prop_assert_eq!(r.matching.vertices().len() + r.leftover.len(), n);
        let again = connected_matching(&g, 0.0).unwrap();
        prop_assert_eq!(&r, &again);

        let s = connected_matching(&g.swap_colours(), 0.0).unwrap();
        prop_assert_eq!(&s.matching, &r.matching);
        prop_assert_eq!(s.colour_counts.red, r.colour_counts.blue);
        prop_assert_eq!(s.colour_counts.blue, r.colour_counts.red);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn counting_matches_enumeration(n in 5usize..=6, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = random_colouring(n, 3, p, seed).unwrap();
        let fast = verify_lemma_exhaustive(&g, 5).unwrap();
        let slow = verify_lemma_by_enumeration(&g, 5).unwrap();
        prop_assert_eq!(fast.instances_checked, slow.instances_checked);
        prop_assert_eq!(fast.witnesses_found, slow.witnesses_found);
        prop_assert_eq!(fast.counterexample_count, slow.counterexample_count);
    }
}

#[test]
fn generators_are_deterministic() {
    let a = random_colouring(12, 3, 0.4, 9).unwrap();
    let b = random_colouring(12, 3, 0.4, 9).unwrap();
    assert_eq!(a, b);
    let e: Vec<KEdge> = a.edges().map(|(_, e, _)| e).collect();
    assert_eq!(e.len(), a.slot_count());
    assert_eq!(
        generators::random_closed_walk(&a, 7, 3).unwrap().edges,
        generators::random_closed_walk(&b, 7, 3).unwrap().edges
    );
}
