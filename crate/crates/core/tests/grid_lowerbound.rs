mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use twwtop::grid::{contract_red_grid_subtrigraph, grid_coordinates, grid_graph, GridSpec};
use twwtop::lowerbound::{random_regular_graph, subdivide_edges, RegularGraphSpec};
use twwtop::trigraph::{apply_sequence, Trigraph, VertexId};

proptest! {
    #[test]
    fn folding_induced_red_grids_stays_within_bound(n in 2usize..7, d in 1usize..3, seed in any::<u64>(), p in 0.2f64..1.0) {
        let spec = GridSpec::red_diagonal(n, d);
        let g = grid_graph(&spec).unwrap();
        let coords = grid_coordinates(&spec).unwrap();
        let h = common::random_induced(&mut ChaCha8Rng::seed_from_u64(seed), &g, p);
        let sub: FxHashMap<VertexId, Vec<i64>> = h.vertices().map(|v| (v, coords[&v].clone())).collect();
        let c = contract_red_grid_subtrigraph(&h, &sub).unwrap();
        prop_assert!(c.width <= 2 * (3usize.pow(d as u32) - 1));
        let r = apply_sequence(&h, &c.sequence);
        prop_assert!(r.is_full());
        prop_assert_eq!(r.width, c.width);
    }

    #[test]
    fn regular_graphs_are_simple_and_regular(k in 4usize..7, m in 5usize..16, seed in any::<u64>()) {
        let spec = RegularGraphSpec { k, m, seed };
        prop_assume!(spec.validate().is_ok());
        let g = random_regular_graph(&spec).unwrap();
        prop_assert_eq!(g.num_vertices(), m);
        prop_assert_eq!(g.num_red_edges(), 0);
        for v in g.vertices() {
            prop_assert_eq!(g.degree(v).unwrap(), k);
        }
        prop_assert_eq!(&random_regular_graph(&spec).unwrap(), &g);
    }

    #[test]
    fn subdivision_replaces_edges_by_paths(seed in any::<u64>(), s in 0usize..4) {
        let g = common::random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 7, 0.4);
        let sub = subdivide_edges(&g, s).unwrap();
        let e = g.num_edges();
        prop_assert_eq!(sub.graph.num_vertices(), g.num_vertices() + s * e);
        prop_assert_eq!(sub.graph.num_edges(), (s + 1) * e);
        for ((u, v), inner) in &sub.paths {
            prop_assert_eq!(inner.len(), s);
            let mut walk = vec![*u];
            walk.extend(inner);
            walk.push(*v);
            for w in walk.windows(2) {
                prop_assert!(sub.graph.edge(w[0], w[1]).is_some());
            }
        }
    }
}

#[test]
fn infeasible_regular_specs_are_rejected() {
    for (k, m) in [(3, 10), (4, 4), (5, 7)] {
        assert!(random_regular_graph(&RegularGraphSpec { k, m, seed: 0 }).is_err());
    }
}

#[test]
fn red_subtrigraph_precondition_is_enforced() {
    let g: Trigraph = common::path(3);
    let coords: FxHashMap<VertexId, Vec<i64>> = (0..3).map(|i| (VertexId(i), vec![i as i64])).collect();
    assert!(contract_red_grid_subtrigraph(&g, &coords).is_err());
    let red = g.red_closure();
    assert_eq!(contract_red_grid_subtrigraph(&red, &coords).unwrap().width, 2);
}
