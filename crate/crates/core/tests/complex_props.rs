use proptest::prelude::*;
use twwtop::complex::{honeycomb, Budget, Cell, Complex};
use twwtop::io::to_json;

fn arb_simplicial() -> impl Strategy<Value = Complex> {
    prop::collection::vec(prop::collection::btree_set(0u32..7, 1..=4), 1..6).prop_map(|sets| {
        Complex::from_maximal_simplices(sets.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap()
    })
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn closure_is_downward_closed(x in arb_simplicial()) {
        for (i, cell) in x.cells().iter().enumerate() {
            let labels = cell.as_simplex().unwrap();
            if labels.len() < 2 {
                continue;
            }
            for skip in 0..labels.len() {
                let mut f = labels.to_vec();
                f.remove(skip);
                let id = x.id_of(&Cell::simplex(f).unwrap());
                prop_assert!(id.is_some());
                prop_assert!(x.facets(twwtop::complex::CellId(i as u32)).contains(&id.unwrap()));
            }
        }
    }

    #[test]
    fn subdivision_preserves_euler_characteristic(x in arb_simplicial()) {
        let y = x.barycentric_subdivision(&Budget::default()).unwrap();
        prop_assert_eq!(y.euler_characteristic(), x.euler_characteristic());
        prop_assert_eq!(y.count_of_dim(0), x.len());
        prop_assert_eq!(y.len() as u64, x.subdivision_size());
    }

    #[test]
    fn json_round_trip_is_byte_identical(x in arb_simplicial()) {
        let text = to_json(&x);
        let back: Complex = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(to_json(&back), text);
        prop_assert_eq!(back.f_vector(), x.f_vector());
    }

    #[test]
    fn dual_graph_edges_are_shared_facets(x in arb_simplicial(), i in 1usize..4) {
        prop_assume!(i <= x.dim());
        if !x.skeleton_is_pure(i).unwrap() {
            prop_assert!(x.dual_graph(i).is_err());
            return Ok(());
        }
        let dual = x.dual_graph(i).unwrap();
        prop_assert_eq!(dual.graph.num_vertices(), x.count_of_dim(i));
        let vs: Vec<_> = dual.graph.vertices().collect();
        for &a in &vs {
            for &b in &vs {
                if a < b {
                    let fa = x.facets(dual.cell_of(a));
                    let fb = x.facets(dual.cell_of(b));
                    let shared = fa.iter().any(|f| fb.contains(f));
                    prop_assert_eq!(dual.graph.edge(a, b).is_some(), shared);
                }
            }
        }
    }
}

#[test]
fn honeycomb_cell_counts() {
    // Along each axis a cell is one of n vertices or n - 1 edges.
    for d in 1..=3usize {
        for n in 2..=4usize {
            let h = honeycomb(d, n, &Budget::default()).unwrap();
            assert_eq!(h.len(), (2 * n - 1).pow(d as u32));
            for k in 0..=d {
                let expected = binom(d as u64, k as u64) * ((n - 1) as u64).pow(k as u32) * (n as u64).pow((d - k) as u32);
                assert_eq!(h.count_of_dim(k) as u64, expected);
            }
            assert_eq!(h.euler_characteristic(), 1);
            let text = to_json(&h);
            let back: Complex = serde_json::from_str(&text).unwrap();
            assert_eq!(to_json(&back), text);
        }
    }
}

#[test]
fn budget_stops_oversized_subdivision() {
    let h = honeycomb(3, 3, &Budget::default()).unwrap();
    assert!(h.barycentric_subdivision(&Budget::new(100)).is_err());
}

#[test]
fn corrupted_json_is_rejected() {
    let missing_face = r#"{"kind":"simplicial","dim":1,"cells":[[0],[0,1]]}"#;
    assert!(serde_json::from_str::<Complex>(missing_face).is_err());
}
