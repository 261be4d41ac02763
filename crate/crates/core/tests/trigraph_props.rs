mod common;

use common::Plain;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twwtop::io::to_json;
use twwtop::trigraph::{apply_sequence, ContractionSequence, Contractor, Trigraph, VertexId};

fn arb_trigraph() -> impl Strategy<Value = Trigraph> {
    any::<u64>().prop_map(|seed| common::random_trigraph(&mut ChaCha8Rng::seed_from_u64(seed), 14))
}

/// Contracts down to one vertex along random pairs, checking each state
/// against the edge-map oracle. Returns the sequence and oracle width.
fn random_run(g: &Trigraph, seed: u64) -> (ContractionSequence, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Contractor::new(g.clone());
    let mut plain = Plain::from_trigraph(g);
    let mut width = plain.max_red();
    while plain.vertices.len() > 1 {
        let vs: Vec<u32> = plain.vertices.iter().copied().collect();
        let i = rng.gen_range(0..vs.len());
        let mut j = rng.gen_range(0..vs.len() - 1);
        if j >= i {
            j += 1;
        }
        let w = c.contract(VertexId(vs[i]), VertexId(vs[j])).unwrap();
        assert!(!plain.vertices.contains(&w.0));
        plain = plain.contract(vs[i], vs[j], w.0);
        assert_eq!(Plain::from_trigraph(c.graph()), plain);
        width = width.max(plain.max_red());
    }
    let (_, seq, w) = c.finish();
    assert_eq!(w, width);
    (seq, width)
}

proptest! {
    #[test]
    fn contraction_matches_oracle(g in arb_trigraph(), seed in any::<u64>()) {
        let (seq, width) = random_run(&g, seed);
        let report = apply_sequence(&g, &seq);
        prop_assert!(report.is_full());
        prop_assert_eq!(report.width, width);
        prop_assert_eq!(report.per_step_max_red.len(), seq.len() + 1);
        prop_assert_eq!(*report.per_step_max_red.iter().max().unwrap(), width);
    }

    #[test]
    fn contraction_is_symmetric(g in arb_trigraph(), a in any::<u32>(), b in any::<u32>()) {
        let n = g.num_vertices() as u32;
        prop_assume!(n >= 2);
        let (u, v) = (VertexId(a % n), VertexId(b % n));
        prop_assume!(u != v);
        let (x, wx) = g.contract(u, v).unwrap();
        let (y, wy) = g.contract(v, u).unwrap();
        prop_assert_eq!(wx, wy);
        prop_assert_eq!(x, y);
    }

    #[test]
    fn black_graph_twins_give_no_red(n in 2u32..10) {
        // Two vertices with identical neighborhoods merge without red edges.
        let mut edges = Vec::new();
        for x in 2..n {
            edges.push((VertexId(0), VertexId(x)));
            edges.push((VertexId(1), VertexId(x)));
        }
        let g = Trigraph::from_graph((0..n).map(VertexId), edges).unwrap();
        let (h, _) = g.contract(VertexId(0), VertexId(1)).unwrap();
        prop_assert_eq!(h.num_red_edges(), 0);
    }

    #[test]
    fn trigraph_json_round_trip(g in arb_trigraph()) {
        let text = to_json(&g);
        let back: Trigraph = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn sequence_json_round_trip(g in arb_trigraph(), seed in any::<u64>()) {
        let (seq, _) = random_run(&g, seed);
        let text = to_json(&seq);
        let back: ContractionSequence = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &seq);
        prop_assert_eq!(to_json(&back), text);
        let report = apply_sequence(&g, &seq);
        prop_assert_eq!(to_json(&report), to_json(&apply_sequence(&g, &back)));
    }

    #[test]
    fn induced_keeps_colors(g in arb_trigraph(), mask in any::<u32>()) {
        let keep: Vec<VertexId> = g.vertices().filter(|v| mask >> (v.0 % 32) & 1 == 1).collect();
        let h = g.induced(keep.iter().copied()).unwrap();
        prop_assert_eq!(h.num_vertices(), keep.len());
        for &a in &keep {
            for &b in &keep {
                if a != b {
                    prop_assert_eq!(h.edge(a, b), g.edge(a, b));
                }
            }
        }
    }
}

#[test]
fn replay_rejects_reused_ids() {
    let g = common::path(4);
    let mut seq = ContractionSequence::new();
    seq.push(VertexId(0), VertexId(1), VertexId(2));
    let r = apply_sequence(&g, &seq);
    assert!(!r.valid);
    assert_eq!(r.failure.unwrap().step, 0);

    let mut seq = ContractionSequence::new();
    seq.push(VertexId(0), VertexId(1), VertexId(4));
    seq.push(VertexId(4), VertexId(2), VertexId(0));
    let r = apply_sequence(&g, &seq);
    assert!(!r.valid, "id 0 was used earlier in the lineage");
}

#[test]
fn malformed_json_is_rejected() {
    assert!(serde_json::from_str::<Trigraph>(r#"{"vertices":[0,1],"black":[[0,1]],"red":[[0,1]]}"#).is_err());
    assert!(serde_json::from_str::<Trigraph>(r#"{"vertices":[0],"black":[[0,0]],"red":[]}"#).is_err());
    assert!(serde_json::from_str::<Trigraph>(r#"{"vertices":[0],"black":[[0,3]],"red":[]}"#).is_err());
}
