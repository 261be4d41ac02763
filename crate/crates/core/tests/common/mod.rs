//! Independent reference implementations used as test oracles. Nothing here
//! calls the library's contraction or search code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use twwtop::trigraph::{EdgeColor, Trigraph, VertexId};

/// Edge-map trigraph: `(a, b)` with `a < b`, value true for red.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plain {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeMap<(u32, u32), bool>,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Plain {
    pub fn from_trigraph(g: &Trigraph) -> Plain {
        let mut edges = BTreeMap::new();
        for (a, b) in g.black_edges() {
            edges.insert((a.0, b.0), false);
        }
        for (a, b) in g.red_edges() {
            edges.insert((a.0, b.0), true);
        }
        Plain {
            vertices: g.vertices().map(|v| v.0).collect(),
            edges,
        }
    }

    pub fn to_trigraph(&self) -> Trigraph {
        let black = self.edges.iter().filter(|(_, &r)| !r).map(|(&(a, b), _)| (VertexId(a), VertexId(b)));
        let red = self.edges.iter().filter(|(_, &r)| r).map(|(&(a, b), _)| (VertexId(a), VertexId(b)));
        Trigraph::new(self.vertices.iter().map(|&v| VertexId(v)), black, red).unwrap()
    }

    pub fn color(&self, a: u32, b: u32) -> Option<bool> {
        self.edges.get(&key(a, b)).copied()
    }

    /// Contraction rule applied to every other vertex in turn: black when
    /// both old edges are black, absent when both are absent, red otherwise.
    pub fn contract(&self, u: u32, v: u32, w: u32) -> Plain {
        let mut out = Plain {
            vertices: self.vertices.clone(),
            edges: BTreeMap::new(),
        };
        out.vertices.remove(&u);
        out.vertices.remove(&v);
        for (&(a, b), &r) in &self.edges {
            if a != u && a != v && b != u && b != v {
                out.edges.insert((a, b), r);
            }
        }
        out.vertices.insert(w);
        for &x in &self.vertices {
            if x == u || x == v {
                continue;
            }
            let (cu, cv) = (self.color(u, x), self.color(v, x));
            let merged = match (cu, cv) {
                (None, None) => None,
                (Some(false), Some(false)) => Some(false),
                _ => Some(true),
            };
            if let Some(r) = merged {
                out.edges.insert(key(w, x), r);
            }
        }
        out
    }

    pub fn max_red(&self) -> usize {
        let mut deg: BTreeMap<u32, usize> = BTreeMap::new();
        for (&(a, b), &r) in &self.edges {
            if r {
                *deg.entry(a).or_default() += 1;
                *deg.entry(b).or_default() += 1;
            }
        }
        deg.values().copied().max().unwrap_or(0)
    }
}

/// Twin-width by trying every contraction at every step, with no pruning
/// or memoization. Only usable for a handful of vertices.
pub fn naive_tww(g: &Plain) -> usize {
    let here = g.max_red();
    if g.vertices.len() <= 1 {
        return here;
    }
    let vs: Vec<u32> = g.vertices.iter().copied().collect();
    let w = vs.iter().max().unwrap() + 1;
    let mut best = usize::MAX;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            best = best.min(naive_tww(&g.contract(vs[i], vs[j], w)));
        }
    }
    here.max(best)
}

pub fn random_trigraph<R: Rng>(rng: &mut R, max_n: u32) -> Trigraph {
    let n = rng.gen_range(1..=max_n);
    let p_edge: f64 = rng.gen_range(0.05..0.7);
    let p_red: f64 = rng.gen_range(0.0..0.6);
    let mut black = Vec::new();
    let mut red = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p_edge) {
                if rng.gen_bool(p_red) {
                    red.push((VertexId(a), VertexId(b)));
                } else {
                    black.push((VertexId(a), VertexId(b)));
                }
            }
        }
    }
    Trigraph::new((0..n).map(VertexId), black, red).unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Trigraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(p))
        .map(|(a, b)| (VertexId(a), VertexId(b)))
        .collect();
    Trigraph::from_graph((0..n).map(VertexId), edges).unwrap()
}

/// Every labeled simple graph on `n` vertices.
pub fn all_graphs(n: u32) -> Vec<Trigraph> {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(a, b))| (VertexId(a), VertexId(b)));
            Trigraph::from_graph((0..n).map(VertexId), edges).unwrap()
        })
        .collect()
}

pub fn complete(n: u32) -> Trigraph {
    Trigraph::from_graph(
        (0..n).map(VertexId),
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (VertexId(a), VertexId(b)))),
    )
    .unwrap()
}

pub fn path(n: u32) -> Trigraph {
    Trigraph::from_graph((0..n).map(VertexId), (1..n).map(|i| (VertexId(i - 1), VertexId(i)))).unwrap()
}

pub fn cycle(n: u32) -> Trigraph {
    Trigraph::from_graph((0..n).map(VertexId), (0..n).map(|i| (VertexId(i), VertexId((i + 1) % n)))).unwrap()
}

/// Keeps each vertex independently with probability `p` (at least one).
pub fn random_induced<R: Rng>(rng: &mut R, g: &Trigraph, p: f64) -> Trigraph {
    let mut keep: Vec<VertexId> = g.vertices().filter(|_| rng.gen_bool(p)).collect();
    if keep.is_empty() {
        keep.push(g.vertices().next().unwrap());
    }
    g.induced(keep).unwrap()
}

pub fn color_name(c: EdgeColor) -> &'static str {
    match c {
        EdgeColor::Black => "black",
        EdgeColor::Red => "red",
    }
}
