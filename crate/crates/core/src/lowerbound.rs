//! Subdivided regular graphs and the thickening triangulation whose dual
//! graph is such a subdivision.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Cell, Complex, ComplexError};
use crate::trigraph::{ordered_pair, Trigraph, TrigraphError, VertexId};

/// Pairings tried before `random_regular_graph` gives up.
pub const MAX_PAIRING_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LowerBoundError {
    #[error("infeasible spec: {0}")]
    InfeasibleSpec(String),
    #[error("no simple graph after {0} pairings")]
    SamplingFailed(usize),
    #[error("graph is not {expected}-regular: vertex {vertex} has degree {degree}")]
    NotRegular {
        expected: usize,
        vertex: VertexId,
        degree: usize,
    },
    #[error("graph is not a simple all-black graph: {0}")]
    NotSimple(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("dual graph verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Trigraph(#[from] TrigraphError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularGraphSpec {
    pub k: usize,
    pub m: usize,
    pub seed: u64,
}

impl RegularGraphSpec {
    pub fn validate(&self) -> Result<(), LowerBoundError> {
        if self.k < 4 {
            return Err(LowerBoundError::InfeasibleSpec(format!("degree {} is below 4", self.k)));
        }
        if self.k >= self.m {
            return Err(LowerBoundError::InfeasibleSpec(format!(
                "degree {} needs more than {} nodes",
                self.k, self.m
            )));
        }
        if (self.k * self.m) % 2 == 1 {
            return Err(LowerBoundError::InfeasibleSpec(format!("k·m = {} is odd", self.k * self.m)));
        }
        Ok(())
    }
}

/// A simple `k`-regular graph on `0..m` from the pairing model, retrying
/// until no loop or repeated edge appears. Deterministic in the seed.
pub fn random_regular_graph(spec: &RegularGraphSpec) -> Result<Trigraph, LowerBoundError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points: Vec<u32> = (0..spec.m as u32)
        .flat_map(|v| std::iter::repeat_n(v, spec.k))
        .collect();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut edges = FxHashSet::default();
        for pair in points.chunks(2) {
            if pair[0] == pair[1] || !edges.insert(ordered_pair(VertexId(pair[0]), VertexId(pair[1]))) {
                continue 'attempt;
            }
        }
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort_unstable();
        return Ok(Trigraph::from_graph((0..spec.m as u32).map(VertexId), edges)?);
    }
    Err(LowerBoundError::SamplingFailed(MAX_PAIRING_ATTEMPTS))
}

fn require_plain(g: &Trigraph) -> Result<(), LowerBoundError> {
    if g.num_red_edges() > 0 {
        return Err(LowerBoundError::NotSimple(format!("{} red edges", g.num_red_edges())));
    }
    Ok(())
}

/// `g` with every edge replaced by a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub graph: Trigraph,
    /// For each edge `(u, v)` with `u < v`, its internal vertices from `u`
    /// toward `v`.
    pub paths: BTreeMap<(VertexId, VertexId), Vec<VertexId>>,
}

/// Replaces every edge by a path with `s` internal vertices. New ids start
/// after the largest id of `g` and are handed out edge by edge in sorted
/// edge order.
pub fn subdivide_edges(g: &Trigraph, s: usize) -> Result<Subdivision, LowerBoundError> {
    require_plain(g)?;
    let edges = g.black_edges();
    let mut next = g.vertices().last().map_or(0, |v| v.0 + 1);
    let mut vertices: Vec<VertexId> = g.vertices().collect();
    let mut new_edges = Vec::new();
    let mut paths = BTreeMap::new();
    for &(u, v) in &edges {
        let internal: Vec<VertexId> = (0..s)
            .map(|_| {
                next += 1;
                VertexId(next - 1)
            })
            .collect();
        vertices.extend(&internal);
        let mut walk = vec![u];
        walk.extend(&internal);
        walk.push(v);
        new_edges.extend(walk.windows(2).map(|w| (w[0], w[1])));
        paths.insert((u, v), internal);
    }
    Ok(Subdivision {
        graph: Trigraph::from_graph(vertices, new_edges)?,
        paths,
    })
}

/// The stacked triangulation of `σ × [0,1]` for a `(d−1)`-simplex `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismComplex {
    pub d: usize,
    pub complex: Complex,
    /// Labels of `(v_1,0), …, (v_d,0)`, namely `0..d`.
    pub bottom: Vec<u32>,
    /// Labels of `(v_1,1), …, (v_d,1)`, namely `d..2d`.
    pub top: Vec<u32>,
    /// `σ̄_1, …, σ̄_d` as sorted label sets.
    pub simplices: Vec<Vec<u32>>,
}

/// `σ̄_i = {(v_i,0), …, (v_d,0), (v_1,1), …, (v_i,1)}`: the first is the
/// bottom facet plus `(v_1,1)`, and each next one swaps `(v_{i-1},0)` for
/// `(v_i,1)`, so consecutive simplices share `d` vertices and the bottom and
/// top facets lie in the first and last simplex.
fn prism_simplices(d: usize) -> Vec<Vec<u32>> {
    let d32 = d as u32;
    (1..=d32)
        .map(|i| {
            let mut s: Vec<u32> = (i - 1..d32).collect();
            s.extend(d32..d32 + i);
            s
        })
        .collect()
}

pub fn prism_triangulation(d: usize) -> Result<PrismComplex, LowerBoundError> {
    if d < 2 {
        return Err(LowerBoundError::InvalidParameters(format!("prism needs d >= 2 (got {d})")));
    }
    let simplices = prism_simplices(d);
    let complex = Complex::from_maximal_simplices(simplices.clone())?;
    Ok(PrismComplex {
        d,
        complex,
        bottom: (0..d as u32).collect(),
        top: (d as u32..2 * d as u32).collect(),
        simplices,
    })
}

/// The prism triangulation attached along one edge of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcPrism {
    pub u: VertexId,
    pub v: VertexId,
    /// `σ̄_1, …, σ̄_d` in complex labels, starting at `u`'s side.
    pub simplices: Vec<Vec<u32>>,
}

/// The complex together with where each top simplex came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thickening {
    pub d: usize,
    pub complex: Complex,
    pub node_simplex: BTreeMap<VertexId, Vec<u32>>,
    pub prisms: Vec<ArcPrism>,
}

/// One `d`-simplex per node, one stacked prism per edge glued to the two
/// node simplices along the facets assigned to that edge. The facet opposite
/// the `j`-th vertex of a node simplex belongs to the `j`-th neighbor in
/// ascending order, and facets are identified in sorted-label order.
pub fn thickening_triangulation(g: &Trigraph, d: usize) -> Result<Thickening, LowerBoundError> {
    if d < 3 {
        return Err(LowerBoundError::InvalidParameters(format!("thickening needs d >= 3 (got {d})")));
    }
    require_plain(g)?;
    let mut node_simplex = BTreeMap::new();
    let mut neighbors: FxHashMap<VertexId, Vec<VertexId>> = FxHashMap::default();
    for (p, v) in g.vertices().enumerate() {
        let degree = g.degree(v)?;
        if degree != d + 1 {
            return Err(LowerBoundError::NotRegular {
                expected: d + 1,
                vertex: v,
                degree,
            });
        }
        let base = (p * (d + 1)) as u32;
        node_simplex.insert(v, (base..base + d as u32 + 1).collect::<Vec<u32>>());
        let mut nb: Vec<VertexId> = g.neighbors(v)?.map(|(x, _)| x).collect();
        nb.sort_unstable();
        neighbors.insert(v, nb);
    }
    let facet = |v: VertexId, toward: VertexId| -> Vec<u32> {
        let j = neighbors[&v].binary_search(&toward).expect("adjacent");
        let mut f = node_simplex[&v].clone();
        f.remove(j);
        f
    };
    let pattern = prism_simplices(d);
    let mut prisms = Vec::new();
    let mut tops: Vec<Vec<u32>> = node_simplex.values().cloned().collect();
    for (u, v) in g.black_edges() {
        let mut labels = facet(u, v);
        labels.extend(facet(v, u));
        let simplices: Vec<Vec<u32>> = pattern
            .iter()
            .map(|s| {
                let mut t: Vec<u32> = s.iter().map(|&l| labels[l as usize]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        tops.extend(simplices.iter().cloned());
        prisms.push(ArcPrism { u, v, simplices });
    }
    let before = tops.len();
    let complex = Complex::from_maximal_simplices(tops)?;
    if complex.count_of_dim(d) != before {
        return Err(LowerBoundError::VerificationFailed(format!(
            "{before} top simplices collapsed to {}",
            complex.count_of_dim(d)
        )));
    }
    Ok(Thickening {
        d,
        complex,
        node_simplex,
        prisms,
    })
}

/// Outcome of comparing the dual graph with the subdivided graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualVerdict {
    pub holds: bool,
    pub dual_vertices: usize,
    pub dual_edges: usize,
    /// `(dual vertex, subdivision vertex)` pairs of the isomorphism.
    pub mapping: Vec<(VertexId, VertexId)>,
}

/// Checks that the dual graph of `t` equals `subdivide_edges(g, d)` under
/// the bijection read off the construction: node simplices go to their
/// nodes and the `i`-th prism simplex of an edge goes to the `i`-th
/// internal vertex of its path.
pub fn verify_claim_dual(t: &Thickening, g: &Trigraph) -> Result<DualVerdict, LowerBoundError> {
    let d = t.d;
    let dual = t.complex.dual_graph(d)?;
    let sub = subdivide_edges(g, d)?;
    let rank_of = |labels: &[u32]| -> Result<VertexId, LowerBoundError> {
        let id = t
            .complex
            .id_of(&Cell::Simplex(labels.to_vec()))
            .ok_or_else(|| LowerBoundError::VerificationFailed(format!("simplex {labels:?} missing")))?;
        Ok(VertexId(t.complex.rank_in_dim(id) as u32))
    };
    let mut phi: FxHashMap<VertexId, VertexId> = FxHashMap::default();
    for (&v, s) in &t.node_simplex {
        phi.insert(rank_of(s)?, v);
    }
    for p in &t.prisms {
        let path = sub
            .paths
            .get(&(p.u, p.v))
            .ok_or_else(|| LowerBoundError::VerificationFailed(format!("edge {}-{} not subdivided", p.u, p.v)))?;
        for (s, &w) in p.simplices.iter().zip(path) {
            phi.insert(rank_of(s)?, w);
        }
    }
    let images: FxHashSet<VertexId> = phi.values().copied().collect();
    if phi.len() != dual.graph.num_vertices() || images.len() != sub.graph.num_vertices() || images.len() != phi.len() {
        return Err(LowerBoundError::VerificationFailed(format!(
            "{} dual vertices, {} mapped, {} subdivision vertices",
            dual.graph.num_vertices(),
            phi.len(),
            sub.graph.num_vertices()
        )));
    }
    for (a, b) in dual.graph.black_edges() {
        if sub.graph.edge(phi[&a], phi[&b]).is_none() {
            return Err(LowerBoundError::VerificationFailed(format!(
                "dual edge between {} and {} has no counterpart",
                t.complex.cell(dual.cell_of(a)),
                t.complex.cell(dual.cell_of(b))
            )));
        }
    }
    if dual.graph.num_edges() != sub.graph.num_edges() {
        return Err(LowerBoundError::VerificationFailed(format!(
            "dual graph has {} edges, subdivision has {}",
            dual.graph.num_edges(),
            sub.graph.num_edges()
        )));
    }
    let mut mapping: Vec<(VertexId, VertexId)> = phi.into_iter().collect();
    mapping.sort_unstable();
    Ok(DualVerdict {
        holds: true,
        dual_vertices: dual.graph.num_vertices(),
        dual_edges: dual.graph.num_edges(),
        mapping,
    })
}
