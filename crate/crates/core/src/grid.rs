//! Grids `P_n^d`, grids with diagonals `D_{n,d}`, and the folding strategy
//! that contracts them (and any red subtrigraph of `red(D_{n,d})`).

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trigraph::{ContractionSequence, Contractor, EdgeColor, Trigraph, TrigraphError, VertexId};

/// Largest grid `grid_graph` will build.
pub const MAX_GRID_VERTICES: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("grid would have {0} vertices, more than the limit of {MAX_GRID_VERTICES}")]
    Size(u64),
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Trigraph(#[from] TrigraphError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub d: usize,
    pub diagonals: bool,
    pub all_red: bool,
}

impl GridSpec {
    /// `P_n^d`.
    pub fn plain(n: usize, d: usize) -> Self {
        GridSpec {
            n,
            d,
            diagonals: false,
            all_red: false,
        }
    }

    /// `red(D_{n,d})`.
    pub fn red_diagonal(n: usize, d: usize) -> Self {
        GridSpec {
            n,
            d,
            diagonals: true,
            all_red: true,
        }
    }

    fn validate(&self) -> Result<u64, GridError> {
        if self.n < 1 || self.d < 1 {
            return Err(GridError::InvalidSpec(format!("n={} d={}", self.n, self.d)));
        }
        let size = (self.n as u64).checked_pow(self.d as u32).unwrap_or(u64::MAX);
        if size > MAX_GRID_VERTICES {
            return Err(GridError::Size(size));
        }
        Ok(size)
    }
}

/// Coordinates in `[1, n]^d` of grid vertex `id` (the first axis is most
/// significant).
pub fn grid_point(spec: &GridSpec, id: VertexId) -> Vec<i64> {
    let mut rest = id.0 as u64;
    let mut p = vec![0i64; spec.d];
    for a in (0..spec.d).rev() {
        p[a] = (rest % spec.n as u64) as i64 + 1;
        rest /= spec.n as u64;
    }
    p
}

/// Inverse of [`grid_point`].
pub fn grid_id(spec: &GridSpec, p: &[i64]) -> VertexId {
    VertexId(p.iter().fold(0u64, |acc, &c| acc * spec.n as u64 + (c - 1) as u64) as u32)
}

/// The grid described by `spec`, vertex ids in mixed radix over `[1, n]^d`.
pub fn grid_graph(spec: &GridSpec) -> Result<Trigraph, GridError> {
    let size = spec.validate()?;
    let color = if spec.all_red {
        EdgeColor::Red
    } else {
        EdgeColor::Black
    };
    let mut g = Trigraph::with_vertices((0..size as u32).map(VertexId));
    // forward offsets only, so each edge is produced once
    let offsets: Vec<Vec<i64>> = if spec.diagonals {
        (0..3u64.pow(spec.d as u32))
            .map(|mut t| {
                (0..spec.d)
                    .map(|_| {
                        let o = (t % 3) as i64 - 1;
                        t /= 3;
                        o
                    })
                    .collect::<Vec<i64>>()
            })
            .filter(|o| o.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
            .collect()
    } else {
        (0..spec.d)
            .map(|a| (0..spec.d).map(|b| i64::from(a == b)).collect())
            .collect()
    };
    for id in 0..size as u32 {
        let p = grid_point(spec, VertexId(id));
        for o in &offsets {
            let q: Vec<i64> = p.iter().zip(o).map(|(a, b)| a + b).collect();
            if q.iter().all(|&c| c >= 1 && c <= spec.n as i64) {
                g.set_edge(VertexId(id), grid_id(spec, &q), color);
            }
        }
    }
    Ok(g)
}

/// Coordinates of every vertex of `grid_graph(spec)`.
pub fn grid_coordinates(spec: &GridSpec) -> Result<FxHashMap<VertexId, Vec<i64>>, GridError> {
    let size = spec.validate()?;
    Ok((0..size as u32)
        .map(|i| (VertexId(i), grid_point(spec, VertexId(i))))
        .collect())
}

/// A contraction sequence together with its measured width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridContraction {
    pub sequence: ContractionSequence,
    pub width: usize,
}

/// Contracts `P_n^d` by folding.
pub fn contract_grid(spec: &GridSpec) -> Result<GridContraction, GridError> {
    if spec.diagonals || spec.all_red {
        return Err(GridError::InvalidSpec(
            "contract_grid expects a plain grid without diagonals or red edges".into(),
        ));
    }
    let g = grid_graph(spec)?;
    let coords = grid_coordinates(spec)?;
    fold(&g, &coords)
}

/// Contracts a red trigraph whose vertices sit at distinct integer points
/// with every edge joining points at Chebyshev distance at most one.
pub fn contract_red_grid_subtrigraph(
    h: &Trigraph,
    coords: &FxHashMap<VertexId, Vec<i64>>,
) -> Result<GridContraction, GridError> {
    check_red_grid_embedding(h, coords)?;
    fold(h, coords)
}

/// Checks the preconditions of [`contract_red_grid_subtrigraph`].
pub fn check_red_grid_embedding(
    h: &Trigraph,
    coords: &FxHashMap<VertexId, Vec<i64>>,
) -> Result<(), GridError> {
    if h.num_black_edges() > 0 {
        return Err(GridError::Precondition(format!(
            "{} black edges present",
            h.num_black_edges()
        )));
    }
    let dim = coords.values().next().map_or(0, Vec::len);
    let mut taken = FxHashMap::default();
    for v in h.vertices() {
        let p = coords
            .get(&v)
            .ok_or_else(|| GridError::Precondition(format!("vertex {v} has no coordinates")))?;
        if p.len() != dim {
            return Err(GridError::Precondition(format!("vertex {v} has {} coordinates, expected {dim}", p.len())));
        }
        if let Some(w) = taken.insert(p.clone(), v) {
            return Err(GridError::Precondition(format!("vertices {w} and {v} share point {p:?}")));
        }
    }
    for (a, b) in h.red_edges() {
        if chebyshev(&coords[&a], &coords[&b]) > 1 {
            return Err(GridError::Precondition(format!(
                "edge {a}-{b} joins {:?} and {:?}",
                coords[&a], coords[&b]
            )));
        }
    }
    Ok(())
}

pub fn chebyshev(p: &[i64], q: &[i64]) -> i64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).max().unwrap_or(0)
}

/// Folds any trigraph whose vertices sit at distinct integer points,
/// without the red-grid preconditions. The width bounds only apply under
/// those preconditions.
pub fn contract_embedded(
    h: &Trigraph,
    coords: &FxHashMap<VertexId, Vec<i64>>,
) -> Result<GridContraction, GridError> {
    fold(h, coords)
}

/// Axis-by-axis folding. On each axis the slices `2k` and `2k+1` (after
/// shifting coordinates to start at zero) are merged into slice `k`, pair by
/// pair and one point at a time in lexicographic order, until the axis has
/// extent one. A point whose partner is absent just moves.
fn fold(h: &Trigraph, coords: &FxHashMap<VertexId, Vec<i64>>) -> Result<GridContraction, GridError> {
    let dim = coords.values().next().map_or(0, Vec::len);
    let mut at: BTreeMap<Vec<i64>, VertexId> = BTreeMap::new();
    if h.num_vertices() > 0 {
        let mut lo = vec![i64::MAX; dim];
        for v in h.vertices() {
            let p = coords
                .get(&v)
                .ok_or_else(|| GridError::Precondition(format!("vertex {v} has no coordinates")))?;
            for (l, &c) in lo.iter_mut().zip(p) {
                *l = (*l).min(c);
            }
        }
        for v in h.vertices() {
            let p: Vec<i64> = coords[&v].iter().zip(&lo).map(|(c, l)| c - l).collect();
            if at.insert(p, v).is_some() {
                return Err(GridError::Precondition("two vertices share a point".into()));
            }
        }
    }
    let mut run = Contractor::new(h.clone());
    for axis in 0..dim {
        loop {
            let extent = at.keys().map(|p| p[axis]).max().unwrap_or(0) + 1;
            if extent <= 1 {
                break;
            }
            let mut next: BTreeMap<Vec<i64>, VertexId> = BTreeMap::new();
            // slice pair by slice pair, each pair in lexicographic order of
            // the remaining coordinates; partners arrive consecutively
            let mut order: Vec<(Vec<i64>, VertexId)> = at
                .iter()
                .map(|(p, &v)| {
                    let mut key = p.clone();
                    let c = key.remove(axis);
                    key.insert(0, c / 2);
                    key.push(c);
                    (key, v)
                })
                .collect();
            order.sort_unstable();
            for (key, v) in order {
                let mut p = key;
                p.pop();
                let half = p.remove(0);
                p.insert(axis, half);
                let w = match next.get(&p) {
                    Some(&u) => run.contract(u, v)?,
                    None => v,
                };
                next.insert(p, w);
            }
            at = next;
        }
    }
    let (_, sequence, width) = run.finish();
    Ok(GridContraction { sequence, width })
}
