//! Bounded-width contraction of `G_{d,n}`, the dual graph of the
//! `d`-skeleton of the second barycentric subdivision of the honeycomb
//! `H^{2d,n}`.
//!
//! Cubes are colored by dimension. A `d`-simplex `σ = (s_0 ⊂ … ⊂ s_d)` of
//! `X''` lies in the closed star of the vertex of cube `c` exactly when `c`
//! is a vertex of `s_0`, and those cubes form a chain, so the least of them
//! is the unique cube of minimum color claiming `σ`. Epoch one contracts each
//! cube's part to one node, leaving a red trigraph that sits inside a red
//! grid with diagonals; epoch two folds that grid.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{honeycomb, Budget, CellId, Complex, ComplexError, Cube, DualGraph};
use crate::grid::{check_red_grid_embedding, contract_red_grid_subtrigraph, grid_graph, grid_id, GridError, GridSpec};
use crate::trigraph::{apply_sequence, ContractionSequence, Contractor, Trigraph, TrigraphError, VertexId};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Trigraph(#[from] TrigraphError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("disjointness violated: {0}")]
    Disjointness(String),
    #[error("parts do not form a connected partition: {0}")]
    Partition(String),
    #[error("embedding violated: {0}")]
    Embedding(String),
    #[error("claim check failed: {0}")]
    ClaimViolation(String),
    #[error("replay of the full sequence disagrees: {0}")]
    Replay(String),
}

/// `h₁(d) = 4^d ((2d)!)² C(2d, d)`, the part-size bound as printed.
pub fn h1(d: usize) -> u64 {
    4u64.pow(d as u32) * factorial(2 * d).pow(2) * binomial(2 * d, d)
}

/// The same product with the counts pinned by enumeration: a `2d`-simplex
/// has `C(2d+1, d+1)` faces of dimension `d` and its subdivision has
/// `(2d+1)!` top simplices.
pub fn h1_corrected(d: usize) -> u64 {
    4u64.pow(d as u32) * factorial(2 * d) * factorial(2 * d + 1) * binomial(2 * d + 1, d + 1)
}

/// `h₂(d) = 9^d`, the incidence bound.
pub fn h2(d: usize) -> u64 {
    9u64.pow(d as u32)
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// The three complexes and the dual graph `G_{d,n}`.
#[derive(Clone, Debug)]
pub struct BuiltG {
    pub d: usize,
    pub n: usize,
    pub x: Complex,
    pub x1: Complex,
    pub x2: Complex,
    /// Vertex `v` of the graph is the `v`-th `d`-simplex of `x2`.
    pub dual: DualGraph,
}

pub fn build_g(d: usize, n: usize, budget: &Budget) -> Result<BuiltG, PipelineError> {
    if d == 0 || n < 2 {
        return Err(PipelineError::InvalidParameters(format!("need d >= 1 and n >= 2 (got d={d}, n={n})")));
    }
    let x = honeycomb(2 * d, n, budget)?;
    let x1 = x.barycentric_subdivision(budget)?;
    let x2 = x1.barycentric_subdivision(budget)?;
    let dual = x2.dual_graph(d)?;
    Ok(BuiltG { d, n, x, x1, x2, dual })
}

/// Color and owning cube of every vertex of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexColoring {
    pub color: Vec<u8>,
    /// Cell of `x` (a cube) owning each simplex.
    pub owner: Vec<CellId>,
}

/// Colors each `d`-simplex of `x2` by the least cube dimension among the
/// cubes whose vertex star contains it.
pub fn color_simplices(built: &BuiltG) -> Result<SimplexColoring, PipelineError> {
    let BuiltG { x, x1, x2, dual, .. } = built;
    let per: Vec<Result<(u8, CellId), PipelineError>> = dual
        .cells
        .par_iter()
        .map(|&sigma| {
            let chain = x2.cell(sigma).as_simplex().expect("simplicial");
            // x1 ids are dimension-major, so the first label is s_0
            let s0 = CellId(chain[0]);
            let cubes = x1.cell(s0).as_simplex().expect("simplicial");
            let dims: Vec<usize> = cubes.iter().map(|&c| x.dim_of(CellId(c))).collect();
            let least = *dims.iter().min().expect("nonempty");
            let claimants: Vec<u32> = cubes
                .iter()
                .zip(&dims)
                .filter(|&(_, &k)| k == least)
                .map(|(&c, _)| c)
                .collect();
            if claimants.len() != 1 {
                return Err(PipelineError::Disjointness(format!(
                    "simplex {sigma} is claimed by cubes {claimants:?} of color {least}"
                )));
            }
            Ok((least as u8, CellId(claimants[0])))
        })
        .collect();
    let mut color = Vec::with_capacity(per.len());
    let mut owner = Vec::with_capacity(per.len());
    for r in per {
        let (c, o) = r?;
        color.push(c);
        owner.push(o);
    }
    Ok(SimplexColoring { color, owner })
}

/// Vertices of `G` grouped by owning cube, in cell order of `x` (colors
/// ascending, then cubes lexicographically).
pub fn parts(coloring: &SimplexColoring) -> BTreeMap<CellId, Vec<VertexId>> {
    let mut out: BTreeMap<CellId, Vec<VertexId>> = BTreeMap::new();
    for (v, &c) in coloring.owner.iter().enumerate() {
        out.entry(c).or_default().push(VertexId(v as u32));
    }
    out
}

/// Every cube owns a nonempty part and each part is connected in `g`.
pub fn check_partition(
    built: &BuiltG,
    parts: &BTreeMap<CellId, Vec<VertexId>>,
) -> Result<(), PipelineError> {
    if parts.len() != built.x.len() {
        return Err(PipelineError::Partition(format!(
            "{} of {} cubes own simplices",
            parts.len(),
            built.x.len()
        )));
    }
    let total: usize = parts.values().map(Vec::len).sum();
    if total != built.dual.graph.num_vertices() {
        return Err(PipelineError::Partition("parts do not cover the graph".into()));
    }
    let g = &built.dual.graph;
    for (cube, members) in parts {
        let inside: FxHashSet<VertexId> = members.iter().copied().collect();
        let mut seen = FxHashSet::default();
        seen.insert(members[0]);
        let mut stack = vec![members[0]];
        while let Some(a) = stack.pop() {
            for (b, _) in g.neighbors(a)? {
                if inside.contains(&b) && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        if seen.len() != members.len() {
            return Err(PipelineError::Partition(format!(
                "part of {} is disconnected",
                built.x.cell(*cube)
            )));
        }
    }
    Ok(())
}

/// Per-color summary of part sizes and incidences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorStats {
    pub color: usize,
    pub parts: usize,
    pub min_size: usize,
    pub max_size: usize,
    pub max_incidences: usize,
    /// Distinct incidence counts among cubes away from the boundary.
    pub interior_incidences: Vec<usize>,
    /// Largest incidence count among boundary cubes, if any.
    pub boundary_max_incidences: Option<usize>,
    /// `3^{2d}-1` for colors `0` and `2d`, `3^i + 3^{2d-i} - 2` otherwise.
    pub expected_interior_incidences: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyStats {
    pub h1: u64,
    pub h1_corrected: u64,
    pub h2: u64,
    pub max_part_size: usize,
    pub max_part_incidences: usize,
    pub per_color: Vec<ColorStats>,
    pub checks: Vec<Check>,
}

impl FamilyStats {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Fails with the first failing check.
    pub fn require_all(&self) -> Result<(), PipelineError> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(PipelineError::ClaimViolation(format!("{}: {}", c.name, c.detail))),
            None => Ok(()),
        }
    }
}

/// No neighboring cube is cut off by the boundary of `[1, n]^{2d}`.
fn is_interior(cube: &Cube, n: usize) -> bool {
    (0..cube.base.len()).all(|a| cube.dirs.contains(&(a as u8)) || (cube.base[a] >= 2 && cube.base[a] < n as i32))
}

fn expected_interior(i: usize, dd: usize) -> usize {
    let p = |k: usize| 3usize.pow(k as u32);
    if i == 0 || i == dd {
        p(dd) - 1
    } else {
        p(i) + p(dd - i) - 2
    }
}

/// Part sizes and incidences against the bounds `h₁(d)` and `h₂(d)`, the
/// exact interior incidence counts, and the face relation between
/// incident parts. Each check carries its own verdict.
pub fn verify_claim_estimates(built: &BuiltG, coloring: &SimplexColoring) -> Result<FamilyStats, PipelineError> {
    let parts = parts(coloring);
    let g = &built.dual.graph;
    let mut incident: FxHashMap<CellId, FxHashSet<CellId>> = FxHashMap::default();
    for (a, b) in g.black_edges().into_iter().chain(g.red_edges()) {
        let (oa, ob) = (coloring.owner[a.0 as usize], coloring.owner[b.0 as usize]);
        if oa != ob {
            incident.entry(oa).or_default().insert(ob);
            incident.entry(ob).or_default().insert(oa);
        }
    }
    let dd = 2 * built.d;
    let (b1, b1c, b2) = (h1(built.d), h1_corrected(built.d), h2(built.d));
    let mut per_color = Vec::new();
    let mut face_related = true;
    let mut face_detail = String::from("all incident parts belong to face-related cubes");
    let mut boundary_fewer = true;
    let mut interior_exact = true;
    for i in 0..=dd {
        let mut stats = ColorStats {
            color: i,
            parts: 0,
            min_size: usize::MAX,
            max_size: 0,
            max_incidences: 0,
            interior_incidences: Vec::new(),
            boundary_max_incidences: None,
            expected_interior_incidences: expected_interior(i, dd),
        };
        let mut interior = BTreeSet::new();
        for cid in built.x.cells_of_dim(i) {
            let size = parts.get(&cid).map_or(0, Vec::len);
            let inc = incident.get(&cid).map_or(0, FxHashSet::len);
            stats.parts += 1;
            stats.min_size = stats.min_size.min(size);
            stats.max_size = stats.max_size.max(size);
            stats.max_incidences = stats.max_incidences.max(inc);
            let cube = built.x.cell(cid).as_cube().expect("cubical");
            if is_interior(cube, built.n) {
                interior.insert(inc);
            } else {
                let m = stats.boundary_max_incidences.get_or_insert(0);
                *m = (*m).max(inc);
            }
            for other in incident.get(&cid).into_iter().flatten() {
                let oc = built.x.cell(*other).as_cube().expect("cubical");
                if face_related && !(cube.is_face_of(oc) || oc.is_face_of(cube)) {
                    face_related = false;
                    face_detail = format!("{} and {} are incident but not face-related", built.x.cell(cid), built.x.cell(*other));
                }
            }
        }
        stats.interior_incidences = interior.into_iter().collect();
        if !stats.interior_incidences.is_empty() && stats.interior_incidences != [stats.expected_interior_incidences] {
            interior_exact = false;
        }
        if let Some(m) = stats.boundary_max_incidences {
            if stats.interior_incidences.first().is_some_and(|&lo| m >= lo) {
                boundary_fewer = false;
            }
        }
        per_color.push(stats);
    }
    let max_part_size = per_color.iter().map(|c| c.max_size).max().unwrap_or(0);
    let max_part_incidences = per_color.iter().map(|c| c.max_incidences).max().unwrap_or(0);
    let summary = |f: &dyn Fn(&ColorStats) -> String| per_color.iter().map(f).collect::<Vec<_>>().join(", ");
    let checks = vec![
        Check {
            name: "part_size_below_h1".into(),
            passed: (max_part_size as u64) < b1,
            detail: format!("max part size {max_part_size}, h1 = {b1}"),
        },
        Check {
            name: "part_size_below_h1_corrected".into(),
            passed: (max_part_size as u64) < b1c,
            detail: format!("max part size {max_part_size}, corrected bound = {b1c}"),
        },
        Check {
            name: "incidences_below_h2".into(),
            passed: (max_part_incidences as u64) < b2,
            detail: format!("max incidences {max_part_incidences}, h2 = {b2}"),
        },
        Check {
            name: "interior_incidences_exact".into(),
            passed: interior_exact,
            detail: summary(&|c| format!("color {}: {:?} expected {}", c.color, c.interior_incidences, c.expected_interior_incidences)),
        },
        Check {
            name: "boundary_incidences_fewer".into(),
            passed: boundary_fewer,
            detail: summary(&|c| format!("color {}: boundary max {:?}", c.color, c.boundary_max_incidences)),
        },
        Check {
            name: "incidences_face_related".into(),
            passed: face_related,
            detail: face_detail,
        },
    ];
    Ok(FamilyStats {
        h1: b1,
        h1_corrected: b1c,
        h2: b2,
        max_part_size,
        max_part_incidences,
        per_color,
        checks,
    })
}

/// Order in which epoch one visits the parts.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartOrder {
    /// Colors ascending, cubes lexicographically.
    #[default]
    ColorAscending,
    /// Colors descending, cubes lexicographically.
    ColorDescending,
}

#[derive(Clone, Debug)]
pub struct EpochOne {
    pub sequence: ContractionSequence,
    pub width: usize,
    pub g_star: Trigraph,
    /// Node of `g_star` for each cube.
    pub node_of: BTreeMap<CellId, VertexId>,
}

/// Contracts every part to a single node. Within a part the two smallest
/// live ids are merged until one remains.
pub fn epoch_one(
    g: &Trigraph,
    x: &Complex,
    parts: &BTreeMap<CellId, Vec<VertexId>>,
    order: PartOrder,
) -> Result<EpochOne, PipelineError> {
    let mut keys: Vec<CellId> = parts.keys().copied().collect();
    if order == PartOrder::ColorDescending {
        keys.sort_by_key(|&c| (std::cmp::Reverse(x.dim_of(c)), c));
    }
    let mut run = Contractor::new(g.clone());
    let mut node_of = BTreeMap::new();
    for cube in keys {
        let mut live: BTreeSet<VertexId> = parts[&cube].iter().copied().collect();
        while live.len() > 1 {
            let a = live.pop_first().expect("two live");
            let b = live.pop_first().expect("two live");
            live.insert(run.contract(a, b)?);
        }
        node_of.insert(cube, *live.first().expect("nonempty part"));
    }
    let (g_star, sequence, width) = run.finish();
    Ok(EpochOne {
        sequence,
        width,
        g_star,
        node_of,
    })
}

/// Grid point `2·barycenter(c) − 1 ∈ [1, 2n−1]^{2d}` of every node.
pub fn embed_in_grid(
    x: &Complex,
    n: usize,
    one: &EpochOne,
) -> Result<FxHashMap<VertexId, Vec<i64>>, PipelineError> {
    let coords: FxHashMap<VertexId, Vec<i64>> = one
        .node_of
        .iter()
        .map(|(&c, &v)| {
            let p = x.cell(c).as_cube().expect("cubical").doubled_barycenter();
            (v, p.into_iter().map(i64::from).collect())
        })
        .collect();
    if one.g_star.num_black_edges() > 0 {
        return Err(PipelineError::Embedding(format!(
            "{} black edges survive epoch one",
            one.g_star.num_black_edges()
        )));
    }
    check_red_grid_embedding(&one.g_star, &coords).map_err(|e| PipelineError::Embedding(e.to_string()))?;
    let dim = x.cells().first().and_then(|c| c.as_cube()).map_or(0, |c| c.base.len());
    let spec = GridSpec::red_diagonal(2 * n - 1, dim);
    let grid = grid_graph(&spec)?;
    let map: HashMap<VertexId, VertexId> = coords.iter().map(|(&v, p)| (v, grid_id(&spec, p))).collect();
    if !one.g_star.is_subtrigraph_of(&grid, &map)? {
        return Err(PipelineError::Embedding("not a subtrigraph of the red grid with diagonals".into()));
    }
    Ok(coords)
}

/// Folds the embedded red trigraph down to one vertex.
pub fn epoch_two(
    g_star: &Trigraph,
    coords: &FxHashMap<VertexId, Vec<i64>>,
) -> Result<(ContractionSequence, usize), PipelineError> {
    let c = contract_red_grid_subtrigraph(g_star, coords)?;
    Ok((c.sequence, c.width))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub honeycomb_cells: usize,
    pub first_subdivision_cells: usize,
    pub second_subdivision_cells: usize,
    pub second_subdivision_f_vector: Vec<usize>,
    pub g_vertices: usize,
    pub g_edges: usize,
    pub g_star_vertices: usize,
    pub g_star_edges: usize,
}

/// Wall-clock time per stage, kept out of the report JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub build: Duration,
    pub coloring: Duration,
    pub epoch_one: Duration,
    pub epoch_two: Duration,
    pub replay: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub d: usize,
    pub n: usize,
    pub sizes: Sizes,
    pub epoch1_width: usize,
    pub epoch2_width: usize,
    pub total_width: usize,
    pub sequence_length: usize,
    pub family_stats: FamilyStats,
    #[serde(skip)]
    pub timings: Timings,
}

/// Everything a pipeline run produces.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub report: PipelineReport,
    pub g: Trigraph,
    pub g_star: Trigraph,
    pub sequence: ContractionSequence,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineConfig {
    pub budget: Budget,
    pub order: PartOrder,
}

/// Builds `G_{d,n}`, runs both epochs, and replays the concatenated
/// sequence from scratch to confirm the reported width.
pub fn full_pipeline(d: usize, n: usize, config: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    let mut timings = Timings::default();
    let t = Instant::now();
    let built = build_g(d, n, &config.budget)?;
    timings.build = t.elapsed();

    let t = Instant::now();
    let coloring = color_simplices(&built)?;
    let parts = parts(&coloring);
    check_partition(&built, &parts)?;
    let family_stats = verify_claim_estimates(&built, &coloring)?;
    timings.coloring = t.elapsed();

    let t = Instant::now();
    let g = &built.dual.graph;
    let one = epoch_one(g, &built.x, &parts, config.order)?;
    timings.epoch_one = t.elapsed();

    let t = Instant::now();
    let coords = embed_in_grid(&built.x, n, &one)?;
    let (seq2, epoch2_width) = epoch_two(&one.g_star, &coords)?;
    timings.epoch_two = t.elapsed();

    let t = Instant::now();
    let mut sequence = one.sequence.clone();
    sequence.extend(&seq2);
    let replay = apply_sequence(g, &sequence);
    let total_width = one.width.max(epoch2_width);
    if !replay.is_full() {
        return Err(PipelineError::Replay(format!("{:?}", replay.failure)));
    }
    if replay.width != total_width {
        return Err(PipelineError::Replay(format!(
            "replayed width {} but epochs measured {total_width}",
            replay.width
        )));
    }
    timings.replay = t.elapsed();

    let report = PipelineReport {
        d,
        n,
        sizes: Sizes {
            honeycomb_cells: built.x.len(),
            first_subdivision_cells: built.x1.len(),
            second_subdivision_cells: built.x2.len(),
            second_subdivision_f_vector: built.x2.f_vector(),
            g_vertices: g.num_vertices(),
            g_edges: g.num_edges(),
            g_star_vertices: one.g_star.num_vertices(),
            g_star_edges: one.g_star.num_edges(),
        },
        epoch1_width: one.width,
        epoch2_width,
        total_width,
        sequence_length: sequence.len(),
        family_stats,
        timings,
    };
    Ok(PipelineRun {
        report,
        g: built.dual.graph,
        g_star: one.g_star,
        sequence,
    })
}
