//! Abstract simplicial and cubical complexes.
//!
//! Cells are interned: every complex keeps its cells in canonical order
//! (dimension first, then the lexicographic cell key) and refers to them by
//! dense [`CellId`]s. The barycentric subdivision of a complex uses the
//! parent's cell ids as its ground set, so a vertex of `X'` *is* a cell of
//! `X`, a vertex of `X''` is a simplex of `X'`, and so on.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::trigraph::{Trigraph, VertexId};

/// Default cap on the number of cells a single construction may produce.
pub const DEFAULT_CELL_BUDGET: usize = 5_000_000;

/// Environment variable overriding [`DEFAULT_CELL_BUDGET`].
pub const CELL_BUDGET_ENV: &str = "TWWTOP_CELL_BUDGET";

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_cells: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cells: DEFAULT_CELL_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_cells: usize) -> Self {
        Budget { max_cells }
    }

    /// Default budget unless `TWWTOP_CELL_BUDGET` holds a valid integer.
    pub fn from_env() -> Self {
        std::env::var(CELL_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    fn admit(&self, needed: u64) -> Result<(), ComplexError> {
        if needed > self.max_cells as u64 {
            Err(ComplexError::Size {
                needed,
                budget: self.max_cells,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("construction needs {needed} cells but the budget is {budget}")]
    Size { needed: u64, budget: usize },
    #[error("dimension {requested} out of range for a complex of dimension {dim}")]
    Dimension { requested: usize, dim: usize },
    #[error("the {0}-skeleton is not pure")]
    NotPure(usize),
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("face {face} of {cell} is missing")]
    NotClosed { cell: String, face: String },
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("a complex holds either simplices or cubes, not both")]
    MixedKinds,
    #[error("complex has no cells")]
    Empty,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Dense index of a cell within one complex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u32);

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// `base + Σ_{i ∈ dirs} [0,1]·e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    pub base: Vec<i32>,
    pub dirs: Vec<u8>,
}

impl Cube {
    pub fn new(base: Vec<i32>, mut dirs: Vec<u8>) -> Result<Cube, ComplexError> {
        let before = dirs.len();
        dirs.sort_unstable();
        dirs.dedup();
        if dirs.len() != before || dirs.iter().any(|&a| a as usize >= base.len()) {
            return Err(ComplexError::InvalidCell(format!("cube {base:?} {dirs:?}")));
        }
        Ok(Cube { base, dirs })
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    /// Codimension-one faces: each direction pinned to its lower or upper end.
    pub fn facets(&self) -> Vec<Cube> {
        let mut out = Vec::with_capacity(2 * self.dirs.len());
        for (j, &a) in self.dirs.iter().enumerate() {
            let mut dirs = self.dirs.clone();
            dirs.remove(j);
            out.push(Cube {
                base: self.base.clone(),
                dirs: dirs.clone(),
            });
            let mut base = self.base.clone();
            base[a as usize] += 1;
            out.push(Cube { base, dirs });
        }
        out
    }

    /// `(base + χ_S, dirs \ T)` for every `S ⊆ T ⊆ dirs`, `T ≠ ∅`.
    pub fn proper_faces(&self) -> Vec<Cube> {
        let k = self.dirs.len();
        let mut out = Vec::new();
        for t in 1u32..(1 << k) {
            let pinned: Vec<u8> = (0..k).filter(|j| t >> j & 1 == 1).map(|j| self.dirs[j]).collect();
            let free: Vec<u8> = (0..k).filter(|j| t >> j & 1 == 0).map(|j| self.dirs[j]).collect();
            for s in 0u32..(1 << pinned.len()) {
                let mut base = self.base.clone();
                for (j, &a) in pinned.iter().enumerate() {
                    if s >> j & 1 == 1 {
                        base[a as usize] += 1;
                    }
                }
                out.push(Cube {
                    base,
                    dirs: free.clone(),
                });
            }
        }
        out
    }

    /// Whether `self` is a face of `other` (equality included).
    pub fn is_face_of(&self, other: &Cube) -> bool {
        if self.base.len() != other.base.len() || !self.dirs.iter().all(|a| other.dirs.contains(a)) {
            return false;
        }
        (0..self.base.len()).all(|i| {
            let (x, y) = (self.base[i], other.base[i]);
            if other.dirs.contains(&(i as u8)) && !self.dirs.contains(&(i as u8)) {
                x == y || x == y + 1
            } else {
                x == y
            }
        })
    }

    /// Twice the barycenter, minus one: an integer point of `[1, 2n-1]^d`
    /// for a cube of the honeycomb on `[1, n]^d`.
    pub fn doubled_barycenter(&self) -> Vec<i32> {
        let mut p: Vec<i32> = self.base.iter().map(|b| 2 * b - 1).collect();
        for &a in &self.dirs {
            p[a as usize] += 1;
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// Sorted, duplicate-free ground-set labels.
    Simplex(Vec<u32>),
    Cube(Cube),
}

impl Cell {
    pub fn simplex(mut labels: Vec<u32>) -> Result<Cell, ComplexError> {
        let before = labels.len();
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() || labels.len() != before {
            return Err(ComplexError::InvalidCell(format!("simplex {labels:?}")));
        }
        Ok(Cell::Simplex(labels))
    }

    pub fn dim(&self) -> usize {
        match self {
            Cell::Simplex(v) => v.len() - 1,
            Cell::Cube(c) => c.dim(),
        }
    }

    fn facets(&self) -> Vec<Cell> {
        match self {
            Cell::Simplex(v) if v.len() == 1 => Vec::new(),
            Cell::Simplex(v) => (0..v.len())
                .map(|j| {
                    let mut f = v.clone();
                    f.remove(j);
                    Cell::Simplex(f)
                })
                .collect(),
            Cell::Cube(c) => c.facets().into_iter().map(Cell::Cube).collect(),
        }
    }

    pub fn as_simplex(&self) -> Option<&[u32]> {
        match self {
            Cell::Simplex(v) => Some(v),
            Cell::Cube(_) => None,
        }
    }

    pub fn as_cube(&self) -> Option<&Cube> {
        match self {
            Cell::Cube(c) => Some(c),
            Cell::Simplex(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Simplex(v) => write!(f, "simplex {v:?}"),
            Cell::Cube(c) => write!(f, "cube base={:?} dirs={:?}", c.base, c.dirs),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Simplicial,
    Cubical,
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<CellId>,
}

impl Csr {
    fn row(&self, i: usize) -> &[CellId] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    fn transpose(&self, n: usize) -> Csr {
        let mut counts = vec![0u32; n + 1];
        for t in &self.targets {
            counts[t.index() + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut targets = vec![CellId(0); self.targets.len()];
        for src in 0..n {
            for t in self.row(src) {
                targets[fill[t.index()] as usize] = CellId(src as u32);
                fill[t.index()] += 1;
            }
        }
        Csr {
            offsets: counts,
            targets,
        }
    }
}

/// A downward-closed cell complex.
#[derive(Clone, Debug)]
pub struct Complex {
    kind: ComplexKind,
    cells: Vec<Cell>,
    /// `dim_start[k]..dim_start[k+1]` are the ids of the `k`-cells.
    dim_start: Vec<usize>,
    index: FxHashMap<Cell, CellId>,
    facets: Csr,
    cofacets: Csr,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.cells == other.cells
    }
}

impl Eq for Complex {}

impl Complex {
    /// Builds a complex from an explicit cell list, which must already be
    /// closed under taking faces. Duplicates are merged.
    pub fn from_cells(kind: ComplexKind, mut cells: Vec<Cell>) -> Result<Complex, ComplexError> {
        if cells.is_empty() {
            return Err(ComplexError::Empty);
        }
        for c in &cells {
            let ok = matches!(
                (kind, c),
                (ComplexKind::Simplicial, Cell::Simplex(_)) | (ComplexKind::Cubical, Cell::Cube(_))
            );
            if !ok {
                return Err(ComplexError::MixedKinds);
            }
        }
        cells.sort_unstable_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        cells.dedup();
        if let Some(Cell::Cube(first)) = cells.first() {
            let d = first.base.len();
            if cells.iter().any(|c| c.as_cube().is_some_and(|q| q.base.len() != d)) {
                return Err(ComplexError::InvalidCell("cubes of different ambient dimension".into()));
            }
        }
        let top = cells.last().expect("nonempty").dim();
        let mut dim_start = vec![0usize; top + 2];
        for c in &cells {
            dim_start[c.dim() + 1] += 1;
        }
        for k in 0..=top {
            dim_start[k + 1] += dim_start[k];
        }
        let index: FxHashMap<Cell, CellId> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), CellId(i as u32)))
            .collect();
        let mut offsets = Vec::with_capacity(cells.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0u32);
        for c in &cells {
            for f in c.facets() {
                match index.get(&f) {
                    Some(id) => targets.push(*id),
                    None => {
                        return Err(ComplexError::NotClosed {
                            cell: c.to_string(),
                            face: f.to_string(),
                        })
                    }
                }
            }
            offsets.push(targets.len() as u32);
        }
        let facets = Csr { offsets, targets };
        let cofacets = facets.transpose(cells.len());
        Ok(Complex {
            kind,
            cells,
            dim_start,
            index,
            facets,
            cofacets,
        })
    }

    /// The simplicial complex generated by the given simplices.
    pub fn from_maximal_simplices<I>(simplices: I) -> Result<Complex, ComplexError>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut cells = Vec::new();
        for s in simplices {
            let Cell::Simplex(s) = Cell::simplex(s)? else { unreachable!() };
            if s.len() > 24 {
                return Err(ComplexError::InvalidCell(format!("simplex with {} vertices", s.len())));
            }
            for mask in 1u32..(1u32 << s.len()) {
                let face = (0..s.len()).filter(|j| mask >> j & 1 == 1).map(|j| s[j]).collect();
                cells.push(Cell::Simplex(face));
            }
        }
        Complex::from_cells(ComplexKind::Simplicial, cells)
    }

    /// The cubical complex generated by the given cubes.
    pub fn from_maximal_cubes<I>(cubes: I) -> Result<Complex, ComplexError>
    where
        I: IntoIterator<Item = Cube>,
    {
        let mut cells = Vec::new();
        for c in cubes {
            cells.extend(c.proper_faces().into_iter().map(Cell::Cube));
            cells.push(Cell::Cube(c));
        }
        Complex::from_cells(ComplexKind::Cubical, cells)
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim_start.len() - 2
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.index()]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn id_of(&self, cell: &Cell) -> Option<CellId> {
        self.index.get(cell).copied()
    }

    pub fn dim_of(&self, id: CellId) -> usize {
        self.cells[id.index()].dim()
    }

    /// Ids of all `k`-cells, in canonical order.
    pub fn cells_of_dim(&self, k: usize) -> impl ExactSizeIterator<Item = CellId> {
        let (lo, hi) = if k <= self.dim() {
            (self.dim_start[k], self.dim_start[k + 1])
        } else {
            (0, 0)
        };
        (lo as u32..hi as u32).map(CellId)
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.cells_of_dim(k).len()
    }

    /// Position of a cell among the cells of its dimension.
    pub fn rank_in_dim(&self, id: CellId) -> usize {
        id.index() - self.dim_start[self.dim_of(id)]
    }

    pub fn facets(&self, id: CellId) -> &[CellId] {
        self.facets.row(id.index())
    }

    pub fn cofacets(&self, id: CellId) -> &[CellId] {
        self.cofacets.row(id.index())
    }

    /// Vertex cell for a simplicial ground label.
    pub fn vertex(&self, label: u32) -> Option<CellId> {
        self.id_of(&Cell::Simplex(vec![label]))
    }

    /// All faces of `id` including itself, ascending.
    pub fn closure(&self, id: CellId) -> Vec<CellId> {
        self.closure_of(std::iter::once(id))
    }

    fn closure_of<I: IntoIterator<Item = CellId>>(&self, seeds: I) -> Vec<CellId> {
        let mut seen = FxHashMap::default();
        let mut queue: VecDeque<CellId> = VecDeque::new();
        for s in seeds {
            if seen.insert(s, ()).is_none() {
                queue.push_back(s);
            }
        }
        while let Some(c) = queue.pop_front() {
            for &f in self.facets(c) {
                if seen.insert(f, ()).is_none() {
                    queue.push_back(f);
                }
            }
        }
        let mut out: Vec<CellId> = seen.into_keys().collect();
        out.sort_unstable();
        out
    }

    /// All cofaces of `id` (itself included) of dimension at most `max_dim`.
    pub fn cofaces_up_to(&self, id: CellId, max_dim: usize) -> Vec<CellId> {
        let mut seen = FxHashMap::default();
        seen.insert(id, ());
        let mut queue = VecDeque::from([id]);
        while let Some(c) = queue.pop_front() {
            if self.dim_of(c) >= max_dim {
                continue;
            }
            for &f in self.cofacets(c) {
                if seen.insert(f, ()).is_none() {
                    queue.push_back(f);
                }
            }
        }
        let mut out: Vec<CellId> = seen.into_keys().collect();
        out.sort_unstable();
        out
    }

    fn require_vertex(&self, v: CellId) -> Result<(), ComplexError> {
        if v.index() >= self.len() || self.dim_of(v) != 0 {
            return Err(ComplexError::UnknownCell(format!("{v} is not a vertex")));
        }
        Ok(())
    }

    /// Closed star: every face of every cell containing `v`.
    pub fn closed_star(&self, v: CellId) -> Result<Vec<CellId>, ComplexError> {
        self.require_vertex(v)?;
        let up = self.cofaces_up_to(v, self.dim());
        Ok(self.closure_of(up))
    }

    /// The `k`-cells of the closed star of `v`, for simplicial complexes.
    ///
    /// A `k`-simplex lies in the closed star iff it contains `v` or is the
    /// facet opposite `v` of a `(k+1)`-simplex containing `v`, so only cofaces
    /// up to dimension `k + 1` are visited.
    pub fn star_cells_of_dim(&self, v: CellId, k: usize) -> Result<Vec<CellId>, ComplexError> {
        self.require_vertex(v)?;
        if self.kind != ComplexKind::Simplicial {
            let mut all = self.closed_star(v)?;
            all.retain(|&c| self.dim_of(c) == k);
            return Ok(all);
        }
        let label = self.cell(v).as_simplex().expect("simplicial")[0];
        let mut out = Vec::new();
        for c in self.cofaces_up_to(v, k + 1) {
            let d = self.dim_of(c);
            if d == k {
                out.push(c);
            } else if d == k + 1 {
                let labels = self.cell(c).as_simplex().expect("simplicial");
                let opposite: Vec<u32> = labels.iter().copied().filter(|&l| l != label).collect();
                out.push(self.id_of(&Cell::Simplex(opposite)).expect("closed complex"));
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// All cells of dimension at most `i`.
    pub fn skeleton(&self, i: usize) -> Result<Complex, ComplexError> {
        if i > self.dim() {
            return Err(ComplexError::Dimension {
                requested: i,
                dim: self.dim(),
            });
        }
        Complex::from_cells(self.kind, self.cells[..self.dim_start[i + 1]].to_vec())
    }

    /// Every maximal cell has the top dimension.
    pub fn is_pure(&self) -> bool {
        let top = self.dim();
        (0..self.len()).all(|i| self.cells[i].dim() == top || !self.cofacets.row(i).is_empty())
    }

    /// Whether the `i`-skeleton is pure, without materializing it.
    pub fn skeleton_is_pure(&self, i: usize) -> Result<bool, ComplexError> {
        if i > self.dim() {
            return Err(ComplexError::Dimension {
                requested: i,
                dim: self.dim(),
            });
        }
        let covered = self.closure_of(self.cells_of_dim(i));
        Ok(covered.len() == self.dim_start[i + 1])
    }

    /// Dual graph of the `i`-skeleton: one vertex per `i`-cell, adjacent when
    /// the cells share an `(i-1)`-face. Vertex ids are ranks among `i`-cells.
    pub fn dual_graph(&self, i: usize) -> Result<DualGraph, ComplexError> {
        if !self.skeleton_is_pure(i)? {
            return Err(ComplexError::NotPure(i));
        }
        let start = self.dim_start[i] as u32;
        let cells: Vec<CellId> = self.cells_of_dim(i).collect();
        let mut g = Trigraph::with_vertices((0..cells.len() as u32).map(VertexId));
        if i > 0 {
            for ridge in self.cells_of_dim(i - 1) {
                let co = self.cofacets(ridge);
                for (a, &x) in co.iter().enumerate() {
                    for &y in &co[a + 1..] {
                        g.set_edge(
                            VertexId(x.0 - start),
                            VertexId(y.0 - start),
                            crate::trigraph::EdgeColor::Black,
                        );
                    }
                }
            }
        }
        Ok(DualGraph { graph: g, cells })
    }

    /// Cell counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.count_of_dim(k)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Faces of each cell other than itself, as ascending id lists.
    fn proper_face_lists(&self) -> Vec<Vec<CellId>> {
        let mut out: Vec<Vec<CellId>> = Vec::with_capacity(self.len());
        let mut mark = vec![u32::MAX; self.len()];
        for i in 0..self.len() {
            let mut faces = Vec::new();
            for &f in self.facets.row(i) {
                for &g in std::iter::once(&f).chain(out[f.index()].iter()) {
                    if mark[g.index()] != i as u32 {
                        mark[g.index()] = i as u32;
                        faces.push(g);
                    }
                }
            }
            faces.sort_unstable();
            out.push(faces);
        }
        out
    }

    /// Number of cells the barycentric subdivision would have.
    pub fn subdivision_size(&self) -> u64 {
        let faces = self.proper_face_lists();
        let mut chains = vec![0u64; self.len()];
        for i in 0..self.len() {
            chains[i] = faces[i]
                .iter()
                .fold(1u64, |acc, f| acc.saturating_add(chains[f.index()]));
        }
        chains.iter().fold(0u64, |a, &b| a.saturating_add(b))
    }

    /// Barycentric subdivision: the simplicial complex whose ground set is the
    /// cells of `self` (labelled by [`CellId`]) and whose simplices are the
    /// chains under strict face inclusion.
    pub fn barycentric_subdivision(&self, budget: &Budget) -> Result<Complex, ComplexError> {
        budget.admit(self.subdivision_size())?;
        let faces = self.proper_face_lists();
        let mut simplices = Vec::new();
        let mut chain: Vec<u32> = Vec::new();
        fn descend(faces: &[Vec<CellId>], top: CellId, chain: &mut Vec<u32>, out: &mut Vec<Cell>) {
            chain.push(top.0);
            // chain is strictly decreasing, so its reverse is sorted
            out.push(Cell::Simplex(chain.iter().rev().copied().collect()));
            for &f in &faces[top.index()] {
                descend(faces, f, chain, out);
            }
            chain.pop();
        }
        for i in 0..self.len() {
            descend(&faces, CellId(i as u32), &mut chain, &mut simplices);
        }
        Complex::from_cells(ComplexKind::Simplicial, simplices)
    }
}

/// Dual graph of a pure skeleton, with the cell behind each vertex.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub graph: Trigraph,
    /// `cells[v]` is the cell of vertex `VertexId(v)`.
    pub cells: Vec<CellId>,
}

impl DualGraph {
    pub fn cell_of(&self, v: VertexId) -> CellId {
        self.cells[v.0 as usize]
    }
}

/// The honeycomb decomposing `[1, n]^d` into `(n-1)^d` unit cubes.
pub fn honeycomb(d: usize, n: usize, budget: &Budget) -> Result<Complex, ComplexError> {
    if d == 0 || n < 2 {
        return Err(ComplexError::InvalidParameters(format!(
            "honeycomb needs d >= 1 and n >= 2 (got d={d}, n={n})"
        )));
    }
    if d > u8::MAX as usize {
        return Err(ComplexError::InvalidParameters(format!("dimension {d} too large")));
    }
    let total = (2 * n as u64 - 1).checked_pow(d as u32).unwrap_or(u64::MAX);
    budget.admit(total)?;
    let mut cells = Vec::with_capacity(total as usize);
    for mask in 0u32..(1u32 << d) {
        let dirs: Vec<u8> = (0..d as u8).filter(|a| mask >> a & 1 == 1).collect();
        let hi: Vec<i32> = (0..d)
            .map(|a| if mask >> a & 1 == 1 { n as i32 - 1 } else { n as i32 })
            .collect();
        let mut base = vec![1i32; d];
        'odometer: loop {
            cells.push(Cell::Cube(Cube {
                base: base.clone(),
                dirs: dirs.clone(),
            }));
            for a in (0..d).rev() {
                if base[a] < hi[a] {
                    base[a] += 1;
                    continue 'odometer;
                }
                base[a] = 1;
            }
            break;
        }
    }
    Complex::from_cells(ComplexKind::Cubical, cells)
}

/// One row of the face-count table derived by enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceCountRow {
    /// Dimension of the simplex / cube.
    pub k: usize,
    /// `faces[l]` = number of `l`-faces of the `k`-simplex.
    pub simplex_faces: Vec<usize>,
    /// Top-dimensional simplices in the subdivided `k`-simplex.
    pub subdivided_simplex_top: usize,
    /// Top-dimensional simplices in the subdivided `k`-cube.
    pub subdivided_cube_top: usize,
}

/// Face counts of small simplices and cubes, obtained by building the
/// complexes and their subdivisions rather than from closed forms.
///
/// For the `k`-simplex (which has `k + 1` vertices) the enumeration gives
/// `C(k+1, l+1)` faces of dimension `l` and `(k+1)!` top simplices after one
/// subdivision; the `k`-cube subdivides into `2^k k!` top simplices.
pub fn face_count_table(max_k: usize) -> Result<Vec<FaceCountRow>, ComplexError> {
    let budget = Budget::default();
    let mut rows = Vec::new();
    for k in 1..=max_k {
        let simplex = Complex::from_maximal_simplices([(0..=k as u32).collect()])?;
        let sd = simplex.barycentric_subdivision(&budget)?;
        let cube = honeycomb(k, 2, &budget)?;
        let cube_sd = cube.barycentric_subdivision(&budget)?;
        rows.push(FaceCountRow {
            k,
            simplex_faces: simplex.f_vector(),
            subdivided_simplex_top: sd.count_of_dim(k),
            subdivided_cube_top: cube_sd.count_of_dim(k),
        });
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CellRepr {
    Simplex(Vec<u32>),
    Cube { base: Vec<i32>, dirs: Vec<u8> },
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    kind: ComplexKind,
    dim: usize,
    cells: Vec<CellRepr>,
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let cells = self
            .cells
            .iter()
            .map(|c| match c {
                Cell::Simplex(v) => CellRepr::Simplex(v.clone()),
                Cell::Cube(q) => CellRepr::Cube {
                    base: q.base.clone(),
                    dirs: q.dirs.clone(),
                },
            })
            .collect();
        ComplexRepr {
            kind: self.kind,
            dim: self.dim(),
            cells,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ComplexRepr::deserialize(d)?;
        let cells = r
            .cells
            .into_iter()
            .map(|c| match c {
                CellRepr::Simplex(v) => Cell::simplex(v),
                CellRepr::Cube { base, dirs } => Cube::new(base, dirs).map(Cell::Cube),
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let x = Complex::from_cells(r.kind, cells).map_err(D::Error::custom)?;
        if x.dim() != r.dim {
            return Err(D::Error::custom(format!(
                "declared dimension {} but cells reach dimension {}",
                r.dim,
                x.dim()
            )));
        }
        Ok(x)
    }
}
