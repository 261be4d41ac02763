//! Trigraphs, contractions and contraction sequences.
//!
//! A trigraph is a graph whose edges are either black or red. Contracting two
//! vertices `u` and `v` into a fresh vertex `w` keeps an edge `{w, x}` black
//! when both `{u, x}` and `{v, x}` were black, drops it when neither pair was
//! an edge, and makes it red in every other case. The width of a contraction
//! sequence is the largest red degree seen in any intermediate trigraph,
//! including the one the sequence starts from.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Vertex token, unique within one trigraph lineage.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Black,
    Red,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrigraphError {
    #[error("pair {{{0}, {1}}} is listed as both black and red")]
    Overlap(VertexId, VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {{{0}, {1}}} has an endpoint outside the vertex set")]
    DanglingEndpoint(VertexId, VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("cannot contract vertex {0} with itself")]
    SameVertex(VertexId),
    #[error("vertex map sends both {0} and {1} to {2}")]
    NonInjectiveMap(VertexId, VertexId, VertexId),
    #[error("vertex map is undefined on {0}")]
    PartialMap(VertexId),
    #[error("merged id {0} is not fresh in this lineage")]
    StaleId(VertexId),
}

/// Canonical unordered pair, smaller id first.
pub fn ordered_pair(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, Default)]
struct Neighbors {
    colors: FxHashMap<VertexId, EdgeColor>,
    red: usize,
}

impl Neighbors {
    fn insert(&mut self, x: VertexId, c: EdgeColor) {
        if let Some(old) = self.colors.insert(x, c) {
            if old == EdgeColor::Red {
                self.red -= 1;
            }
        }
        if c == EdgeColor::Red {
            self.red += 1;
        }
    }

    fn remove(&mut self, x: VertexId) -> Option<EdgeColor> {
        let old = self.colors.remove(&x);
        if old == Some(EdgeColor::Red) {
            self.red -= 1;
        }
        old
    }
}

/// Red-degree bookkeeping produced by an in-place contraction.
#[derive(Clone, Debug, Default)]
pub struct ContractionEffect {
    /// Red degrees of the two consumed vertices before the merge.
    pub consumed_red: [usize; 2],
    /// Red degree of the merged vertex.
    pub merged_red: usize,
    /// `(before, after)` red degree of every surviving neighbor.
    pub neighbor_red: Vec<(usize, usize)>,
}

/// A trigraph `(V, E, R)` with `E ∩ R = ∅`.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct Trigraph {
    adj: BTreeMap<VertexId, Neighbors>,
    next_fresh: u32,
}

impl PartialEq for Trigraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj.len() == other.adj.len()
            && self.adj.iter().zip(other.adj.iter()).all(|((a, na), (b, nb))| {
                a == b && na.colors == nb.colors
            })
    }
}

impl Eq for Trigraph {}


impl Trigraph {
    /// Validating constructor.
    pub fn new<V, B, R>(vertices: V, black: B, red: R) -> Result<Self, TrigraphError>
    where
        V: IntoIterator<Item = VertexId>,
        B: IntoIterator<Item = (VertexId, VertexId)>,
        R: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Trigraph::with_vertices(vertices);
        let mut black_pairs = FxHashSet::default();
        for (a, b) in black {
            g.check_pair(a, b)?;
            black_pairs.insert(ordered_pair(a, b));
            g.set_edge(a, b, EdgeColor::Black);
        }
        for (a, b) in red {
            g.check_pair(a, b)?;
            let p = ordered_pair(a, b);
            if black_pairs.contains(&p) {
                return Err(TrigraphError::Overlap(p.0, p.1));
            }
            g.set_edge(a, b, EdgeColor::Red);
        }
        Ok(g)
    }

    /// A plain graph, all edges black.
    pub fn from_graph<V, E>(vertices: V, edges: E) -> Result<Self, TrigraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Trigraph::new(vertices, edges, std::iter::empty())
    }

    /// Edgeless trigraph on the given vertices.
    pub fn with_vertices<V: IntoIterator<Item = VertexId>>(vertices: V) -> Self {
        let mut adj = BTreeMap::new();
        for v in vertices {
            adj.insert(v, Neighbors::default());
        }
        let next_fresh = adj.keys().next_back().map_or(0, |v: &VertexId| v.0 + 1);
        Trigraph { adj, next_fresh }
    }

    fn check_pair(&self, a: VertexId, b: VertexId) -> Result<(), TrigraphError> {
        if a == b {
            return Err(TrigraphError::SelfLoop(a));
        }
        if !self.adj.contains_key(&a) || !self.adj.contains_key(&b) {
            let (x, y) = ordered_pair(a, b);
            return Err(TrigraphError::DanglingEndpoint(x, y));
        }
        Ok(())
    }

    /// Inserts or recolors an edge. Both endpoints must exist and differ.
    pub(crate) fn set_edge(&mut self, a: VertexId, b: VertexId, c: EdgeColor) {
        debug_assert!(a != b);
        self.adj.get_mut(&a).expect("endpoint").insert(b, c);
        self.adj.get_mut(&b).expect("endpoint").insert(a, c);
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(|n| n.colors.len()).sum::<usize>() / 2
    }

    pub fn num_red_edges(&self) -> usize {
        self.adj.values().map(|n| n.red).sum::<usize>() / 2
    }

    pub fn num_black_edges(&self) -> usize {
        self.num_edges() - self.num_red_edges()
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn edge(&self, a: VertexId, b: VertexId) -> Option<EdgeColor> {
        self.adj.get(&a).and_then(|n| n.colors.get(&b).copied())
    }

    /// Neighbors of `v` in unspecified order.
    pub fn neighbors(
        &self,
        v: VertexId,
    ) -> Result<impl Iterator<Item = (VertexId, EdgeColor)> + '_, TrigraphError> {
        let n = self.adj.get(&v).ok_or(TrigraphError::UnknownVertex(v))?;
        Ok(n.colors.iter().map(|(x, c)| (*x, *c)))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, TrigraphError> {
        self.adj
            .get(&v)
            .map(|n| n.colors.len())
            .ok_or(TrigraphError::UnknownVertex(v))
    }

    pub fn red_degree(&self, v: VertexId) -> Result<usize, TrigraphError> {
        self.adj
            .get(&v)
            .map(|n| n.red)
            .ok_or(TrigraphError::UnknownVertex(v))
    }

    /// Largest red degree; 0 for an empty trigraph.
    pub fn max_red_degree(&self) -> usize {
        self.adj.values().map(|n| n.red).max().unwrap_or(0)
    }

    fn edges_of(&self, color: EdgeColor) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .flat_map(|(v, n)| {
                n.colors
                    .iter()
                    .filter(move |(x, c)| **c == color && *v < **x)
                    .map(move |(x, _)| (*v, *x))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Black edges, canonical and lexicographically sorted.
    pub fn black_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges_of(EdgeColor::Black)
    }

    /// Red edges, canonical and lexicographically sorted.
    pub fn red_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges_of(EdgeColor::Red)
    }

    /// Smallest id never used by this trigraph or its ancestors.
    pub fn next_fresh_id(&self) -> VertexId {
        VertexId(self.next_fresh)
    }

    /// Returns `g / u,v` and the id of the merged vertex.
    pub fn contract(&self, u: VertexId, v: VertexId) -> Result<(Trigraph, VertexId), TrigraphError> {
        let mut g = self.clone();
        let w = g.contract_in_place(u, v)?;
        Ok((g, w))
    }

    /// Contracts `u` and `v` into a fresh vertex, returning its id.
    pub fn contract_in_place(&mut self, u: VertexId, v: VertexId) -> Result<VertexId, TrigraphError> {
        let w = VertexId(self.next_fresh);
        self.contract_as(u, v, w)?;
        Ok(w)
    }

    /// Contracts `u` and `v` into a vertex named `merged`.
    ///
    /// `merged` must not be a current vertex; callers that need the stronger
    /// "never used in this lineage" guarantee track it themselves.
    pub fn contract_as(
        &mut self,
        u: VertexId,
        v: VertexId,
        merged: VertexId,
    ) -> Result<ContractionEffect, TrigraphError> {
        if u == v {
            return Err(TrigraphError::SameVertex(u));
        }
        for x in [u, v] {
            if !self.adj.contains_key(&x) {
                return Err(TrigraphError::UnknownVertex(x));
            }
        }
        if self.adj.contains_key(&merged) {
            return Err(TrigraphError::StaleId(merged));
        }
        let mut nu = self.adj.remove(&u).expect("checked");
        let mut nv = self.adj.remove(&v).expect("checked");
        let consumed_red = [nu.red, nv.red];
        nu.remove(v);
        nv.remove(u);

        let mut merged_nbrs = Neighbors::default();
        let mut neighbor_red = Vec::with_capacity(nu.colors.len() + nv.colors.len());
        let mut visit = |x: VertexId, cu: Option<EdgeColor>, cv: Option<EdgeColor>, adj: &mut BTreeMap<VertexId, Neighbors>| {
            let color = match (cu, cv) {
                (Some(EdgeColor::Black), Some(EdgeColor::Black)) => EdgeColor::Black,
                _ => EdgeColor::Red,
            };
            let nx = adj.get_mut(&x).expect("neighbor present");
            let before = nx.red;
            nx.remove(u);
            nx.remove(v);
            nx.insert(merged, color);
            neighbor_red.push((before, nx.red));
            merged_nbrs.insert(x, color);
        };
        for (&x, &cu) in nu.colors.iter() {
            visit(x, Some(cu), nv.colors.get(&x).copied(), &mut self.adj);
        }
        for (&x, &cv) in nv.colors.iter() {
            if !nu.colors.contains_key(&x) {
                visit(x, None, Some(cv), &mut self.adj);
            }
        }
        let merged_red = merged_nbrs.red;
        self.adj.insert(merged, merged_nbrs);
        self.next_fresh = self.next_fresh.max(merged.0.saturating_add(1));
        Ok(ContractionEffect {
            consumed_red,
            merged_red,
            neighbor_red,
        })
    }

    /// Induced subtrigraph on `keep`, colors preserved.
    pub fn induced<I: IntoIterator<Item = VertexId>>(&self, keep: I) -> Result<Trigraph, TrigraphError> {
        let keep: BTreeSet<VertexId> = keep.into_iter().collect();
        for &v in &keep {
            if !self.adj.contains_key(&v) {
                return Err(TrigraphError::UnknownVertex(v));
            }
        }
        let mut adj = BTreeMap::new();
        for &v in &keep {
            let mut n = Neighbors::default();
            for (x, c) in self.adj[&v].colors.iter() {
                if keep.contains(x) {
                    n.insert(*x, *c);
                }
            }
            adj.insert(v, n);
        }
        Ok(Trigraph {
            adj,
            next_fresh: self.next_fresh,
        })
    }

    /// `red(G)`: every edge recolored red.
    pub fn red_closure(&self) -> Trigraph {
        let mut g = self.clone();
        for n in g.adj.values_mut() {
            for c in n.colors.values_mut() {
                *c = EdgeColor::Red;
            }
            n.red = n.colors.len();
        }
        g
    }

    /// True iff `self` maps into `g` under `map` as a subtrigraph: every
    /// black (red) edge lands on a black (red) edge.
    pub fn is_subtrigraph_of(
        &self,
        g: &Trigraph,
        map: &HashMap<VertexId, VertexId>,
    ) -> Result<bool, TrigraphError> {
        let mut seen: FxHashMap<VertexId, VertexId> = FxHashMap::default();
        for v in self.vertices() {
            let img = *map.get(&v).ok_or(TrigraphError::PartialMap(v))?;
            if let Some(prev) = seen.insert(img, v) {
                let (a, b) = ordered_pair(prev, v);
                return Err(TrigraphError::NonInjectiveMap(a, b, img));
            }
            if !g.contains(img) {
                return Err(TrigraphError::UnknownVertex(img));
            }
        }
        for (v, n) in self.adj.iter() {
            for (x, c) in n.colors.iter() {
                if v < x && g.edge(map[v], map[x]) != Some(*c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = FxHashSet::default();
        let mut out = Vec::new();
        for v in self.vertices() {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = vec![v];
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for y in self.adj[&x].colors.keys() {
                    if seen.insert(*y) {
                        comp.push(*y);
                        stack.push(*y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

#[derive(Serialize, Deserialize)]
struct TrigraphRepr {
    vertices: Vec<VertexId>,
    black: Vec<(VertexId, VertexId)>,
    red: Vec<(VertexId, VertexId)>,
}

impl Serialize for Trigraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TrigraphRepr {
            vertices: self.vertices().collect(),
            black: self.black_edges(),
            red: self.red_edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Trigraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = TrigraphRepr::deserialize(d)?;
        Trigraph::new(r.vertices, r.black, r.red).map_err(serde::de::Error::custom)
    }
}

/// One merge step of a contraction sequence.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionStep {
    pub left: VertexId,
    pub right: VertexId,
    pub merged: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSequence {
    pub steps: Vec<ContractionStep>,
}

impl ContractionSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, left: VertexId, right: VertexId, merged: VertexId) {
        self.steps.push(ContractionStep { left, right, merged });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn extend(&mut self, other: &ContractionSequence) {
        self.steps.extend_from_slice(&other.steps);
    }
}

/// Outcome of replaying a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub valid: bool,
    pub width: usize,
    /// Max red degree of the base trigraph, then after each applied step.
    pub per_step_max_red: Vec<usize>,
    pub step_count: usize,
    /// Vertices left after the last applied step.
    pub remaining_vertices: usize,
    /// Index and reason of the first ill-formed step.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<StepFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFailure {
    pub step: usize,
    pub reason: String,
}

impl WidthReport {
    /// Valid and ending at a single vertex.
    pub fn is_full(&self) -> bool {
        self.valid && self.remaining_vertices <= 1
    }
}

/// Histogram of red degrees kept in sync with an in-place contraction run.
#[derive(Clone, Debug)]
pub struct RedDegreeTracker {
    counts: Vec<usize>,
    max: usize,
}

impl RedDegreeTracker {
    pub fn new(g: &Trigraph) -> Self {
        let mut t = RedDegreeTracker {
            counts: vec![0],
            max: 0,
        };
        for n in g.adj.values() {
            t.add(n.red);
        }
        t
    }

    fn add(&mut self, d: usize) {
        if d >= self.counts.len() {
            self.counts.resize(d + 1, 0);
        }
        self.counts[d] += 1;
        self.max = self.max.max(d);
    }

    fn sub(&mut self, d: usize) {
        self.counts[d] -= 1;
        while self.max > 0 && self.counts[self.max] == 0 {
            self.max -= 1;
        }
    }

    pub fn apply(&mut self, e: &ContractionEffect) {
        for &(before, after) in &e.neighbor_red {
            if before != after {
                self.add(after);
                self.sub(before);
            }
        }
        self.add(e.merged_red);
        self.sub(e.consumed_red[0]);
        self.sub(e.consumed_red[1]);
    }

    pub fn max(&self) -> usize {
        self.max
    }
}

/// A trigraph being contracted in place, with its running width.
#[derive(Clone, Debug)]
pub struct Contractor {
    graph: Trigraph,
    tracker: RedDegreeTracker,
    width: usize,
    sequence: ContractionSequence,
}

impl Contractor {
    pub fn new(graph: Trigraph) -> Self {
        let tracker = RedDegreeTracker::new(&graph);
        let width = tracker.max();
        Contractor {
            graph,
            tracker,
            width,
            sequence: ContractionSequence::new(),
        }
    }

    pub fn graph(&self) -> &Trigraph {
        &self.graph
    }

    /// Contracts into a fresh id and records the step.
    pub fn contract(&mut self, u: VertexId, v: VertexId) -> Result<VertexId, TrigraphError> {
        let w = self.graph.next_fresh_id();
        let effect = self.graph.contract_as(u, v, w)?;
        self.tracker.apply(&effect);
        self.width = self.width.max(self.tracker.max());
        self.sequence.push(u, v, w);
        Ok(w)
    }

    pub fn current_max_red(&self) -> usize {
        self.tracker.max()
    }

    /// Largest red degree seen so far, the starting trigraph included.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn sequence(&self) -> &ContractionSequence {
        &self.sequence
    }

    pub fn finish(self) -> (Trigraph, ContractionSequence, usize) {
        (self.graph, self.sequence, self.width)
    }
}

/// Replays `s` on `g` and measures its width. Ill-formed steps make the
/// report invalid instead of aborting.
pub fn apply_sequence(g: &Trigraph, s: &ContractionSequence) -> WidthReport {
    let mut graph = g.clone();
    let mut tracker = RedDegreeTracker::new(&graph);
    let mut used: FxHashSet<VertexId> = graph.vertices().collect();
    let mut per_step = Vec::with_capacity(s.len() + 1);
    per_step.push(tracker.max());
    let mut failure = None;
    for (i, step) in s.steps.iter().enumerate() {
        if used.contains(&step.merged) {
            failure = Some(StepFailure {
                step: i,
                reason: TrigraphError::StaleId(step.merged).to_string(),
            });
            break;
        }
        match graph.contract_as(step.left, step.right, step.merged) {
            Ok(effect) => {
                used.insert(step.merged);
                tracker.apply(&effect);
                per_step.push(tracker.max());
            }
            Err(e) => {
                failure = Some(StepFailure {
                    step: i,
                    reason: e.to_string(),
                });
                break;
            }
        }
    }
    WidthReport {
        valid: failure.is_none(),
        width: per_step.iter().copied().max().unwrap_or(0),
        step_count: per_step.len() - 1,
        per_step_max_red: per_step,
        remaining_vertices: graph.num_vertices(),
        failure,
    }
}
