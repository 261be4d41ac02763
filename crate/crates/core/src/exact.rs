//! Exact twin-width of small trigraphs by exhaustive search.
//!
//! The search answers "is there a sequence of width at most k?" by depth
//! first search over contraction pairs, pruning children whose red degree
//! already exceeds k and memoizing refuted states up to isomorphism. The
//! optimum is found by probing k downward from a greedy upper bound.

use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trigraph::{ContractionSequence, Contractor, Trigraph, TrigraphError, VertexId};

/// Hard limit of the bitset representation.
pub const MAX_SUPPORTED_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    pub max_vertices: usize,
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_vertices: 12,
            max_nodes: 10_000_000,
            time_limit: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("trigraph has {n} vertices, the solver accepts at most {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("search budget exhausted after {nodes} nodes; best known width is {upper}")]
    BudgetExceeded {
        upper: usize,
        witness: ContractionSequence,
        nodes: u64,
    },
    #[error(transparent)]
    Trigraph(#[from] TrigraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: usize,
    pub witness: ContractionSequence,
    pub nodes_explored: u64,
    /// Wall time; left out of the JSON so reruns serialize identically.
    #[serde(skip)]
    pub time: Duration,
}

/// Trigraph on vertices `0..n` as black and red adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    n: usize,
    black: [u16; MAX_SUPPORTED_VERTICES],
    red: [u16; MAX_SUPPORTED_VERTICES],
}

fn drop_bit(m: u16, j: usize) -> u16 {
    let low = m & ((1u16 << j) - 1);
    let high = ((m as u32 >> (j + 1)) << j) as u16;
    low | high
}

impl State {
    fn from_trigraph(g: &Trigraph) -> (State, Vec<VertexId>) {
        let labels: Vec<VertexId> = g.vertices().collect();
        let slot: FxHashMap<VertexId, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut s = State {
            n: labels.len(),
            black: [0; MAX_SUPPORTED_VERTICES],
            red: [0; MAX_SUPPORTED_VERTICES],
        };
        for (a, b) in g.black_edges() {
            s.black[slot[&a]] |= 1 << slot[&b];
            s.black[slot[&b]] |= 1 << slot[&a];
        }
        for (a, b) in g.red_edges() {
            s.red[slot[&a]] |= 1 << slot[&b];
            s.red[slot[&b]] |= 1 << slot[&a];
        }
        (s, labels)
    }

    fn max_red(&self) -> usize {
        self.red[..self.n].iter().map(|r| r.count_ones() as usize).max().unwrap_or(0)
    }

    /// Merges `j` into `i` (`i < j`); the merged vertex keeps slot `i` and
    /// later slots shift down by one.
    fn contract(&self, i: usize, j: usize) -> State {
        debug_assert!(i < j && j < self.n);
        let mut s = self.clone();
        let both = !((1u16 << i) | (1u16 << j));
        let black = self.black[i] & self.black[j] & both;
        let red = (self.black[i] | self.black[j] | self.red[i] | self.red[j]) & both & !black;
        s.black[i] = black;
        s.red[i] = red;
        for x in 0..self.n {
            if x == i || x == j {
                continue;
            }
            let bit = 1u16 << i;
            s.black[x] &= !bit;
            s.red[x] &= !bit;
            if black >> x & 1 == 1 {
                s.black[x] |= bit;
            } else if red >> x & 1 == 1 {
                s.red[x] |= bit;
            }
        }
        for x in j..self.n - 1 {
            s.black[x] = s.black[x + 1];
            s.red[x] = s.red[x + 1];
        }
        s.n -= 1;
        s.black[s.n] = 0;
        s.red[s.n] = 0;
        for x in 0..s.n {
            s.black[x] = drop_bit(s.black[x], j);
            s.red[x] = drop_bit(s.red[x], j);
        }
        s
    }

    /// A pair with identical black and red neighborhoods. Contracting it
    /// yields the state minus one twin, so it never hurts.
    fn twin_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let mask = !((1u16 << i) | (1u16 << j));
                if self.black[i] & mask == self.black[j] & mask && self.red[i] & mask == self.red[j] & mask {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn edge_code(&self, order: &[usize]) -> Key {
        let mut bits = [0u64; 4];
        let mut pos = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                let (x, y) = (order[a], order[b]);
                let c = if self.black[x] >> y & 1 == 1 {
                    1u64
                } else if self.red[x] >> y & 1 == 1 {
                    2
                } else {
                    0
                };
                bits[pos / 32] |= c << (2 * (pos % 32));
                pos += 1;
            }
        }
        Key { n: self.n as u8, bits }
    }

    fn color_between(&self, x: usize, y: usize) -> u8 {
        if self.black[x] >> y & 1 == 1 {
            1
        } else if self.red[x] >> y & 1 == 1 {
            2
        } else {
            0
        }
    }

    /// Color refinement to the coarsest equitable partition. Colors are
    /// ranks of isomorphism-invariant signatures, so they are canonical.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(u32, Vec<(u8, u32)>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<(u8, u32)> = (0..self.n)
                        .filter(|&u| u != v)
                        .map(|u| (self.color_between(v, u), colors[u]))
                        .filter(|&(c, _)| c != 0)
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut sorted = sigs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            colors = sigs
                .iter()
                .map(|s| sorted.binary_search(s).expect("present") as u32)
                .collect();
            let now = sorted.len();
            if now == classes {
                return colors;
            }
            classes = now;
        }
    }

    /// Canonical code by individualization and refinement. If the search
    /// tree grows past `leaf_cap` leaves the labeled code is returned
    /// instead; it still identifies an isomorphic trigraph, so memo hits
    /// remain sound and only the hit rate suffers.
    fn canonical_key(&self, leaf_cap: usize) -> Key {
        let start = self.refine(vec![0; self.n]);
        let mut best: Option<Key> = None;
        let mut leaves = 0usize;
        if self.search_leaves(start, &mut best, &mut leaves, leaf_cap) {
            best.expect("at least one leaf")
        } else {
            let identity: Vec<usize> = (0..self.n).collect();
            let mut k = self.edge_code(&identity);
            k.n |= 0x80;
            k
        }
    }

    fn search_leaves(&self, colors: Vec<u32>, best: &mut Option<Key>, leaves: &mut usize, cap: usize) -> bool {
        let classes = count_classes(&colors);
        if classes == self.n {
            *leaves += 1;
            let mut order = vec![0usize; self.n];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            let code = self.edge_code(&order);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return *leaves <= cap;
        }
        // first smallest non-singleton class
        let mut sizes = vec![0usize; classes];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..classes)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete partition") as u32;
        for v in 0..self.n {
            if colors[v] != target {
                continue;
            }
            let split: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| if u == v { 2 * c } else { 2 * c + 1 })
                .collect();
            if !self.search_leaves(self.refine(split), best, leaves, cap) {
                return false;
            }
        }
        true
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Packed upper-triangle color code; the top bit of `n` marks a labeled
/// (non-canonical) fallback code.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    n: u8,
    bits: [u64; 4],
}

const LEAF_CAP: usize = 2048;

struct Search {
    memo: FxHashMap<Key, usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    exhausted: bool,
}

impl Search {
    /// Pairs (in slot terms) reducing `s` to one vertex with width at most
    /// `k`, or `None`. The caller guarantees `s.max_red() <= k`.
    fn feasible(&mut self, s: &State, k: usize) -> Option<Vec<(usize, usize)>> {
        if s.n <= 1 {
            return Some(Vec::new());
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline) {
            self.exhausted = true;
            return None;
        }
        if let Some((i, j)) = s.twin_pair() {
            let child = s.contract(i, j);
            return self.feasible(&child, k).map(|mut rest| {
                rest.insert(0, (i, j));
                rest
            });
        }
        let key = s.canonical_key(LEAF_CAP);
        if self.memo.get(&key).is_some_and(|&refuted| refuted >= k) {
            return None;
        }
        let mut children = Vec::new();
        for i in 0..s.n {
            for j in i + 1..s.n {
                let c = s.contract(i, j);
                let r = c.max_red();
                if r <= k {
                    children.push((r, i, j, c));
                }
            }
        }
        children.sort_by_key(|&(r, i, j, _)| (r, i, j));
        for (_, i, j, child) in children {
            if let Some(mut rest) = self.feasible(&child, k) {
                rest.insert(0, (i, j));
                return Some(rest);
            }
            if self.exhausted {
                return None;
            }
        }
        let e = self.memo.entry(key).or_insert(k);
        *e = (*e).max(k);
        None
    }
}

/// Replays slot pairs on `g`, producing a sequence over real vertex ids.
fn realize(g: &Trigraph, mut labels: Vec<VertexId>, pairs: &[(usize, usize)]) -> Result<(ContractionSequence, usize), TrigraphError> {
    let mut run = Contractor::new(g.clone());
    for &(i, j) in pairs {
        let w = run.contract(labels[i], labels[j])?;
        labels[i] = w;
        labels.remove(j);
    }
    let (_, seq, width) = run.finish();
    Ok((seq, width))
}

/// Repeatedly takes the pair whose contraction leaves the smallest maximum
/// red degree.
fn greedy(s: &State) -> Vec<(usize, usize)> {
    let mut cur = s.clone();
    let mut pairs = Vec::new();
    while cur.n > 1 {
        let mut best: Option<(usize, usize, usize, State)> = None;
        for i in 0..cur.n {
            for j in i + 1..cur.n {
                let c = cur.contract(i, j);
                let r = c.max_red();
                if best.as_ref().is_none_or(|b| r < b.0) {
                    best = Some((r, i, j, c));
                }
            }
        }
        let (_, i, j, c) = best.expect("at least two vertices");
        pairs.push((i, j));
        cur = c;
    }
    pairs
}

/// Exact twin-width of `g`. `upper_hint` is probed first when it lies
/// strictly between the known bounds.
pub fn exact_tww(g: &Trigraph, upper_hint: Option<usize>, config: &ExactConfig) -> Result<SolveResult, ExactError> {
    let started = Instant::now();
    let cap = config.max_vertices.min(MAX_SUPPORTED_VERTICES);
    if g.num_vertices() > cap {
        return Err(ExactError::TooLarge {
            n: g.num_vertices(),
            cap,
        });
    }
    let (state, labels) = State::from_trigraph(g);
    let (mut witness, mut best) = realize(g, labels.clone(), &greedy(&state))?;
    let mut lo = state.max_red();
    let mut search = Search {
        memo: FxHashMap::default(),
        nodes: 0,
        max_nodes: config.max_nodes,
        deadline: started + config.time_limit,
        exhausted: false,
    };
    let mut hint = upper_hint;
    while lo < best {
        let k = match hint.take() {
            Some(h) if h >= lo && h < best => h,
            _ => best - 1,
        };
        match search.feasible(&state, k) {
            Some(pairs) => {
                let (seq, width) = realize(g, labels.clone(), &pairs)?;
                debug_assert!(width <= k);
                witness = seq;
                best = width;
            }
            None if search.exhausted => {
                return Err(ExactError::BudgetExceeded {
                    upper: best,
                    witness,
                    nodes: search.nodes,
                })
            }
            None => lo = k + 1,
        }
    }
    Ok(SolveResult {
        value: best,
        witness,
        nodes_explored: search.nodes,
        time: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigraph::{apply_sequence, EdgeColor};

    fn state_to_trigraph(s: &State) -> Trigraph {
        let mut g = Trigraph::with_vertices((0..s.n as u32).map(VertexId));
        for a in 0..s.n {
            for b in a + 1..s.n {
                let (x, y) = (VertexId(a as u32), VertexId(b as u32));
                match s.color_between(a, b) {
                    1 => g.set_edge(x, y, EdgeColor::Black),
                    2 => g.set_edge(x, y, EdgeColor::Red),
                    _ => {}
                }
            }
        }
        g
    }

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn graph(n: u32, edges: &[(u32, u32)]) -> Trigraph {
        Trigraph::from_graph((0..n).map(v), edges.iter().map(|&(a, b)| (v(a), v(b)))).unwrap()
    }

    fn cycle(n: u32) -> Trigraph {
        let e: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &e)
    }

    fn solve(g: &Trigraph) -> SolveResult {
        let r = exact_tww(g, None, &ExactConfig::default()).unwrap();
        let rep = apply_sequence(g, &r.witness);
        assert!(rep.is_full());
        assert_eq!(rep.width, r.value);
        r
    }

    #[test]
    fn bitset_contraction_matches_trigraph() {
        let g = Trigraph::new(
            (0..5).map(v),
            [(v(0), v(1)), (v(1), v(2)), (v(2), v(3))],
            [(v(3), v(4)), (v(0), v(4))],
        )
        .unwrap();
        let (s, _) = State::from_trigraph(&g);
        assert_eq!(state_to_trigraph(&s), g);
        for i in 0..5 {
            for j in i + 1..5 {
                let (h, w) = g.contract(v(i as u32), v(j as u32)).unwrap();
                // relabel h so that w sits at slot i and later slots shift down
                let mut map = FxHashMap::default();
                let mut slot = 0u32;
                for x in 0..5u32 {
                    if x as usize == j {
                        continue;
                    }
                    let src = if x as usize == i { w } else { v(x) };
                    map.insert(src, v(slot));
                    slot += 1;
                }
                let relabeled = Trigraph::new(
                    (0..4).map(v),
                    h.black_edges().into_iter().map(|(a, b)| (map[&a], map[&b])),
                    h.red_edges().into_iter().map(|(a, b)| (map[&a], map[&b])),
                )
                .unwrap();
                assert_eq!(state_to_trigraph(&s.contract(i, j)), relabeled);
            }
        }
    }

    #[test]
    fn canonical_key_is_invariant() {
        let a = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        let b = graph(5, &[(3, 4), (4, 0), (0, 1), (1, 2), (2, 3), (3, 0)]);
        let (sa, _) = State::from_trigraph(&a);
        let (sb, _) = State::from_trigraph(&b);
        assert_eq!(sa.canonical_key(LEAF_CAP), sb.canonical_key(LEAF_CAP));
        let c = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 3), (1, 3)]);
        let (sc, _) = State::from_trigraph(&c);
        assert_ne!(sa.canonical_key(LEAF_CAP), sc.canonical_key(LEAF_CAP));
    }

    #[test]
    fn cliques_have_width_zero() {
        for n in 1..=7u32 {
            let e: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            assert_eq!(solve(&graph(n, &e)).value, 0);
        }
    }

    #[test]
    fn path_on_four_vertices() {
        assert_eq!(solve(&graph(4, &[(0, 1), (1, 2), (2, 3)])).value, 1);
    }

    #[test]
    fn empty_and_red_inputs() {
        assert_eq!(solve(&Trigraph::default()).value, 0);
        let red = Trigraph::new((0..3).map(v), [], [(v(0), v(1)), (v(1), v(2))]).unwrap();
        assert_eq!(solve(&red).value, 2);
    }

    #[test]
    fn cycles() {
        assert_eq!(solve(&cycle(5)).value, 2);
        assert_eq!(solve(&cycle(8)).value, 2);
    }

    #[test]
    fn hint_does_not_change_the_value() {
        let g = cycle(7);
        let base = solve(&g).value;
        for h in 0..4 {
            let r = exact_tww(&g, Some(h), &ExactConfig::default()).unwrap();
            assert_eq!(r.value, base);
        }
    }

    #[test]
    fn caps() {
        let big = Trigraph::with_vertices((0..13).map(v));
        assert!(matches!(
            exact_tww(&big, None, &ExactConfig::default()),
            Err(ExactError::TooLarge { n: 13, cap: 12 })
        ));
        let g = cycle(9);
        let tight = ExactConfig {
            max_nodes: 0,
            ..ExactConfig::default()
        };
        match exact_tww(&g, None, &tight) {
            Err(ExactError::BudgetExceeded { upper, witness, .. }) => {
                assert_eq!(apply_sequence(&g, &witness).width, upper);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
