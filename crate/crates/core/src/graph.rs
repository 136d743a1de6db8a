//! Simple undirected graphs on at most [`MAX_VERTICES`] vertices.
//!
//! Adjacency is stored as one 16-bit row per vertex. Every constructor keeps
//! the two structural invariants: no loops, and a symmetric adjacency.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the vertex count of a [`Graph`].
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop at vertex {0}: only simple graphs are supported")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("cycle length must be at least 3, got {0}")]
    CycleTooShort(usize),
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("malformed graph6 input: {0}")]
    Graph6(String),
    #[error("malformed edge list: {0}")]
    EdgeList(String),
}

/// A set of vertices, as a bitmask over `0..16`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u16);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// All vertices `0..n`.
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u16::MAX)
        } else {
            VertexSet((1u16 << n) - 1)
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn without(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

/// Odd-girth of a graph: the length of a shortest odd cycle, or
/// [`OddGirth::Infinite`] for bipartite graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OddGirth {
    Finite(usize),
    Infinite,
}

impl OddGirth {
    pub fn finite(self) -> Option<usize> {
        match self {
            OddGirth::Finite(k) => Some(k),
            OddGirth::Infinite => None,
        }
    }
}

impl fmt::Display for OddGirth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddGirth::Finite(k) => write!(f, "{k}"),
            OddGirth::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for OddGirth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OddGirth::Finite(k) => s.serialize_u64(*k as u64),
            OddGirth::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: [u16; MAX_VERTICES],
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n,
            rows: [0; MAX_VERTICES],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if g.has_edge_checked(u, v)? {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows; rows must already be symmetric
    /// and loop-free.
    pub(crate) fn from_rows(n: usize, rows: &[u16]) -> Graph {
        let mut g = Graph {
            n,
            rows: [0; MAX_VERTICES],
        };
        g.rows[..n].copy_from_slice(&rows[..n]);
        g.debug_check();
        g
    }

    fn has_edge_checked(&self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.has_edge(u, v))
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Adds the edge `uv`. Adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.rows[u] &= !(1 << v);
            self.rows[v] &= !(1 << u);
        }
    }

    fn debug_check(&self) {
        debug_assert!(self.n <= MAX_VERTICES);
        for u in 0..MAX_VERTICES {
            if u >= self.n {
                debug_assert_eq!(self.rows[u], 0);
                continue;
            }
            debug_assert_eq!(self.rows[u] >> u & 1, 0, "loop at {u}");
            debug_assert_eq!((self.rows[u] as u32) >> self.n, 0);
            for v in 0..self.n {
                debug_assert_eq!(self.has_edge(u, v), self.has_edge(v, u));
            }
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows[..self.n]
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] >> v & 1 == 1
    }

    /// Adjacency row of `v` as a bitmask.
    pub fn row(&self, v: usize) -> u16 {
        self.rows[v]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.rows[v])
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).max()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in VertexSet(self.rows[u]).iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let full = VertexSet::full(self.n).0;
        let mut rows = [0u16; MAX_VERTICES];
        for (v, row) in rows.iter_mut().enumerate().take(self.n) {
            *row = !self.rows[v] & full & !(1 << v);
        }
        Graph::from_rows(self.n, &rows)
    }

    /// Subgraph induced by `s`, relabelled `0..|s|` in increasing order.
    pub fn induced(&self, s: VertexSet) -> Graph {
        let s = VertexSet(s.0 & VertexSet::full(self.n).0);
        let verts: Vec<usize> = s.iter().collect();
        let mut rows = [0u16; MAX_VERTICES];
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if self.has_edge(u, v) {
                    rows[i] |= 1 << j;
                }
            }
        }
        Graph::from_rows(verts.len(), &rows)
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut rows = [0u16; MAX_VERTICES];
        for (u, v) in self.edges() {
            rows[perm[u]] |= 1 << perm[v];
            rows[perm[v]] |= 1 << perm[u];
        }
        Graph::from_rows(self.n, &rows)
    }

    /// Vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut rows = [0u16; MAX_VERTICES];
        rows[..self.n].copy_from_slice(&self.rows[..self.n]);
        for v in 0..other.n {
            rows[self.n + v] = other.rows[v] << self.n;
        }
        Ok(Graph::from_rows(n, &rows))
    }

    /// Adds `p` new vertices forming a clique, each adjacent to every
    /// original vertex.
    pub fn add_universal(&self, p: usize) -> Result<Graph, GraphError> {
        let mut g = self.disjoint_union(&clique(p)?)?;
        for u in 0..self.n {
            for w in self.n..self.n + p {
                g.add_edge(u, w)?;
            }
        }
        Ok(g)
    }

    /// Connected components as vertex sets, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::EMPTY;
            comp.insert(s);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = 0u16;
                for v in frontier.iter() {
                    next |= self.rows[v];
                }
                frontier = VertexSet(next & !comp.0);
                comp.0 |= next;
            }
            seen.0 |= comp.0;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_bipartite(&self) -> bool {
        self.odd_girth() == OddGirth::Infinite
    }

    pub fn has_clique(&self, k: usize) -> bool {
        fn grow(g: &Graph, cand: u16, need: usize) -> bool {
            if need == 0 {
                return true;
            }
            if (cand.count_ones() as usize) < need {
                return false;
            }
            let mut rest = cand;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if grow(g, rest & g.rows[v], need - 1) {
                    return true;
                }
            }
            false
        }
        grow(self, VertexSet::full(self.n).0, k)
    }

    /// Length of a shortest odd cycle.
    ///
    /// Computed as the shortest odd closed walk through BFS on the bipartite
    /// double cover. A shortest odd closed walk is always an induced cycle,
    /// so this agrees with the induced-cycle definition.
    pub fn odd_girth(&self) -> OddGirth {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; 2 * self.n];
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[2 * s] = 0;
            let mut queue = VecDeque::from([(s, 0usize)]);
            while let Some((v, p)) = queue.pop_front() {
                let d = dist[2 * v + p];
                if v == s && p == 1 {
                    break;
                }
                if best.is_some_and(|b| d + 1 >= b) {
                    break;
                }
                for w in self.neighbors(v).iter() {
                    let q = 1 - p;
                    if dist[2 * w + q] == usize::MAX {
                        dist[2 * w + q] = d + 1;
                        queue.push_back((w, q));
                    }
                }
            }
            let d = dist[2 * s + 1];
            if d != usize::MAX {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best.map_or(OddGirth::Infinite, OddGirth::Finite)
    }

    /// graph6 encoding (ASCII bytes).
    pub fn to_graph6(&self) -> String {
        crate::graph6::encode(self)
    }

    pub fn from_graph6(s: &str) -> Result<Graph, GraphError> {
        crate::graph6::decode(s.as_bytes())
    }

    /// Plain edge-list text: a header line `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let err = |m: &str| GraphError::EdgeList(m.to_string());
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| err("missing header"))?;
        let nums = parse_pair(header).ok_or_else(|| err("header must be `n m`"))?;
        let (n, m) = nums;
        let mut g = Graph::empty(n)?;
        let mut count = 0;
        for line in lines {
            let (u, v) = parse_pair(line).ok_or_else(|| err(&format!("bad edge line `{line}`")))?;
            if g.has_edge_checked(u, v)? {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            g.add_edge(u, v)?;
            count += 1;
        }
        if count != m {
            return Err(err(&format!("header announces {m} edges, found {count}")));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
    let a = it.next()?.ok()?;
    let b = it.next()?.ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// The complete graph `K_k`.
pub fn clique(k: usize) -> Result<Graph, GraphError> {
    Ok(Graph::empty(k)?.complement())
}

/// The cycle `C_k` with edges `(i, i+1 mod k)`.
pub fn cycle(k: usize) -> Result<Graph, GraphError> {
    if k < 3 {
        return Err(GraphError::CycleTooShort(k));
    }
    let mut g = Graph::empty(k)?;
    for i in 0..k {
        g.add_edge(i, (i + 1) % k)?;
    }
    Ok(g)
}

/// The path on `k` vertices.
pub fn path(k: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(k)?;
    for i in 1..k {
        g.add_edge(i - 1, i)?;
    }
    Ok(g)
}

// Letter-labelled graphs use the vertex order a, b, c, d, e, u, v -> 0..6.
// Every such graph has the 5-cycle a-b-c-d-e-a plus u-a, u-b, v-a, v-e.
const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;
const U: usize = 5;
const V: usize = 6;

fn motif(extra: &[(usize, usize)]) -> Graph {
    let mut edges = vec![(A, B), (B, C), (C, D), (D, E), (E, A), (U, A), (U, B), (V, A), (V, E)];
    edges.extend_from_slice(extra);
    Graph::from_edges(7, &edges).expect("static transcription")
}

/// The Grötzsch graph: outer 5-cycle `0..5`, inner vertices `5..10` where
/// `5+i` is adjacent to the two outer neighbours of `i`, and a hub `10`
/// adjacent to every inner vertex.
pub fn grotzsch() -> Graph {
    let mut g = cycle(5).unwrap().disjoint_union(&Graph::empty(6).unwrap()).unwrap();
    for i in 0..5 {
        g.add_edge(5 + i, (i + 1) % 5).unwrap();
        g.add_edge(5 + i, (i + 4) % 5).unwrap();
        g.add_edge(10, 5 + i).unwrap();
    }
    g
}

/// The Petersen graph: outer 5-cycle `0..5`, spokes `i -- 5+i`, inner
/// pentagram `5+i -- 5+(i+2 mod 5)`.
pub fn petersen() -> Graph {
    let mut g = cycle(5).unwrap().disjoint_union(&Graph::empty(5).unwrap()).unwrap();
    for i in 0..5 {
        g.add_edge(i, 5 + i).unwrap();
        g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
    }
    g
}

/// The six sporadic 7-vertex cores `G_1..G_6` (index 1-based).
pub fn sporadic(i: usize) -> Option<Graph> {
    let g = match i {
        // G_1 is drawn on a plain pentagon v1..v5 with u ~ v1,v4,v5 and
        // v ~ v1,v2,v3; v1..v5 are a..e here.
        1 => Graph::from_edges(
            7,
            &[(A, B), (B, C), (C, D), (D, E), (E, A), (U, A), (U, D), (U, E), (V, A), (V, B), (V, C)],
        )
        .unwrap(),
        2 => motif(&[(C, U), (C, V), (D, V)]),
        3 => motif(&[(C, U), (C, V), (D, U), (D, V)]),
        4 => motif(&[(U, V), (C, U), (D, V)]),
        5 => motif(&[(E, U), (C, V), (D, U)]),
        6 => motif(&[(E, U), (C, V), (D, U), (D, V)]),
        _ => return None,
    };
    Some(g)
}

/// Looks up a bundled graph by name.
///
/// Accepted names: `grotzsch`, `petersen`, `g1`..`g6`, `c5p1`, `c5p2`, and
/// the families `k<N>` (clique), `c<N>` (cycle), `cc<N>` (complement of a
/// cycle), `c5p<P>` (`C_5` plus `P` universal vertices).
pub fn named(name: &str) -> Result<Graph, GraphError> {
    let lower = name.to_ascii_lowercase();
    let unknown = || GraphError::UnknownName(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    match lower.as_str() {
        "grotzsch" | "grötzsch" => return Ok(grotzsch()),
        "petersen" => return Ok(petersen()),
        _ => {}
    }
    if let Some(rest) = lower.strip_prefix("c5p") {
        return cycle(5)?.add_universal(num(rest)?);
    }
    if let Some(rest) = lower.strip_prefix("cc") {
        return Ok(cycle(num(rest)?)?.complement());
    }
    if let Some(rest) = lower.strip_prefix('g') {
        return sporadic(num(rest)?).ok_or_else(unknown);
    }
    if let Some(rest) = lower.strip_prefix('k') {
        return clique(num(rest)?);
    }
    if let Some(rest) = lower.strip_prefix('c') {
        return cycle(num(rest)?);
    }
    Err(unknown())
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}
