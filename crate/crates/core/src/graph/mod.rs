//! Finite simple graphs, pattern graphs and exact constrained counting.

pub(crate) mod bitset;
pub(crate) mod count;
mod pattern;

pub use count::{count_homomorphisms, count_subgraphs, cut_edges, t_inj};
pub use pattern::PatternGraph;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseErrorKind, Result};
use crate::rng::SeededRng;

/// A finite simple labelled graph on vertices `0..n`.
///
/// Adjacency is stored as one bitset row per vertex, which keeps the
/// counting inner loops to word-wise intersections.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = bitset::words_for(n);
        Self {
            n,
            words,
            rows: vec![0; n * words],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::empty(n).complement()
    }

    /// Builds a graph from 0-based edges, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter {
                    name: "edges",
                    reason: format!("loop at vertex {u}"),
                });
            }
            if !g.insert_edge(u, v) {
                return Err(Error::InvalidParameter {
                    name: "edges",
                    reason: format!("duplicate edge {u} {v}"),
                });
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.insert_edge(i, (i + 1) % n);
            }
        } else if n == 2 {
            g.insert_edge(0, 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.insert_edge(i - 1, i);
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// `G(n, p)`: pairs `(u, v)`, `u < v`, visited in lexicographic order,
    /// each kept when the next `uniform()` draw is `< p`.
    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = SeededRng::new(seed);
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.bernoulli(p) {
                    g.insert_edge(u, v);
                }
            }
        }
        g
    }

    /// Returns false when the edge was already present.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        if self.has_edge(u, v) {
            return false;
        }
        bitset::set(&mut self.rows[u * self.words..(u + 1) * self.words], v);
        bitset::set(&mut self.rows[v * self.words..(v + 1) * self.words], u);
        self.edge_count += 1;
        true
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bitset::test(self.row(u), v)
    }

    pub fn degree(&self, v: usize) -> usize {
        bitset::count(self.row(v)) as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::ones(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn complement(&self) -> Self {
        let full = bitset::full(self.n);
        let mut rows = self.rows.clone();
        for v in 0..self.n {
            let row = &mut rows[v * self.words..(v + 1) * self.words];
            for (w, f) in row.iter_mut().zip(&full) {
                *w = !*w & f;
            }
            bitset::clear(row, v);
        }
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        Self {
            n: self.n,
            words: self.words,
            rows,
            edge_count: pairs - self.edge_count,
        }
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(perm.len(), self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter {
                    name: "perm",
                    reason: "not a permutation".into(),
                });
            }
        }
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.insert_edge(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// Canonical edge-list text: vertex count, then sorted `u v` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Parses the edge-list format: the first non-comment line holds `n`, each
/// following line holds one edge `u v`. `#` starts a comment; blank lines
/// are skipped. Loops, duplicate edges and out-of-range endpoints are
/// rejected with the offending line number.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |kind| Error::Parse { line, kind };
        let malformed = || err(ParseErrorKind::Malformed(content.to_string()));
        let graph = match g.as_mut() {
            None => {
                let n: usize = content.parse().map_err(|_| malformed())?;
                g = Some(Graph::empty(n));
                continue;
            }
            Some(graph) => graph,
        };
        let mut fields = content.split_whitespace();
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (
                a.parse::<usize>().map_err(|_| malformed())?,
                b.parse::<usize>().map_err(|_| malformed())?,
            ),
            _ => return Err(malformed()),
        };
        let n = graph.n();
        for vertex in [u, v] {
            if vertex >= n {
                return Err(err(ParseErrorKind::OutOfRange { vertex, n }));
            }
        }
        if u == v {
            return Err(err(ParseErrorKind::Loop(u)));
        }
        if !graph.insert_edge(u, v) {
            return Err(err(ParseErrorKind::Duplicate(u.min(v), u.max(v))));
        }
    }
    g.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        kind: ParseErrorKind::MissingHeader,
    })
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

/// A subset of host vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self(vertices)
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// `0..n` minus this set.
    pub fn complement(&self, n: usize) -> Self {
        Self((0..n).filter(|&v| !self.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// Vertices `v < n` whose bit is set in `mask` (`n <= 64`).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self((0..n).filter(|&v| v < 64 && mask >> v & 1 == 1).collect())
    }

    pub(crate) fn to_bits(&self, n: usize) -> Result<Vec<u64>> {
        let mut bits = vec![0; bitset::words_for(n)];
        for &v in &self.0 {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            bitset::set(&mut bits, v);
        }
        Ok(bits)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Where pattern vertices may be mapped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum VertexConstraint {
    #[default]
    None,
    /// Every pattern vertex maps into the same set `U`.
    Single(VertexSet),
    /// Pattern vertex `i` maps into the `i`-th set.
    PerVertex(Vec<VertexSet>),
}

/// `n^-2 * sum_v |d_v - p n|`.
pub fn regularity_deviation(g: &Graph, p: f64) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::EmptyHost);
    }
    let n = g.n() as f64;
    let total: f64 = (0..g.n()).map(|v| (g.degree(v) as f64 - p * n).abs()).sum();
    Ok(total / (n * n))
}

/// `(1/n) * sum_v (d_v / n)^k`, the k-th moment of the normalized degree of
/// a uniformly random vertex.
pub fn degree_moment(g: &Graph, k: u32) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::EmptyHost);
    }
    if k == 0 {
        return Err(crate::error::invalid("k", "must be at least 1"));
    }
    let n = g.n() as f64;
    let sum: f64 = (0..g.n()).map(|v| (g.degree(v) as f64 / n).powi(k as i32)).sum();
    Ok(sum / n)
}
