use std::fmt;

use serde::{Serialize, Serializer};

use super::{parse_graph, Graph};
use crate::error::{Error, Result};

/// Largest pattern the counting and density routines accept.
pub const MAX_PATTERN_VERTICES: usize = 16;

/// A small labelled pattern graph `F`.
///
/// Vertices are `0..f` in the API; the conventional labels are `1..=f`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    f: usize,
    adj: Vec<u32>,
    name: Option<String>,
}

impl PatternGraph {
    pub fn new(f: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if f == 0 {
            return Err(crate::error::invalid("pattern", "needs at least one vertex"));
        }
        if f > MAX_PATTERN_VERTICES {
            return Err(Error::PatternTooLarge {
                f,
                max: MAX_PATTERN_VERTICES,
            });
        }
        let mut adj = vec![0u32; f];
        for &(i, j) in edges {
            if i >= f || j >= f {
                return Err(Error::VertexOutOfRange { vertex: i.max(j), n: f });
            }
            if i == j {
                return Err(crate::error::invalid("pattern", format!("loop at vertex {i}")));
            }
            if adj[i] >> j & 1 == 1 {
                return Err(crate::error::invalid("pattern", format!("duplicate edge {i} {j}")));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(Self { f, adj, name: None })
    }

    fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn complete(f: usize) -> Self {
        let edges: Vec<_> = (0..f).flat_map(|i| (i + 1..f).map(move |j| (i, j))).collect();
        Self::new(f, &edges).expect("valid complete pattern")
    }

    pub fn edgeless(f: usize) -> Self {
        Self::new(f, &[]).expect("valid edgeless pattern")
    }

    /// Path on `f` vertices, `0 - 1 - ... - (f-1)`.
    pub fn path(f: usize) -> Self {
        let edges: Vec<_> = (1..f).map(|i| (i - 1, i)).collect();
        Self::new(f, &edges).expect("valid path pattern")
    }

    pub fn cycle(f: usize) -> Result<Self> {
        if f < 3 {
            return Err(crate::error::invalid("cycle", "needs at least 3 vertices"));
        }
        let edges: Vec<_> = (0..f).map(|i| (i, (i + 1) % f)).collect();
        Self::new(f, &edges)
    }

    /// Star `S_k`: centre `0` joined to `k` leaves.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (1..=k).map(|j| (0, j)).collect();
        Self::new(k + 1, &edges).expect("valid star pattern")
    }

    /// Built-in names: `K<f>`, `C<f>`, `P<f>` (path on f vertices),
    /// `S<k>` (star with k leaves), `E<f>` (edgeless).
    pub fn builtin(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownPattern(name.to_string());
        let mut chars = name.chars();
        let kind = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let size: usize = chars.as_str().parse().map_err(|_| unknown())?;
        if size > MAX_PATTERN_VERTICES {
            return Err(Error::PatternTooLarge {
                f: size,
                max: MAX_PATTERN_VERTICES,
            });
        }
        let pattern = match kind {
            'K' if size >= 1 => Self::complete(size),
            'E' if size >= 1 => Self::edgeless(size),
            'P' if size >= 1 => Self::path(size),
            'C' => Self::cycle(size)?,
            'S' if size < MAX_PATTERN_VERTICES => Self::star(size),
            _ => return Err(unknown()),
        };
        Ok(pattern.named(&format!("{kind}{size}")))
    }

    /// Pattern from the graph edge-list format.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_graph(&parse_graph(text)?)
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        Self::new(g.n(), &g.edges().collect::<Vec<_>>())
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.f, &self.edges().collect::<Vec<_>>()).expect("pattern is simple")
    }

    /// Every labelled graph on `f` vertices, in order of edge bitmask over
    /// the lexicographically ordered pairs.
    pub fn all_on(f: usize) -> impl Iterator<Item = Self> {
        let pairs: Vec<(usize, usize)> = (0..f).flat_map(|i| (i + 1..f).map(move |j| (i, j))).collect();
        let total = 1u64 << pairs.len();
        (0..total).map(move |mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Self::new(f, &edges).expect("valid enumerated pattern")
        })
    }

    #[inline]
    pub fn f(&self) -> usize {
        self.f
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn pair_count(&self) -> usize {
        self.f * (self.f - 1) / 2
    }

    pub fn non_edge_count(&self) -> usize {
        self.pair_count() - self.edge_count()
    }

    /// `e(F) / C(f, 2)`; zero for a single vertex.
    pub fn edge_density(&self) -> f64 {
        if self.f < 2 {
            0.0
        } else {
            self.edge_count() as f64 / self.pair_count() as f64
        }
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    #[inline]
    pub fn neighbor_mask(&self, i: usize) -> u32 {
        self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.f).flat_map(move |i| (i + 1..self.f).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.pair_count()
    }

    pub fn is_edgeless(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn is_regular(&self) -> bool {
        (1..self.f).all(|i| self.degree(i) == self.degree(0))
    }

    pub fn complement(&self) -> Self {
        let all = if self.f == 32 { u32::MAX } else { (1u32 << self.f) - 1 };
        let adj = (0..self.f).map(|i| !self.adj[i] & all & !(1 << i)).collect();
        Self {
            f: self.f,
            adj,
            name: self.name.as_ref().map(|n| format!("co-{n}")),
        }
    }

    /// True when every edge of `self` is an edge of `other` (same vertex set).
    pub fn is_spanning_subgraph_of(&self, other: &Self) -> bool {
        self.f == other.f && self.adj.iter().zip(&other.adj).all(|(a, b)| a & !b == 0)
    }

    /// Pattern with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges: Vec<_> = self.edges().map(|(i, j)| (perm[i], perm[j])).collect();
        Self::new(self.f, &edges).expect("relabelling of a valid pattern")
    }

    /// Number of edges with both endpoints in the vertex mask `set`.
    pub fn edges_within(&self, set: u32) -> usize {
        (0..self.f)
            .filter(|&i| set >> i & 1 == 1)
            .map(|i| (self.adj[i] & set).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Number of edges with exactly one endpoint in `set`.
    pub fn edges_across(&self, set: u32) -> usize {
        (0..self.f)
            .filter(|&i| set >> i & 1 == 1)
            .map(|i| (self.adj[i] & !set).count_ones() as usize)
            .sum()
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "F{}{:?}", self.f, self.edges().collect::<Vec<_>>()),
        }
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => f.write_str(name),
            None => {
                let edges: Vec<String> = self.edges().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
                write!(f, "F{}[{}]", self.f, edges.join(","))
            }
        }
    }
}

impl Serialize for PatternGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("PatternGraph", 3)?;
        s.serialize_field("name", &self.to_string())?;
        s.serialize_field("f", &self.f)?;
        s.serialize_field("edges", &self.edges().collect::<Vec<_>>())?;
        s.end()
    }
}
