//! Small simple labelled graphs on vertices `1..=n`, the graph families the
//! toolkit counts over, and connectivity queries on induced subgraphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count; vertex sets are single machine words.
pub const MAX_VERTICES: usize = 64;

/// A set of vertices drawn from `1..=64`, stored as a bit field
/// (vertex `v` is bit `v - 1`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(1u64 << (v - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    /// Smallest member.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest member.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, v: usize) {
        *self = self.union(Self::singleton(v));
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A simple undirected graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    // adjacency[v - 1] = neighbours of v
    adjacency: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// endpoints outside `1..=n`.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
        }
        let mut g = Graph { n, adjacency: vec![VertexSet::EMPTY; n] };
        for &(u, v) in edges {
            if !(1..=n).contains(&u) || !(1..=n).contains(&v) {
                return Err(Error::InvalidGraph(format!("edge {{{u},{v}}} leaves 1..={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if g.adjacency[u - 1].contains(v) {
                return Err(Error::InvalidGraph(format!("repeated edge {{{u},{v}}}")));
            }
            g.adjacency[u - 1].insert(v);
            g.adjacency[v - 1].insert(u);
        }
        Ok(g)
    }

    fn from_edges_unchecked(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: Vec<_> = edges.into_iter().collect();
        Self::new(n, &edges).expect("family constructors produce simple graphs")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v - 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (1..=self.n).contains(&u) && self.adjacency[u - 1].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.n).flat_map(|u| self.adjacency[u - 1].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Union of the neighbourhoods of every member of `s`.
    pub fn neighborhood(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(self.adjacency[v - 1]))
    }

    fn check_subset(&self, s: VertexSet) -> Result<()> {
        if !s.is_subset(self.vertices()) {
            return Err(Error::InvalidVertexSet(format!("{s} is not a subset of 1..={}", self.n)));
        }
        Ok(())
    }

    /// Whether the subgraph induced by `s` is connected.
    pub fn is_connected_induced(&self, s: VertexSet) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::InvalidVertexSet("connectivity of the empty set".into()));
        }
        self.check_subset(s)?;
        Ok(self.connected_unchecked(s))
    }

    /// Connectivity test for a nonempty subset already known to be in range.
    pub(crate) fn connected_unchecked(&self, s: VertexSet) -> bool {
        let start = VertexSet::singleton(s.min().expect("nonempty"));
        let mut seen = start;
        let mut frontier = start;
        while !frontier.is_empty() {
            frontier = self.neighborhood(frontier).intersection(s).difference(seen);
            seen = seen.union(frontier);
        }
        seen == s
    }

    /// Whether some edge joins a vertex of `a` to a vertex of `b`.
    pub fn has_crossing_edge(&self, a: VertexSet, b: VertexSet) -> Result<bool> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidVertexSet("crossing edge query on an empty side".into()));
        }
        if !a.is_disjoint(b) {
            return Err(Error::InvalidVertexSet(format!("{a} and {b} overlap")));
        }
        self.check_subset(a)?;
        self.check_subset(b)?;
        Ok(self.crossing_unchecked(a, b))
    }

    pub(crate) fn crossing_unchecked(&self, a: VertexSet, b: VertexSet) -> bool {
        !self.neighborhood(a).is_disjoint(b)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_unchecked(self.vertices())
    }

    /// Star with `total` vertices. The centre is vertex 1 and the leaves are
    /// `2..=total`; the usual drawing labels the centre 0 and leaves `1..total`.
    pub fn star(total: usize) -> Result<Self> {
        if total < 2 {
            return Err(Error::InvalidArgument(format!("star needs at least 2 vertices, got {total}")));
        }
        if total > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!("star on {total} vertices exceeds {MAX_VERTICES}")));
        }
        Ok(Self::from_edges_unchecked(total, (2..=total).map(|v| (1, v))))
    }

    pub fn path(n: usize) -> Result<Self> {
        check_size("path", n, 1)?;
        Ok(Self::from_edges_unchecked(n, (1..n).map(|i| (i, i + 1))))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        check_size("cycle", n, 3)?;
        Ok(Self::from_edges_unchecked(n, (1..n).map(|i| (i, i + 1)).chain([(1, n)])))
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_size("complete graph", n, 1)?;
        Ok(Self::from_edges_unchecked(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)))))
    }

    /// A path of `spine` vertices with `legs[i]` pendant vertices hanging off
    /// spine vertex `i + 1`. Spine vertices come first (`1..=spine`), then the
    /// legs in spine order.
    pub fn caterpillar(spine: usize, legs: &[usize]) -> Result<Self> {
        if spine == 0 {
            return Err(Error::InvalidArgument("caterpillar spine must be nonempty".into()));
        }
        if legs.len() != spine {
            return Err(Error::InvalidArgument(format!(
                "caterpillar has {spine} spine vertices but {} leg counts",
                legs.len()
            )));
        }
        let n = spine + legs.iter().sum::<usize>();
        check_size("caterpillar", n, 1)?;
        let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i, i + 1)).collect();
        let mut next = spine + 1;
        for (i, &k) in legs.iter().enumerate() {
            for _ in 0..k {
                edges.push((i + 1, next));
                next += 1;
            }
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson { n: self.n, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() })
            .expect("graph serialization is infallible")
    }

    /// Parses `{"n": int, "edges": [[u, v], …]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(raw.n, &edges)
    }
}

fn check_size(what: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("{what} needs at least {min} vertices, got {n}")));
    }
    if n > MAX_VERTICES {
        return Err(Error::InvalidArgument(format!("{what} on {n} vertices exceeds {MAX_VERTICES}")));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}
