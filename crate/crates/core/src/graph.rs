//! Simple undirected graphs stored as adjacency bitsets.
//!
//! A [`Graph`] is immutable once built. Every vertex carries a bitset row
//! for O(1) adjacency queries and a sorted neighbor list for iteration.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex count a [`Graph`] may have.
pub const MAX_VERTICES: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} out of range 1..={MAX_VERTICES}")]
    VertexCount(usize),
    #[error("{family} requires n >= {min}, got {n}")]
    FamilyOrder {
        family: Family,
        min: usize,
        n: usize,
    },
    #[error("invalid kite parameters n = {n}, k = {k}: need 1 <= k <= n - 1")]
    KiteParams { n: usize, k: usize },
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{0:?} is not a path in the graph")]
    InvalidPath(Vec<usize>),
    #[error("graph is not connected")]
    NotConnected,
}

/// Named families with a fixed canonical labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Star => "star",
        };
        f.write_str(s)
    }
}

/// Parameters of the kite `P_k · K_{n-k+1}`: a path on `k` vertices whose
/// end is identified with one vertex of a clique on `n - k + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KiteParams {
    n: usize,
    k: usize,
}

impl KiteParams {
    pub fn new(n: usize, k: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES || k < 1 || k + 1 > n {
            return Err(GraphError::KiteParams { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clique_size(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn edge_count(&self) -> usize {
        let s = self.clique_size();
        (self.k - 1) + s * (s - 1) / 2
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    nbrs: Vec<Vec<u32>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.nbrs.iter().map(Vec::len).collect()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.nbrs[u]
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_regular(&self) -> bool {
        self.nbrs.windows(2).all(|w| w[0].len() == w[1].len())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Same graph with the edge `uv` added (no-op if present).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::from_graph(self);
        b.add_edge(u, v)?;
        Ok(b.build())
    }

    /// Same graph with the edge `uv` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut b = GraphBuilder::from_graph(self);
        b.remove_edge(u, v);
        Ok(b.build())
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut b = GraphBuilder::new(self.n).expect("same order");
        for (u, v) in self.edges() {
            b.add_edge(perm[u], perm[v]).expect("permutation in range");
        }
        b.build()
    }
}

/// Mutable edge set that freezes into a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let words = n.div_ceil(64);
        Ok(Self {
            n,
            words,
            adj: vec![0; n * words],
        })
    }

    fn from_graph(g: &Graph) -> Self {
        Self {
            n: g.n,
            words: g.words,
            adj: g.adj.clone(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { v: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn build(self) -> Graph {
        let n = self.n;
        let words = self.words;
        let mut nbrs = Vec::with_capacity(n);
        let mut twice_edges = 0;
        for v in 0..n {
            let row = &self.adj[v * words..(v + 1) * words];
            let mut list = Vec::new();
            for (w, &bits) in row.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let t = b.trailing_zeros() as usize;
                    list.push((w * 64 + t) as u32);
                    b &= b - 1;
                }
            }
            twice_edges += list.len();
            nbrs.push(list);
        }
        Graph {
            n,
            words,
            adj: self.adj,
            nbrs,
            edge_count: twice_edges / 2,
        }
    }
}

/// Builds a named family member with canonical labeling: paths and cycles
/// are labeled along the walk, the star's center is vertex 0.
pub fn build_named(family: Family, n: usize) -> Result<Graph, GraphError> {
    let min = match family {
        Family::Cycle => 3,
        _ => 1,
    };
    if n < min {
        return Err(GraphError::FamilyOrder { family, min, n });
    }
    let mut b = GraphBuilder::new(n)?;
    match family {
        Family::Path => {
            for v in 1..n {
                b.add_edge(v - 1, v)?;
            }
        }
        Family::Cycle => {
            for v in 1..n {
                b.add_edge(v - 1, v)?;
            }
            b.add_edge(n - 1, 0)?;
        }
        Family::Complete => {
            for u in 0..n {
                for v in u + 1..n {
                    b.add_edge(u, v)?;
                }
            }
        }
        Family::Star => {
            for v in 1..n {
                b.add_edge(0, v)?;
            }
        }
    }
    Ok(b.build())
}

/// Builds `P_k · K_{n-k+1}`.
///
/// Vertex 0 is the degree-1 end of the path, vertices `0..k-1` run along the
/// path, vertex `k - 1` is where the path meets the clique, and vertices
/// `k-1..n` form the clique.
pub fn build_kite(p: KiteParams) -> Graph {
    let (n, k) = (p.n, p.k);
    let mut b = GraphBuilder::new(n).expect("validated by KiteParams");
    for v in 1..k {
        b.add_edge(v - 1, v).expect("in range");
    }
    for u in k - 1..n {
        for v in u + 1..n {
            b.add_edge(u, v).expect("in range");
        }
    }
    b.build()
}

/// BFS distances from `src`; `usize::MAX` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            let w = w as usize;
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn is_connected(g: &Graph) -> bool {
    bfs_distances(g, 0).iter().all(|&d| d != usize::MAX)
}

/// A shortest `u -> v` path.
///
/// BFS from `u` expands neighbors in increasing index order and each vertex
/// keeps the first parent that discovers it, so the result is deterministic.
pub fn shortest_path(g: &Graph, u: usize, v: usize) -> Result<Vec<usize>, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let mut parent = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    parent[u] = u;
    queue.push_back(u);
    while let Some(a) = queue.pop_front() {
        if a == v {
            break;
        }
        for &w in g.neighbors(a) {
            let w = w as usize;
            if parent[w] == usize::MAX {
                parent[w] = a;
                queue.push_back(w);
            }
        }
    }
    if parent[v] == usize::MAX {
        return Err(GraphError::NotConnected);
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != u {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

pub fn is_path(g: &Graph, path: &[usize]) -> bool {
    if path.is_empty() || path.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for &v in path {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    path.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Largest `j` such that `path[0]` has degree 1 and `path[1..=j-2]` all have
/// degree 2.
///
/// These are the degree conditions under which the path-walk bound on the
/// principal ratio is attained at position `j`. Note that `path[j-1]` itself
/// is unconstrained: on a kite the whole path up to and including the
/// clique vertex counts, even though that last vertex has large degree.
/// Returns 0 when `path[0]` does not have degree 1.
pub fn pendant_prefix_length(g: &Graph, path: &[usize]) -> Result<usize, GraphError> {
    if !is_path(g, path) {
        return Err(GraphError::InvalidPath(path.to_vec()));
    }
    if g.degree(path[0]) != 1 {
        return Ok(0);
    }
    let inner = path[1..].iter().take_while(|&&v| g.degree(v) == 2).count();
    Ok((inner + 2).min(path.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    fn kite(n: usize, k: usize) -> Graph {
        build_kite(KiteParams::new(n, k).unwrap())
    }

    #[test]
    fn named_families() {
        let k4 = build_named(Family::Complete, 4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.degrees().iter().all(|&d| d == 3));

        let c5 = build_named(Family::Cycle, 5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.degrees().iter().all(|&d| d == 2));

        let s = build_named(Family::Star, 5).unwrap();
        assert_eq!(s.degrees(), vec![4, 1, 1, 1, 1]);

        assert!(matches!(
            build_named(Family::Cycle, 2),
            Err(GraphError::FamilyOrder { min: 3, .. })
        ));
        assert!(build_named(Family::Path, 0).is_err());
    }

    #[test]
    fn kite_examples() {
        let paw = kite(4, 2);
        assert_eq!(paw.degrees(), vec![1, 3, 2, 2]);
        assert_eq!(paw.edge_count(), 4);

        // (k - 1) + C(n - k + 1, 2): a clique of 2 is a single edge.
        let g = kite(5, 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(KiteParams::new(5, 4).unwrap().edge_count(), 4);
        // P_4 ending in a triangle.
        assert_eq!(kite(6, 4).edge_count(), 6);

        let k6 = kite(6, 1);
        assert_eq!(k6, build_named(Family::Complete, 6).unwrap());

        assert!(KiteParams::new(5, 5).is_err());
        assert!(KiteParams::new(5, 0).is_err());
    }

    #[test]
    fn kite_degree_multiset() {
        for n in 5..14 {
            for k in 3..=n - 2 {
                let g = kite(n, k);
                let s = n - k;
                let mut expect = vec![1];
                expect.extend(std::iter::repeat_n(2, k - 2));
                expect.extend(std::iter::repeat_n(s, s));
                expect.push(s + 1);
                assert_eq!(sorted(g.degrees()), sorted(expect), "kite({n},{k})");
                assert_eq!(g.edge_count(), KiteParams::new(n, k).unwrap().edge_count());
            }
        }
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&build_named(Family::Complete, 4).unwrap()));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!is_connected(&two));
        assert!(is_connected(&kite(10, 5)));
        assert!(is_connected(&Graph::from_edges(1, &[]).unwrap()));
    }

    #[test]
    fn shortest_paths() {
        let p5 = build_named(Family::Path, 5).unwrap();
        assert_eq!(shortest_path(&p5, 0, 4).unwrap(), vec![0, 1, 2, 3, 4]);
        let k4 = build_named(Family::Complete, 4).unwrap();
        assert_eq!(shortest_path(&k4, 1, 3).unwrap(), vec![1, 3]);
        let c6 = build_named(Family::Cycle, 6).unwrap();
        assert_eq!(shortest_path(&c6, 0, 3).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(shortest_path(&c6, 2, 2).unwrap(), vec![2]);
        assert!(matches!(
            shortest_path(&c6, 0, 9),
            Err(GraphError::VertexOutOfRange { v: 9, n: 6 })
        ));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(shortest_path(&two, 0, 3), Err(GraphError::NotConnected));
    }

    #[test]
    fn pendant_prefix() {
        let g = kite(8, 5);
        let path = shortest_path(&g, 0, 4).unwrap();
        assert_eq!(path, vec![0, 1, 2, 3, 4]);
        assert_eq!(g.degree(path[0]), 1);
        assert!(path[1..4].iter().all(|&v| g.degree(v) == 2));
        assert_eq!(pendant_prefix_length(&g, &path).unwrap(), 5);

        let k4 = build_named(Family::Complete, 4).unwrap();
        assert_eq!(pendant_prefix_length(&k4, &[0, 1]).unwrap(), 0);

        let p6 = build_named(Family::Path, 6).unwrap();
        assert_eq!(pendant_prefix_length(&p6, &[0, 1, 2, 3, 4, 5]).unwrap(), 6);
        assert_eq!(pendant_prefix_length(&p6, &[0]).unwrap(), 1);

        assert!(pendant_prefix_length(&p6, &[0, 2]).is_err());
        assert!(pendant_prefix_length(&p6, &[0, 1, 0]).is_err());
    }

    #[test]
    fn kite_pendant_prefix_equals_k() {
        for n in 4..12 {
            for k in 2..n {
                let g = kite(n, k);
                let path = shortest_path(&g, 0, k - 1).unwrap();
                assert_eq!(path.len(), k);
                assert_eq!(pendant_prefix_length(&g, &path).unwrap(), k);
            }
        }
    }

    #[test]
    fn edge_edits() {
        let p4 = build_named(Family::Path, 4).unwrap();
        let c4 = p4.with_edge(3, 0).unwrap();
        assert_eq!(c4, build_named(Family::Cycle, 4).unwrap());
        assert_eq!(c4.without_edge(0, 3).unwrap(), p4);
        assert_eq!(p4.with_edge(1, 1), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn large_bitset_rows() {
        let g = kite(130, 70);
        assert!(g.has_edge(129, 69));
        assert!(g.has_edge(68, 69));
        assert!(!g.has_edge(0, 129));
        assert_eq!(g.degree(69), 61);
    }
}
