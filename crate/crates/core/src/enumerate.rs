//! The corpus of connected graphs at desk scale.
//!
//! Native enumeration walks every labeled edge subset on `n <= 7` vertices.
//! Subset index bit `b` is the `b`-th vertex pair in graph6 order
//! (`(0,1), (0,2), (1,2), (0,3), ...`). Larger orders come in as graph6
//! streams, e.g. from `geng -c`.

use std::io::BufRead;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_connected, Graph, GraphBuilder};
use crate::graph6::{Graph6Codec, Graph6Error};

/// Largest order handled by native enumeration.
pub const NATIVE_MAX_N: usize = 7;
/// Largest order accepted by the brute-force canonical form.
pub const CANONICAL_MAX_N: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("native enumeration supports 2 <= n <= {NATIVE_MAX_N}, got {0}; feed larger orders as graph6 (e.g. `geng -c`)")]
    NativeOrder(usize),
    #[error("range {start}..{end} exceeds the {total} edge subsets for n = {n}")]
    Range {
        n: usize,
        start: u64,
        end: u64,
        total: u64,
    },
    #[error("chunk {i}/{m} is invalid: need i < m")]
    Chunk { i: u64, m: u64 },
    #[error("canonical form is brute force and limited to n <= {CANONICAL_MAX_N}, got {0}")]
    CanonicalOrder(usize),
    #[error("line {line}: {source}")]
    Decode { line: usize, source: Graph6Error },
    #[error("line {line}: read failed: {message}")]
    Io { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Native,
    Graph6,
}

/// A half-open slice of the edge-subset index space for order `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationChunk {
    pub n: usize,
    pub range: Range<u64>,
    pub source: Source,
}

impl EnumerationChunk {
    /// Chunk `i` of `m` equal parts of `[0, 2^C(n,2))`. The chunks
    /// `0..m` partition the index space.
    pub fn part(n: usize, i: u64, m: u64) -> Result<Self, EnumerationError> {
        check_native(n)?;
        if i >= m {
            return Err(EnumerationError::Chunk { i, m });
        }
        let total = subset_count(n);
        let at = |t: u64| ((total as u128 * t as u128) / m as u128) as u64;
        Ok(Self {
            n,
            range: at(i)..at(i + 1),
            source: Source::Native,
        })
    }

    pub fn partition(n: usize, m: u64) -> Result<Vec<Self>, EnumerationError> {
        (0..m).map(|i| Self::part(n, i, m)).collect()
    }

    pub fn full(n: usize) -> Result<Self, EnumerationError> {
        Self::part(n, 0, 1)
    }
}

fn check_native(n: usize) -> Result<(), EnumerationError> {
    if (2..=NATIVE_MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(EnumerationError::NativeOrder(n))
    }
}

/// `2^C(n,2)`.
pub fn subset_count(n: usize) -> u64 {
    1u64 << (n * (n - 1) / 2)
}

/// Vertex pairs in graph6 bit order.
pub fn pair_order(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

/// Connected labeled graphs whose edge-subset index lies in a range.
pub struct ConnectedGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    next: u64,
    end: u64,
}

impl ConnectedGraphs {
    fn connected_mask(&self, mask: u64) -> bool {
        let mut parent = [0usize; NATIVE_MAX_N];
        for (v, p) in parent.iter_mut().enumerate().take(self.n) {
            *p = v;
        }
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut components = self.n;
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = self.pairs[b];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                components -= 1;
                if components == 1 {
                    return true;
                }
            }
        }
        components == 1
    }

    fn materialize(&self, mask: u64) -> Graph {
        let mut b = GraphBuilder::new(self.n).expect("native order");
        let mut bits = mask;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = self.pairs[t];
            b.add_edge(u, v).expect("in range");
        }
        b.build()
    }
}

impl Iterator for ConnectedGraphs {
    /// `(subset index, graph)`.
    type Item = (u64, Graph);

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            if self.connected_mask(mask) {
                return Some((mask, self.materialize(mask)));
            }
        }
        None
    }
}

/// Every connected labeled graph on `n` vertices with subset index in
/// `range` (the whole space when `None`), in increasing index order.
pub fn enumerate_connected(
    n: usize,
    range: Option<Range<u64>>,
) -> Result<ConnectedGraphs, EnumerationError> {
    check_native(n)?;
    let total = subset_count(n);
    let range = range.unwrap_or(0..total);
    if range.start > range.end || range.end > total {
        return Err(EnumerationError::Range {
            n,
            start: range.start,
            end: range.end,
            total,
        });
    }
    Ok(ConnectedGraphs {
        n,
        pairs: pair_order(n),
        next: range.start,
        end: range.end,
    })
}

pub fn enumerate_chunk(chunk: &EnumerationChunk) -> Result<ConnectedGraphs, EnumerationError> {
    enumerate_connected(chunk.n, Some(chunk.range.clone()))
}

/// One decoded line of a graph6 stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestedGraph {
    /// 1-based line number.
    pub line: usize,
    pub graph: Graph,
    /// Disconnected graphs are passed through; callers filter.
    pub connected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IngestMode {
    /// Stop after the first bad line.
    #[default]
    Strict,
    /// Report bad lines and keep going.
    Lenient,
}

/// Line-by-line graph6 reader. Blank lines and the `>>graph6<<` header are
/// skipped.
pub struct Graph6Lines<R> {
    reader: R,
    mode: IngestMode,
    codec: Graph6Codec,
    line: usize,
    buf: String,
    failed: bool,
}

impl<R: BufRead> Graph6Lines<R> {
    pub fn with_codec(mut self, codec: Graph6Codec) -> Self {
        self.codec = codec;
        self
    }
}

impl<R: BufRead> Iterator for Graph6Lines<R> {
    type Item = Result<IngestedGraph, EnumerationError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed && self.mode == IngestMode::Strict {
            return None;
        }
        loop {
            self.buf.clear();
            self.line += 1;
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.failed = true;
                    return Some(Err(EnumerationError::Io {
                        line: self.line,
                        message: e.to_string(),
                    }));
                }
            }
            let text = self.buf.trim();
            let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
            if text.is_empty() {
                continue;
            }
            return Some(match self.codec.decode(text) {
                Ok(graph) => Ok(IngestedGraph {
                    line: self.line,
                    connected: is_connected(&graph),
                    graph,
                }),
                Err(source) => {
                    self.failed = true;
                    Err(EnumerationError::Decode {
                        line: self.line,
                        source,
                    })
                }
            });
        }
    }
}

pub fn ingest_graph6<R: BufRead>(reader: R, mode: IngestMode) -> Graph6Lines<R> {
    Graph6Lines {
        reader,
        mode,
        codec: Graph6Codec::short_form(),
        line: 0,
        buf: String::new(),
        failed: false,
    }
}

/// Brute-force canonical labeling search over all vertex orders, pruned by
/// prefix comparison and by never distinguishing twin vertices.
struct CanonSearch {
    n: usize,
    adj: [u16; CANONICAL_MAX_N],
    twin_class: [usize; CANONICAL_MAX_N],
    order: [usize; CANONICAL_MAX_N],
    cur: [u16; CANONICAL_MAX_N],
    best: [u16; CANONICAL_MAX_N],
    best_order: [usize; CANONICAL_MAX_N],
    improved: bool,
    stop_on_improvement: bool,
}

impl CanonSearch {
    fn new(g: &Graph, stop_on_improvement: bool) -> Self {
        let n = g.n();
        let mut adj = [0u16; CANONICAL_MAX_N];
        for (v, a) in adj.iter_mut().enumerate().take(n) {
            *a = g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u);
        }
        let mut twin_class = [0; CANONICAL_MAX_N];
        for v in 0..n {
            twin_class[v] = (0..=v)
                .find(|&u| adj[u] & !(1 << v) == adj[v] & !(1 << u))
                .expect("v is its own twin");
        }
        let mut s = Self {
            n,
            adj,
            twin_class,
            order: [0; CANONICAL_MAX_N],
            cur: [0; CANONICAL_MAX_N],
            best: [0; CANONICAL_MAX_N],
            best_order: [0; CANONICAL_MAX_N],
            improved: false,
            stop_on_improvement,
        };
        // The identity labeling seeds the bound.
        for j in 0..n {
            s.best_order[j] = j;
            s.best[j] = s.column(j, j, &s.best_order.clone());
        }
        s
    }

    /// Column `j` when `v` sits at position `j`: bit for position 0 is the
    /// most significant.
    fn column(&self, j: usize, v: usize, order: &[usize]) -> u16 {
        (0..j).fold(0, |c, i| c << 1 | (self.adj[order[i]] >> v & 1))
    }

    fn run(&mut self) {
        self.dfs(0, 0);
    }

    fn dfs(&mut self, j: usize, used: u16) {
        if self.stop_on_improvement && self.improved {
            return;
        }
        if j == self.n {
            if self.cur[..self.n] < self.best[..self.n] {
                self.best = self.cur;
                self.best_order = self.order;
                self.improved = true;
            }
            return;
        }
        let mut cmin = u16::MAX;
        for v in 0..self.n {
            if used >> v & 1 == 0 {
                cmin = cmin.min(self.column(j, v, &self.order));
            }
        }
        for v in 0..self.n {
            if used >> v & 1 == 1 || self.column(j, v, &self.order) != cmin {
                continue;
            }
            let tc = self.twin_class[v];
            if (0..v).any(|u| used >> u & 1 == 0 && self.twin_class[u] == tc) {
                continue;
            }
            self.cur[j] = cmin;
            if self.cur[..=j] > self.best[..=j] {
                return;
            }
            self.order[j] = v;
            self.dfs(j + 1, used | 1 << v);
            if self.stop_on_improvement && self.improved {
                return;
            }
        }
    }
}

/// Lexicographically smallest graph6 string over all vertex relabelings.
/// Isomorphic graphs map to the same string.
pub fn canonical_form(g: &Graph) -> Result<String, EnumerationError> {
    let perm = canonical_labeling(g)?;
    Ok(Graph6Codec::short_form()
        .encode(&g.permuted(&perm))
        .expect("n <= 10 fits the short form"))
}

/// Relabeling `perm` (vertex `v` becomes `perm[v]`) that yields
/// [`canonical_form`].
pub fn canonical_labeling(g: &Graph) -> Result<Vec<usize>, EnumerationError> {
    if g.n() > CANONICAL_MAX_N {
        return Err(EnumerationError::CanonicalOrder(g.n()));
    }
    let mut s = CanonSearch::new(g, false);
    s.run();
    let mut perm = vec![0; g.n()];
    for (pos, &v) in s.best_order[..g.n()].iter().enumerate() {
        perm[v] = pos;
    }
    Ok(perm)
}

/// Whether `g` is already labeled canonically, i.e. its graph6 string equals
/// its canonical form. Stops at the first smaller relabeling.
pub fn is_canonical(g: &Graph) -> Result<bool, EnumerationError> {
    if g.n() > CANONICAL_MAX_N {
        return Err(EnumerationError::CanonicalOrder(g.n()));
    }
    let mut s = CanonSearch::new(g, true);
    s.run();
    Ok(!s.improved)
}

/// Order of the automorphism group, by backtracking over vertex images.
pub fn automorphism_count(g: &Graph) -> u64 {
    fn extend(g: &Graph, image: &mut Vec<usize>, used: &mut [bool]) -> u64 {
        let v = image.len();
        if v == g.n() {
            return 1;
        }
        let mut total = 0;
        for w in 0..g.n() {
            if used[w] || g.degree(w) != g.degree(v) {
                continue;
            }
            if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(image[u], w)) {
                continue;
            }
            used[w] = true;
            image.push(w);
            total += extend(g, image, used);
            image.pop();
            used[w] = false;
        }
        total
    }
    extend(g, &mut Vec::with_capacity(g.n()), &mut vec![false; g.n()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named, Family};
    use crate::graph6::encode_graph6;
    use std::collections::BTreeSet;
    use std::io::Cursor;

    #[test]
    fn counts_small_orders() {
        assert_eq!(enumerate_connected(2, None).unwrap().count(), 1);
        assert_eq!(enumerate_connected(3, None).unwrap().count(), 4);
        assert_eq!(enumerate_connected(4, None).unwrap().count(), 38);
        assert_eq!(enumerate_connected(5, None).unwrap().count(), 728);
    }

    #[test]
    fn brute_force_matches_union_find() {
        // Independent route: materialize every subset and BFS it.
        let pairs = pair_order(5);
        let mut expect = Vec::new();
        for mask in 0..subset_count(5) {
            let edges: Vec<_> = (0..pairs.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| pairs[b])
                .collect();
            if is_connected(&Graph::from_edges(5, &edges).unwrap()) {
                expect.push(mask);
            }
        }
        let got: Vec<u64> = enumerate_connected(5, None)
            .unwrap()
            .map(|(i, _)| i)
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn native_order_limits() {
        assert!(matches!(
            enumerate_connected(8, None),
            Err(EnumerationError::NativeOrder(8))
        ));
        assert!(matches!(
            enumerate_connected(1, None),
            Err(EnumerationError::NativeOrder(1))
        ));
        assert!(matches!(
            enumerate_connected(3, Some(0..9)),
            Err(EnumerationError::Range { .. })
        ));
        assert!(matches!(
            EnumerationChunk::part(4, 3, 3),
            Err(EnumerationError::Chunk { .. })
        ));
    }

    #[test]
    fn chunks_partition_index_space() {
        for m in [1, 2, 3, 7, 64] {
            let parts = EnumerationChunk::partition(5, m).unwrap();
            assert_eq!(parts[0].range.start, 0);
            assert_eq!(parts.last().unwrap().range.end, subset_count(5));
            for w in parts.windows(2) {
                assert_eq!(w[0].range.end, w[1].range.start);
            }
            let total: usize = parts
                .iter()
                .map(|c| enumerate_chunk(c).unwrap().count())
                .sum();
            assert_eq!(total, 728);
        }
    }

    #[test]
    fn ingest_lines() {
        let text = ">>graph6<<C~\n\nCh\r\nC~\n";
        let got: Vec<_> = ingest_graph6(Cursor::new(text), IngestMode::Strict)
            .map(Result::unwrap)
            .collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].graph, build_named(Family::Complete, 4).unwrap());
        assert_eq!(got[1].line, 3);
        assert!(got.iter().all(|g| g.connected));

        assert_eq!(
            ingest_graph6(Cursor::new(""), IngestMode::Strict).count(),
            0
        );

        let disconnected =
            encode_graph6(&Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap()).unwrap();
        let got: Vec<_> = ingest_graph6(Cursor::new(disconnected), IngestMode::Strict).collect();
        assert!(!got[0].as_ref().unwrap().connected);
    }

    #[test]
    fn ingest_errors_strict_and_lenient() {
        let text = "C~\nC~~\nCh\n";
        let strict: Vec<_> = ingest_graph6(Cursor::new(text), IngestMode::Strict).collect();
        assert_eq!(strict.len(), 2);
        assert!(matches!(
            strict[1],
            Err(EnumerationError::Decode { line: 2, .. })
        ));
        let lenient: Vec<_> = ingest_graph6(Cursor::new(text), IngestMode::Lenient).collect();
        assert_eq!(lenient.len(), 3);
        assert!(lenient[2].is_ok());
    }

    #[test]
    fn canonical_examples() {
        let k4 = build_named(Family::Complete, 4).unwrap();
        assert_eq!(canonical_form(&k4).unwrap(), "C~");
        let p4 = build_named(Family::Path, 4).unwrap();
        let p4b = Graph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_form(&p4).unwrap(), canonical_form(&p4b).unwrap());
        // Worked by hand: 0-3-2-1 gives bits 001101.
        assert_eq!(canonical_form(&p4).unwrap(), "CL");
        assert!(!is_canonical(&p4).unwrap());
        assert!(is_canonical(&decode("CL")).unwrap());

        let forms: BTreeSet<String> = enumerate_connected(4, None)
            .unwrap()
            .map(|(_, g)| canonical_form(&g).unwrap())
            .collect();
        assert_eq!(forms.len(), 6);
        assert!(matches!(
            canonical_form(&build_named(Family::Path, 11).unwrap()),
            Err(EnumerationError::CanonicalOrder(11))
        ));
    }

    fn decode(s: &str) -> Graph {
        crate::graph6::decode_graph6(s).unwrap()
    }

    #[test]
    fn canonical_agrees_with_full_permutation_scan() {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let perms = permutations(5);
        for (_, g) in enumerate_connected(5, None).unwrap().step_by(7) {
            let slow = perms
                .iter()
                .map(|p| encode_graph6(&g.permuted(p)).unwrap())
                .min()
                .unwrap();
            assert_eq!(canonical_form(&g).unwrap(), slow);
            assert_eq!(
                is_canonical(&g).unwrap(),
                encode_graph6(&g).unwrap() == slow
            );
        }
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        let k10 = build_named(Family::Complete, 10).unwrap();
        assert_eq!(canonical_form(&k10).unwrap(), encode_graph6(&k10).unwrap());
        let star = build_named(Family::Star, 10).unwrap();
        assert!(canonical_form(&star).is_ok());
    }

    #[test]
    fn automorphisms() {
        assert_eq!(
            automorphism_count(&build_named(Family::Complete, 5).unwrap()),
            120
        );
        assert_eq!(
            automorphism_count(&build_named(Family::Cycle, 6).unwrap()),
            12
        );
        assert_eq!(
            automorphism_count(&build_named(Family::Path, 4).unwrap()),
            2
        );
        assert_eq!(
            automorphism_count(&build_named(Family::Star, 5).unwrap()),
            24
        );
    }

    #[test]
    fn orbit_counting_at_four() {
        // sum over labeled graphs of |Aut| / n! = number of classes.
        let total: u64 = enumerate_connected(4, None)
            .unwrap()
            .map(|(_, g)| automorphism_count(&g))
            .sum();
        assert_eq!(total, 6 * 24);
    }
}
