//! Exhaustive search for the graph with the largest principal ratio.
//!
//! The ratio does not depend on labels, so the scan runs over labeled graphs
//! and only representatives already in canonical form are kept for the
//! ranking. The winner is the top of that ranking.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{graph_id, VerifyError};
use crate::enumerate::{
    canonical_form, enumerate_chunk, is_canonical, EnumerationChunk, Source, CANONICAL_MAX_N,
};
use crate::graph::{build_kite, Graph, KiteParams};
use crate::spectral::{analyze, SpectralError, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    /// 1-based.
    pub rank: usize,
    pub graph6: String,
    pub gamma: f64,
    pub q1: f64,
    pub is_kite: bool,
    pub kite_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub source: Source,
    pub gamma_max: f64,
    /// Canonical graph6 of the winner.
    pub argmax_graph6: String,
    pub q1: f64,
    pub is_kite: bool,
    pub kite_k: Option<usize>,
    /// Largest ratio among the kites in the corpus.
    pub best_kite_gamma: Option<f64>,
    /// Graphs scanned (labeled graphs for the native source).
    pub labeled_count: u64,
    /// Isomorphism classes found.
    pub class_count: u64,
    /// Every class, best first.
    pub ranking: Vec<RankEntry>,
}

/// Ratios this close (relative) rank as equal and fall back to the graph6
/// order, so floating-point noise between isomorphic labelings cannot
/// reorder the ranking.
const RANK_TIE: f64 = 1e-10;

fn rank_order(a: &RankEntry, b: &RankEntry) -> Ordering {
    let close = (a.gamma - b.gamma).abs() <= RANK_TIE * a.gamma.max(b.gamma);
    if close {
        a.graph6.cmp(&b.graph6)
    } else {
        b.gamma.total_cmp(&a.gamma)
    }
}

/// Recognizes `P_k · K_{n-k+1}` up to isomorphism and returns `k`. The
/// complete graph is `k = 1`; the path is `k = n - 1`.
pub fn recognize_kite(g: &Graph) -> Option<usize> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    for k in 1..n {
        let p = KiteParams::new(n, k).ok()?;
        if g.edge_count() != p.edge_count() {
            continue;
        }
        let mut off_clique = vec![false; n];
        if k >= 2 {
            let start = (0..n).find(|&v| g.degree(v) == 1)?;
            let (mut prev, mut cur) = (usize::MAX, start);
            for step in 0..k - 1 {
                if step > 0 && g.degree(cur) != 2 {
                    return None;
                }
                off_clique[cur] = true;
                let next = g
                    .neighbors(cur)
                    .iter()
                    .map(|&w| w as usize)
                    .find(|&w| w != prev)?;
                (prev, cur) = (cur, next);
            }
        }
        let clique: Vec<usize> = (0..n).filter(|&v| !off_clique[v]).collect();
        let complete = clique
            .iter()
            .enumerate()
            .all(|(i, &u)| clique[i + 1..].iter().all(|&v| g.has_edge(u, v)));
        return (clique.len() == n - k + 1 && complete).then_some(k);
    }
    None
}

/// Canonical forms of `P_k · K_{n-k+1}` for `k = 1..n-1`.
pub fn kite_forms(n: usize) -> Result<Vec<(usize, String)>, VerifyError> {
    (1..n)
        .map(|k| {
            let g = build_kite(KiteParams::new(n, k)?);
            Ok((k, canonical_form(&g)?))
        })
        .collect()
}

fn kite_lookup(forms: &[(usize, String)], g: &Graph, g6: &str) -> Option<usize> {
    if g.n() <= CANONICAL_MAX_N {
        forms.iter().find(|(_, f)| f == g6).map(|(k, _)| *k)
    } else {
        recognize_kite(g)
    }
}

fn entry(g: &Graph, g6: String, forms: &[(usize, String)]) -> Result<RankEntry, SpectralError> {
    let (pr, report) = analyze(g, DEFAULT_TOL)?;
    let kite_k = kite_lookup(forms, g, &g6);
    Ok(RankEntry {
        rank: 0,
        graph6: g6,
        gamma: report.gamma,
        q1: pr.q1,
        is_kite: kite_k.is_some(),
        kite_k,
    })
}

fn finish(
    n: usize,
    source: Source,
    labeled_count: u64,
    mut ranking: Vec<RankEntry>,
) -> Result<ExtremalRecord, VerifyError> {
    ranking.sort_by(rank_order);
    for (i, e) in ranking.iter_mut().enumerate() {
        e.rank = i + 1;
    }
    let top = ranking.first().ok_or(VerifyError::EmptyCorpus)?.clone();
    let best_kite_gamma = ranking.iter().find(|e| e.is_kite).map(|e| e.gamma);
    Ok(ExtremalRecord {
        n,
        source,
        gamma_max: top.gamma,
        argmax_graph6: top.graph6,
        q1: top.q1,
        is_kite: top.is_kite,
        kite_k: top.kite_k,
        best_kite_gamma,
        labeled_count,
        class_count: ranking.len() as u64,
        ranking,
    })
}

/// Exact maximizer over every connected labeled graph on `n` vertices,
/// scanned in `partition` parallel chunks. The result does not depend on
/// `partition`.
pub fn extremal_search(n: usize, partition: u64) -> Result<ExtremalRecord, VerifyError> {
    let chunks = EnumerationChunk::partition(n, partition)?;
    extremal_search_chunks(&chunks)
}

/// Search restricted to the given slices of the native index space (all of
/// one order). With a partial cover the record describes only those slices.
pub fn extremal_search_chunks(chunks: &[EnumerationChunk]) -> Result<ExtremalRecord, VerifyError> {
    let n = chunks.first().ok_or(VerifyError::EmptyCorpus)?.n;
    if let Some(c) = chunks.iter().find(|c| c.n != n) {
        return Err(VerifyError::MixedOrders {
            expected: n,
            found: c.n,
        });
    }
    let forms = kite_forms(n)?;
    let parts: Vec<(u64, Vec<RankEntry>)> = chunks
        .par_iter()
        .map(|c| {
            let mut count = 0;
            let mut reps = Vec::new();
            for (_, g) in enumerate_chunk(c)? {
                count += 1;
                if is_canonical(&g)? {
                    let g6 = graph_id(&g);
                    reps.push(entry(&g, g6, &forms)?);
                }
            }
            Ok((count, reps))
        })
        .collect::<Result<_, VerifyError>>()?;
    let labeled = parts.iter().map(|p| p.0).sum();
    let ranking = parts.into_iter().flat_map(|p| p.1).collect();
    finish(n, Source::Native, labeled, ranking)
}

/// Same search over an explicit list of connected graphs of one order.
/// Isomorphic inputs are merged.
pub fn extremal_search_graphs<I>(graphs: I) -> Result<ExtremalRecord, VerifyError>
where
    I: IntoIterator<Item = Graph>,
{
    let mut classes: BTreeMap<String, Graph> = BTreeMap::new();
    let mut count = 0u64;
    let mut order = None;
    for g in graphs {
        let n = *order.get_or_insert(g.n());
        if g.n() != n {
            return Err(VerifyError::MixedOrders {
                expected: n,
                found: g.n(),
            });
        }
        count += 1;
        classes.entry(graph_id(&g)).or_insert(g);
    }
    let n = order.ok_or(VerifyError::EmptyCorpus)?;
    let forms = if n <= CANONICAL_MAX_N {
        kite_forms(n)?
    } else {
        Vec::new()
    };
    let ranking = classes
        .into_par_iter()
        .map(|(g6, g)| entry(&g, g6, &forms))
        .collect::<Result<Vec<_>, _>>()?;
    finish(n, Source::Graph6, count, ranking)
}
