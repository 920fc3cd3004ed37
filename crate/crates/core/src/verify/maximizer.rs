//! Structure of a (candidate) ratio maximizer.
//!
//! With `v_1 .. v_k` the shortest path from the minimum Perron entry to the
//! maximum one, `C` is everything off the path, `S = C ∩ N(v_{k-1})` and
//! `T = N(v_{k-2}) ∩ N(v_k)`. For large orders the maximizer is a kite and
//! every statement below holds; on small graphs they are diagnostics.

use super::{graph_id, LemmaFinding, LemmaId, VerifyError, LENGTH_BAND};
use crate::graph::Graph;
use crate::spectral::{analyze, PerronResult, RatioReport, DEFAULT_TOL};

/// Path indices are 0-based: `v_i` is `path[i - 1]`.
#[derive(Debug, Clone)]
pub struct MaximizerDecomposition {
    pub g: Graph,
    pub pr: PerronResult,
    pub report: RatioReport,
    /// Vertices on the min -> max path.
    pub k: usize,
    /// `V \ {v_1..v_k}`, sorted.
    pub c: Vec<usize>,
    /// `C ∩ N(v_{k-1})`, sorted; empty when `k < 2`.
    pub s: Vec<usize>,
    /// `N(v_{k-2}) ∩ N(v_k)`, sorted; empty when `k < 3`.
    pub t: Vec<usize>,
}

impl MaximizerDecomposition {
    /// `v_i` for 1-based `i`.
    pub fn v(&self, i: usize) -> usize {
        self.report.path[i - 1]
    }

    /// Entry of the Perron vector scaled so that `x_{v_k} = 1`.
    pub fn x(&self, vertex: usize) -> f64 {
        self.pr.x_max1[vertex] / self.pr.x_max1[self.report.vmax]
    }
}

pub fn decompose_maximizer(g: &Graph) -> Result<MaximizerDecomposition, VerifyError> {
    let (pr, report) = analyze(g, DEFAULT_TOL)?;
    if pr.q1 <= 4.0 {
        return Err(VerifyError::Domain(pr.q1));
    }
    if report.vmin == report.vmax {
        return Err(VerifyError::Degenerate);
    }
    let k = report.k();
    let path = &report.path;
    let on_path = |v: &usize| path.contains(v);
    let c: Vec<usize> = (0..g.n()).filter(|v| !on_path(v)).collect();
    let s = if k >= 2 {
        let vk1 = path[k - 2];
        c.iter().copied().filter(|&v| g.has_edge(vk1, v)).collect()
    } else {
        Vec::new()
    };
    let t = if k >= 3 {
        let (vk2, vk) = (path[k - 3], path[k - 1]);
        (0..g.n())
            .filter(|&v| g.has_edge(vk2, v) && g.has_edge(vk, v))
            .collect()
    } else {
        Vec::new()
    };
    Ok(MaximizerDecomposition {
        g: g.clone(),
        pr,
        report,
        k,
        c,
        s,
        t,
    })
}

/// `0` on equality, minus the distance otherwise.
fn mismatch(got: usize, want: usize) -> f64 {
    -(got.abs_diff(want) as f64) + 0.0
}

fn degree_finding(
    dec: &MaximizerDecomposition,
    id: &str,
    lemma: LemmaId,
    back: usize,
) -> LemmaFinding {
    if dec.k <= back {
        return LemmaFinding::not_applicable(lemma, id, format!("k = {} too short", dec.k));
    }
    let d = dec.g.degree(dec.v(dec.k - back));
    LemmaFinding::diagnostic(
        lemma,
        id,
        mismatch(d, 2),
        1.0,
        format!("d(v_(k-{back})) = {d}"),
    )
}

/// Structural diagnostics for a decomposed maximizer candidate. Every
/// finding has status `diagnostic` (or `not_applicable`); a negative margin
/// means the statement fails on this graph.
pub fn check_maximizer(dec: &MaximizerDecomposition) -> Vec<LemmaFinding> {
    let g = &dec.g;
    let id = graph_id(g);
    let n = g.n();
    let k = dec.k;
    let nk = (n - k) as f64;
    let q = dec.pr.q1;
    let vk = dec.v(k);
    let mut out = Vec::new();

    out.push(LemmaFinding::diagnostic(
        LemmaId::QAboveFour,
        &id,
        q - 4.0,
        q,
        format!("q1 {q:.12e}"),
    ));

    let hub = g.degree(vk);
    out.push(LemmaFinding::diagnostic(
        LemmaId::HubDegree,
        &id,
        mismatch(hub, n - k + 1),
        1.0,
        format!("d(v_k) = {hub}, n - k + 1 = {}", n - k + 1),
    ));

    let (lo, hi) = (2.0 * nk, 2.0 * (nk + 1.0));
    out.push(LemmaFinding::diagnostic(
        LemmaId::QWindow,
        &id,
        (q - lo).min(hi - q),
        q,
        format!("{lo} < q1 = {q:.12e} < {hi}"),
    ));

    let need = k.saturating_sub(2);
    let prefix = dec.report.pendant_prefix;
    out.push(LemmaFinding::diagnostic(
        LemmaId::PendantPath,
        &id,
        prefix as f64 - need as f64,
        1.0,
        format!("pendant prefix {prefix}, needs {need}"),
    ));

    let norm: f64 = (0..n).map(|v| dec.x(v).powi(2)).sum();
    out.push(LemmaFinding::diagnostic(
        LemmaId::NormWindow,
        &id,
        (norm - (q / 2.0 - 2.0)).min(q / 2.0 + 3.0 - norm),
        q,
        format!("|x|^2 = {norm:.12e} with max entry 1"),
    ));

    // The all-subsets claim reduces to its worst cases: for each size s, the
    // s smallest entries (lower bound) and the s largest (upper bound).
    let mut hub_x: Vec<f64> = g.neighbors(vk).iter().map(|&v| dec.x(v as usize)).collect();
    hub_x.sort_by(f64::total_cmp);
    let (mut low, mut high) = (0.0, 0.0);
    let mut worst = (f64::INFINITY, 0);
    for s in 1..=hub_x.len() {
        low += hub_x[s - 1];
        high += hub_x[hub_x.len() - s];
        let m = (low - (s as f64 - 2.0)).min(s as f64 - high);
        if m < worst.0 {
            worst = (m, s);
        }
    }
    out.push(LemmaFinding::diagnostic(
        LemmaId::HubSubsetSums,
        &id,
        worst.0,
        hub_x.len().max(1) as f64,
        format!(
            "tightest subset size {} of |N(v_k)| = {}",
            worst.1,
            hub_x.len()
        ),
    ));

    out.push(degree_finding(dec, &id, LemmaId::DegreeVkMinus2, 2));

    let refined = 2.0 * nk + 1.5;
    out.push(LemmaFinding::diagnostic(
        LemmaId::QRefinedWindow,
        &id,
        refined - q,
        q,
        format!("q1 = {q:.12e} < {refined}"),
    ));

    if k >= 2 {
        let xk1 = dec.x(dec.v(k - 1));
        let cap = (n as f64).powf(-1.0 / 6.0);
        out.push(LemmaFinding::diagnostic(
            LemmaId::XkMinus1Small,
            &id,
            cap - xk1,
            1.0,
            format!("x_(k-1) = {xk1:.12e}, n^(-1/6) = {cap:.12e}"),
        ));
    } else {
        out.push(LemmaFinding::not_applicable(
            LemmaId::XkMinus1Small,
            &id,
            "k < 2".into(),
        ));
    }

    out.push(degree_finding(dec, &id, LemmaId::DegreeVkMinus1, 1));

    let ratio = nk * (n as f64).ln() / n as f64;
    out.push(LemmaFinding::diagnostic(
        LemmaId::PathLengthBand,
        &id,
        (ratio - LENGTH_BAND.0).min(LENGTH_BAND.1 - ratio),
        1.0,
        format!("(n - k) ln n / n = {ratio:.6}"),
    ));
    out
}
