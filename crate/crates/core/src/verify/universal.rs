//! Checks that hold for every connected graph: the path-walk bound on the
//! principal ratio, the geometric sandwich on `U_{j-1}`, and the
//! classification of graphs with `q1 <= 4`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{graph_id, sort_findings, LemmaFinding, LemmaId, VerifyError, HARD_TOL};
use crate::enumerate::{enumerate_chunk, EnumerationChunk};
use crate::graph::Graph;
use crate::kite::{gamma_upper_bound, sigma, u_closed_form, u_sandwich};
use crate::spectral::{analyze, PerronResult, RatioReport, SpectralError};

/// Slack on `q1 <= 4` when classifying low-q graphs.
const LOW_Q_TOL: f64 = 1e-9;

/// Raw outcome of one check, before it is dressed up as a finding.
struct Eval {
    lemma: LemmaId,
    /// `None` when the check does not apply.
    margin: Option<(f64, f64)>,
    detail: String,
}

impl Eval {
    fn violated(&self) -> bool {
        matches!(self.margin, Some((m, s)) if m < -HARD_TOL * s)
    }

    fn into_finding(self, id: &str) -> LemmaFinding {
        match self.margin {
            Some((m, s)) => LemmaFinding::hard(self.lemma, id, m, s, HARD_TOL, self.detail),
            None => LemmaFinding::not_applicable(self.lemma, id, self.detail),
        }
    }
}

/// Path, cycle or claw: the connected graphs with `q1 <= 4`.
fn is_low_q_family(g: &Graph) -> bool {
    let n = g.n();
    let degrees = g.degrees();
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    let is_path = max_deg <= 2 && g.edge_count() + 1 == n;
    let is_cycle = n >= 3 && degrees.iter().all(|&d| d == 2);
    let is_claw = n == 4 && max_deg == 3 && g.edge_count() == 3;
    is_path || is_cycle || is_claw
}

fn evaluate(g: &Graph, pr: &PerronResult, report: &RatioReport) -> Vec<Eval> {
    let q = pr.q1;
    let k = report.k();
    let mut out = Vec::with_capacity(3);

    if sigma(q).is_ok() {
        let (mut worst, mut worst_j) = (f64::INFINITY, 0);
        for j in 1..=k {
            let bound = gamma_upper_bound(g, pr, report, j).expect("q1 > 4 and j in range");
            let m = bound - report.gamma;
            if m < worst {
                (worst, worst_j) = (m, j);
            }
        }
        out.push(Eval {
            lemma: LemmaId::GammaPathBound,
            margin: Some((worst, report.gamma)),
            detail: format!(
                "tightest at j = {worst_j} of k = {k}; gamma {:.12e}",
                report.gamma
            ),
        });

        if k >= 2 {
            let (mut worst, mut scale, mut worst_j) = (f64::INFINITY, 1.0, 0);
            for j in 2..=k {
                let u = u_closed_form(q, j - 1).expect("q1 > 4");
                let (lo, hi) = u_sandwich(q, j).expect("j >= 2");
                let m = (u - lo).min(hi - u);
                if m / u < worst / scale {
                    (worst, scale, worst_j) = (m, u, j);
                }
            }
            out.push(Eval {
                lemma: LemmaId::USandwich,
                margin: Some((worst, scale)),
                detail: format!("tightest at j = {worst_j}; q1 {q:.12e}"),
            });
        } else {
            out.push(Eval {
                lemma: LemmaId::USandwich,
                margin: None,
                detail: "path has a single vertex".into(),
            });
        }
    } else {
        let why = format!("q1 = {q:.12e} <= 4");
        out.push(Eval {
            lemma: LemmaId::GammaPathBound,
            margin: None,
            detail: why.clone(),
        });
        out.push(Eval {
            lemma: LemmaId::USandwich,
            margin: None,
            detail: why,
        });
    }

    let family = is_low_q_family(g);
    let margin = if family { 4.0 - q } else { q - 4.0 };
    out.push(Eval {
        lemma: LemmaId::LowQClassification,
        margin: Some((margin, 4.0)),
        detail: format!("q1 {q:.12e}; path/cycle/claw: {family}"),
    });
    out
}

/// Hard checks on one connected graph.
pub fn check_universal(g: &Graph, tol: f64) -> Result<Vec<LemmaFinding>, SpectralError> {
    let (pr, report) = analyze(g, tol)?;
    let id = graph_id(g);
    Ok(evaluate(g, &pr, &report)
        .into_iter()
        .map(|e| e.into_finding(&id))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaTally {
    pub lemma_id: LemmaId,
    pub holds: u64,
    pub violated: u64,
    pub not_applicable: u64,
    /// Smallest `margin / scale` seen.
    pub min_rel_margin: f64,
}

impl LemmaTally {
    fn new(lemma_id: LemmaId) -> Self {
        Self {
            lemma_id,
            holds: 0,
            violated: 0,
            not_applicable: 0,
            min_rel_margin: f64::INFINITY,
        }
    }

    fn merge(&mut self, other: &LemmaTally) {
        self.holds += other.holds;
        self.violated += other.violated;
        self.not_applicable += other.not_applicable;
        self.min_rel_margin = self.min_rel_margin.min(other.min_rel_margin);
    }
}

/// Aggregate outcome of the hard checks over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalSummary {
    pub graphs: u64,
    /// Disconnected inputs that were skipped (graph6 corpora only).
    pub skipped: u64,
    /// Graphs with `q1 <= 4`.
    pub low_q_graphs: u64,
    pub tallies: Vec<LemmaTally>,
    /// Violated findings, or every finding when requested.
    pub findings: Vec<LemmaFinding>,
}

impl UniversalSummary {
    fn empty() -> Self {
        Self {
            graphs: 0,
            skipped: 0,
            low_q_graphs: 0,
            tallies: [
                LemmaId::GammaPathBound,
                LemmaId::USandwich,
                LemmaId::LowQClassification,
            ]
            .into_iter()
            .map(LemmaTally::new)
            .collect(),
            findings: Vec::new(),
        }
    }

    pub fn violations(&self) -> u64 {
        self.tallies.iter().map(|t| t.violated).sum()
    }

    fn record(&mut self, g: &Graph, tol: f64, keep_all: bool) -> Result<(), SpectralError> {
        let (pr, report) = analyze(g, tol)?;
        self.graphs += 1;
        if pr.q1 <= 4.0 + LOW_Q_TOL {
            self.low_q_graphs += 1;
        }
        let evals = evaluate(g, &pr, &report);
        let any_violation = evals.iter().any(Eval::violated);
        for e in &evals {
            let t = self
                .tallies
                .iter_mut()
                .find(|t| t.lemma_id == e.lemma)
                .expect("tally per lemma");
            match e.margin {
                None => t.not_applicable += 1,
                Some((m, s)) => {
                    if e.violated() {
                        t.violated += 1;
                    } else {
                        t.holds += 1;
                    }
                    t.min_rel_margin = t.min_rel_margin.min(m / s);
                }
            }
        }
        if keep_all || any_violation {
            let id = graph_id(g);
            self.findings.extend(
                evals
                    .into_iter()
                    .filter(|e| keep_all || e.violated())
                    .map(|e| e.into_finding(&id)),
            );
        }
        Ok(())
    }

    fn merge(mut self, other: UniversalSummary) -> Self {
        self.graphs += other.graphs;
        self.skipped += other.skipped;
        self.low_q_graphs += other.low_q_graphs;
        for (a, b) in self.tallies.iter_mut().zip(&other.tallies) {
            a.merge(b);
        }
        self.findings.extend(other.findings);
        self
    }

    fn finish(mut self) -> Self {
        sort_findings(&mut self.findings);
        self
    }
}

/// Runs the hard checks over every connected labeled graph on `n`
/// vertices, split into `partition` chunks processed in parallel.
pub fn universal_sweep(
    n: usize,
    partition: u64,
    tol: f64,
    keep_all: bool,
) -> Result<UniversalSummary, VerifyError> {
    let chunks = EnumerationChunk::partition(n, partition)?;
    universal_sweep_chunks(&chunks, tol, keep_all)
}

/// Hard checks over the given slices of the native index space, in
/// parallel.
pub fn universal_sweep_chunks(
    chunks: &[EnumerationChunk],
    tol: f64,
    keep_all: bool,
) -> Result<UniversalSummary, VerifyError> {
    let parts: Vec<UniversalSummary> = chunks
        .par_iter()
        .map(|c| {
            let mut s = UniversalSummary::empty();
            for (_, g) in enumerate_chunk(c)? {
                s.record(&g, tol, keep_all)?;
            }
            Ok(s)
        })
        .collect::<Result<_, VerifyError>>()?;
    Ok(parts
        .into_iter()
        .fold(UniversalSummary::empty(), UniversalSummary::merge)
        .finish())
}

/// Same checks over an arbitrary stream of graphs; disconnected ones are
/// counted as skipped.
pub fn universal_sweep_graphs<I>(
    graphs: I,
    tol: f64,
    keep_all: bool,
) -> Result<UniversalSummary, VerifyError>
where
    I: IntoIterator<Item = Graph>,
{
    let mut s = UniversalSummary::empty();
    for g in graphs {
        match s.record(&g, tol, keep_all) {
            Err(SpectralError::NotConnected) => s.skipped += 1,
            other => other?,
        }
    }
    Ok(s.finish())
}
