//! Brute-force verification harness.
//!
//! Everything here produces [`LemmaFinding`] records: a named inequality or
//! structural claim, evaluated on one graph, with a signed margin. Claims
//! that hold for every connected graph are hard checks (`holds` or
//! `violated`). Claims about the structure of a ratio maximizer only hold
//! for large orders, so on small graphs they are reported as `diagnostic`
//! and never fail a run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{canonical_form, EnumerationError, CANONICAL_MAX_N};
use crate::graph::{Graph, GraphError};
use crate::graph6::Graph6Codec;
use crate::kite::KiteError;
use crate::spectral::SpectralError;

mod maximizer;
mod probe;
mod scan;
mod search;
mod universal;

pub use maximizer::{check_maximizer, decompose_maximizer, MaximizerDecomposition};
pub use probe::{perturbation_probe, EdgeAction};
pub use scan::{asymptotic_scan, ScanRow, LENGTH_BAND};
pub use search::{
    extremal_search, extremal_search_chunks, extremal_search_graphs, kite_forms, recognize_kite,
    ExtremalRecord, RankEntry,
};
pub use universal::{
    check_universal, universal_sweep, universal_sweep_chunks, universal_sweep_graphs, LemmaTally,
    UniversalSummary,
};

/// Relative slack for hard checks: a finding holds when
/// `margin >= -HARD_TOL * scale`.
pub const HARD_TOL: f64 = 1e-9;

/// Absolute slack for the Rayleigh probes.
pub const PROBE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("q1 = {0} <= 4; the sigma/U machinery needs q1 > 4")]
    Domain(f64),
    #[error("principal ratio is 1 (minimum and maximum at the same vertex); nothing to decompose")]
    Degenerate,
    #[error("cannot {action} edge ({u}, {v})")]
    InvalidEdge {
        u: usize,
        v: usize,
        action: EdgeAction,
    },
    #[error("removing edge ({u}, {v}) disconnects the graph")]
    Disconnects { u: usize, v: usize },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("graphs of order {found} mixed into a corpus of order {expected}")]
    MixedOrders { expected: usize, found: usize },
    #[error("asymptotic scan needs n >= 10, got {0}")]
    ScanOrder(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Kite(#[from] KiteError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// The claims this harness knows how to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// `gamma <= U_{j-1} / x_j` along the min -> max path, every `j`.
    GammaPathBound,
    /// Geometric lower/upper bounds on `U_{j-1}` for `2 <= j <= k`.
    USandwich,
    /// `q1 <= 4` exactly for paths, cycles and the claw `K_{1,3}`.
    LowQClassification,
    /// Maximizer has `q1 > 4`.
    QAboveFour,
    /// `d(v_k) = n - k + 1`.
    HubDegree,
    /// `2(n-k) < q1 < 2(n-k+1)`.
    QWindow,
    /// `v_1..v_{k-2}` is a pendant path.
    PendantPath,
    /// `q/2 - 2 < |x|^2 < q/2 + 3` with max entry 1.
    NormWindow,
    /// Every `U` inside `N(v_k)` has `|U| - 2 < sum_U x <= |U|`.
    HubSubsetSums,
    /// `d(v_{k-2}) = 2`.
    DegreeVkMinus2,
    /// `q1 < 2(n-k) + 3/2`.
    QRefinedWindow,
    /// `x_{k-1} < n^(-1/6)`.
    XkMinus1Small,
    /// `d(v_{k-1}) = 2`.
    DegreeVkMinus1,
    /// `(n - k) ln n / n` inside [`LENGTH_BAND`].
    PathLengthBand,
    /// `q(G + uv) - q(G) >= (x_u + x_v)^2 / |x|^2`.
    RayleighAdd,
    /// `q(G - uv) - q(G) >= -(x_u + x_v)^2 / |x|^2 >= -4 / |x|^2`.
    RayleighRemove,
}

impl LemmaId {
    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaId::GammaPathBound => "gamma_path_bound",
            LemmaId::USandwich => "u_sandwich",
            LemmaId::LowQClassification => "low_q_classification",
            LemmaId::QAboveFour => "q_above_four",
            LemmaId::HubDegree => "hub_degree",
            LemmaId::QWindow => "q_window",
            LemmaId::PendantPath => "pendant_path",
            LemmaId::NormWindow => "norm_window",
            LemmaId::HubSubsetSums => "hub_subset_sums",
            LemmaId::DegreeVkMinus2 => "degree_v_k_minus_2",
            LemmaId::QRefinedWindow => "q_refined_window",
            LemmaId::XkMinus1Small => "x_k_minus_1_small",
            LemmaId::DegreeVkMinus1 => "degree_v_k_minus_1",
            LemmaId::PathLengthBand => "path_length_band",
            LemmaId::RayleighAdd => "rayleigh_add",
            LemmaId::RayleighRemove => "rayleigh_remove",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    NotApplicable,
    Diagnostic,
}

/// One evaluated claim on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaFinding {
    pub lemma_id: LemmaId,
    pub graph_id: String,
    pub status: Status,
    /// Signed slack; nonnegative means the claim is met.
    pub margin: f64,
    /// Magnitude the margin is measured against.
    pub scale: f64,
    pub details: String,
}

impl LemmaFinding {
    /// Hard check: `holds` iff `margin >= -tol * scale`.
    pub(crate) fn hard(
        lemma_id: LemmaId,
        graph_id: &str,
        margin: f64,
        scale: f64,
        tol: f64,
        details: String,
    ) -> Self {
        let status = if margin >= -tol * scale {
            Status::Holds
        } else {
            Status::Violated
        };
        Self {
            lemma_id,
            graph_id: graph_id.to_string(),
            status,
            margin,
            scale,
            details: format!("{details}; scale {scale:.6e}"),
        }
    }

    pub(crate) fn diagnostic(
        lemma_id: LemmaId,
        graph_id: &str,
        margin: f64,
        scale: f64,
        details: String,
    ) -> Self {
        Self {
            lemma_id,
            graph_id: graph_id.to_string(),
            status: Status::Diagnostic,
            margin,
            scale,
            details: format!("{details}; scale {scale:.6e}"),
        }
    }

    pub(crate) fn not_applicable(lemma_id: LemmaId, graph_id: &str, details: String) -> Self {
        Self {
            lemma_id,
            graph_id: graph_id.to_string(),
            status: Status::NotApplicable,
            margin: 0.0,
            scale: 1.0,
            details,
        }
    }

    /// Whether the claim is met within [`HARD_TOL`], whatever the status.
    pub fn satisfied(&self) -> bool {
        self.status != Status::Violated
            && (self.status == Status::NotApplicable || self.margin >= -HARD_TOL * self.scale)
    }
}

/// Stable identifier for a graph: the canonical graph6 form when
/// brute-force canonicalization is affordable, the plain encoding otherwise.
pub fn graph_id(g: &Graph) -> String {
    if g.n() <= CANONICAL_MAX_N {
        canonical_form(g).expect("order checked")
    } else {
        Graph6Codec::long_form()
            .encode(g)
            .expect("long form covers every order")
    }
}

/// Orders findings for output: by graph, then claim.
pub fn sort_findings(findings: &mut [LemmaFinding]) {
    findings.sort_by(|a, b| {
        (&a.graph_id, a.lemma_id)
            .cmp(&(&b.graph_id, b.lemma_id))
            .then(a.margin.total_cmp(&b.margin))
    });
}
