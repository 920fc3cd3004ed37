//! Scalar machinery for kites: `sigma(q)`, the sequence `U_i(q)`, its
//! two-sided geometric bounds, the path-walk upper bound on the principal
//! ratio, and closed-form kite ratios.
//!
//! For `q > 4`, `U_0 = 1`, `U_1 = q - 1` and `U_{i+1} = (q - 2) U_i - U_{i-1}`.
//! With `sigma` the larger root of `s^2 - (q - 2) s + 1 = 0`,
//!
//! ```text
//! U_i = (sigma^(i+1) - sigma^-(i+1) + sigma^i - sigma^-i) / (sigma - 1/sigma)
//! ```
//!
//! `U_i` grows like `sigma^i`, so anything past a few hundred steps at
//! moderate `q` overflows binary64; [`log_u`] evaluates `ln U_i` directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_kite, is_path, Graph, GraphError, KiteParams};
use crate::spectral::{
    default_max_iter, perron, PerronResult, RatioReport, SpectralError, DEFAULT_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KiteError {
    #[error("q = {0} is outside the domain q > 4")]
    Domain(f64),
    #[error("index j = {j} outside 1..={k}")]
    PathIndex { j: usize, k: usize },
    #[error("sandwich needs j >= 2, got {0}")]
    SandwichIndex(usize),
    #[error("report path is not a path of the graph")]
    PathMismatch,
    #[error("U_{i}({q}) overflows binary64; use log mode")]
    Overflow { q: f64, i: usize },
    #[error("kite clique must have at least 3 vertices (n = {n}, k = {k})")]
    CliqueTooSmall { n: usize, k: usize },
    #[error("best kite search needs n >= 4, got {0}")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

/// `sigma(q)` along with the quantities every other formula reuses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaValue {
    pub q: f64,
    pub sigma: f64,
    /// `1 / sigma`, the smaller root.
    pub inv: f64,
    /// `sigma - 1/sigma = sqrt(q^2 - 4q)`.
    pub gap: f64,
    /// `ln sigma`, computed without cancellation near `q = 4`.
    pub ln_sigma: f64,
}

pub fn sigma(q: f64) -> Result<SigmaValue, KiteError> {
    if q.is_nan() || q <= 4.0 || !q.is_finite() {
        return Err(KiteError::Domain(q));
    }
    let gap = (q * (q - 4.0)).sqrt();
    let sigma = (q - 2.0 + gap) / 2.0;
    Ok(SigmaValue {
        q,
        sigma,
        inv: 2.0 / (q - 2.0 + gap),
        gap,
        ln_sigma: ((q - 4.0 + gap) / 2.0).ln_1p(),
    })
}

/// `U_0, ..., U_m` either as values or as natural logs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct USequence {
    pub q: f64,
    pub scale: Scale,
    pub values: Vec<f64>,
}

/// `U_0..=U_m` by the three-term recurrence.
pub fn u_recurrence(q: f64, m: usize) -> Result<USequence, KiteError> {
    sigma(q)?;
    let mut values = Vec::with_capacity(m + 1);
    values.push(1.0);
    if m >= 1 {
        values.push(q - 1.0);
    }
    for i in 1..m {
        let next = (q - 2.0) * values[i] - values[i - 1];
        if !next.is_finite() {
            return Err(KiteError::Overflow { q, i: i + 1 });
        }
        values.push(next);
    }
    Ok(USequence {
        q,
        scale: Scale::Linear,
        values,
    })
}

/// `U_0..=U_m` in the requested scale; log scale never overflows.
pub fn u_sequence(q: f64, m: usize, scale: Scale) -> Result<USequence, KiteError> {
    match scale {
        Scale::Linear => u_recurrence(q, m),
        Scale::Log => {
            let s = sigma(q)?;
            Ok(USequence {
                q,
                scale: Scale::Log,
                values: (0..=m).map(|i| log_u_with(&s, i)).collect(),
            })
        }
    }
}

/// Closed-form `U_i(q)`. Returns `inf` once the value leaves binary64.
pub fn u_closed_form(q: f64, i: usize) -> Result<f64, KiteError> {
    let s = sigma(q)?;
    Ok(closed_form_with(&s, i))
}

fn closed_form_with(s: &SigmaValue, i: usize) -> f64 {
    if i == 0 {
        return 1.0;
    }
    let hi = s.sigma.powf(i as f64 + 1.0);
    let lo = s.sigma.powf(i as f64);
    (hi - 1.0 / hi + lo - 1.0 / lo) / s.gap
}

/// `ln U_i(q)`, finite for every `i`.
///
/// Uses `U_i = sigma^(i+1) (1 - sigma^-(2i+2) + sigma^-1 (1 - sigma^-2i)) / (sigma - 1/sigma)`
/// with both brackets evaluated through `expm1`.
pub fn log_u(q: f64, i: usize) -> Result<f64, KiteError> {
    let s = sigma(q)?;
    Ok(log_u_with(&s, i))
}

fn log_u_with(s: &SigmaValue, i: usize) -> f64 {
    if i == 0 {
        return 0.0;
    }
    let a = -(-(2.0 * i as f64 + 2.0) * s.ln_sigma).exp_m1();
    let b = s.inv * -(-(2.0 * i as f64) * s.ln_sigma).exp_m1();
    (i as f64 + 1.0) * s.ln_sigma + (a + b).ln() - s.gap.ln()
}

/// Bounds `(lower, upper)` on `U_{j-1}(q)`:
/// `(q-1)(q-2-1/(q-3))^(j-2) <= U_{j-1} <= (q-1)(q-2-1/q)^(j-2)`.
pub fn u_sandwich(q: f64, j: usize) -> Result<(f64, f64), KiteError> {
    sigma(q)?;
    if j < 2 {
        return Err(KiteError::SandwichIndex(j));
    }
    let e = (j - 2) as i32;
    let lower = (q - 1.0) * (q - 2.0 - 1.0 / (q - 3.0)).powi(e);
    let upper = (q - 1.0) * (q - 2.0 - 1.0 / q).powi(e);
    Ok((lower, upper))
}

/// Path-walk upper bound on the principal ratio at position `j` (1-based)
/// of the min -> max path: `U_{j-1}(q1) / x_{path[j-1]}` with the Perron
/// vector scaled so that `x_{vmax} = 1`.
///
/// The bound is attained when `path[0]` has degree 1 and `path[1..j-1]`
/// all have degree 2.
pub fn gamma_upper_bound(
    g: &Graph,
    pr: &PerronResult,
    report: &RatioReport,
    j: usize,
) -> Result<f64, KiteError> {
    let s = sigma(pr.q1)?;
    let k = report.path.len();
    if j == 0 || j > k {
        return Err(KiteError::PathIndex { j, k });
    }
    if pr.x_max1.len() != g.n() || !is_path(g, &report.path) {
        return Err(KiteError::PathMismatch);
    }
    let x = &pr.x_max1;
    let xj = x[report.path[j - 1]] / x[report.vmax];
    Ok(closed_form_with(&s, j - 1) / xj)
}

fn kite_params_checked(n: usize, k: usize) -> Result<KiteParams, KiteError> {
    let p = KiteParams::new(n, k)?;
    if k > 1 && p.clique_size() < 3 {
        return Err(KiteError::CliqueTooSmall { n, k });
    }
    Ok(p)
}

/// `q1` of the kite `P_k · K_{n-k+1}`, computed numerically.
pub fn kite_q1(n: usize, k: usize) -> Result<f64, KiteError> {
    let p = kite_params_checked(n, k)?;
    let g = build_kite(p);
    Ok(perron(&g, DEFAULT_TOL, default_max_iter(n))?.q1)
}

/// Principal ratio of `P_k · K_{n-k+1}` as `U_{k-1}(q1)`; in log mode the
/// natural log of it.
pub fn kite_gamma(n: usize, k: usize, mode: Scale) -> Result<f64, KiteError> {
    kite_params_checked(n, k)?;
    if k == 1 {
        return Ok(match mode {
            Scale::Linear => 1.0,
            Scale::Log => 0.0,
        });
    }
    let q = kite_q1(n, k)?;
    let s = sigma(q)?;
    match mode {
        Scale::Linear => {
            let v = closed_form_with(&s, k - 1);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(KiteError::Overflow { q, i: k - 1 })
            }
        }
        Scale::Log => Ok(log_u_with(&s, k - 1)),
    }
}

/// Kite path length maximizing the ratio over `2 <= k <= n - 2`, with the
/// natural log of that ratio. Every `k` is evaluated; ties go to the smaller
/// `k`.
pub fn best_kite_k(n: usize, mode: Scale) -> Result<(usize, f64), KiteError> {
    if n < 4 {
        return Err(KiteError::OrderTooSmall(n));
    }
    let scores: Vec<(usize, f64)> = (2..=n - 2)
        .into_par_iter()
        .map(|k| {
            let v = kite_gamma(n, k, mode)?;
            Ok((k, if mode == Scale::Linear { v.ln() } else { v }))
        })
        .collect::<Result<_, KiteError>>()?;
    let mut best = scores[0];
    for &(k, lg) in &scores[1..] {
        if lg > best.1 {
            best = (k, lg);
        }
    }
    Ok(best)
}
