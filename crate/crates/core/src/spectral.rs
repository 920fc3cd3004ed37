//! Perron eigenpair of the signless Laplacian `Q = D + A` and the principal
//! ratio derived from it.
//!
//! `Q` is applied matrix-free. For a connected graph `Q` is symmetric,
//! nonnegative, irreducible and positive semidefinite with a positive
//! diagonal (n >= 2), so plain power iteration converges to the simple
//! dominant eigenpair without a shift.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_connected, pendant_prefix_length, shortest_path, Graph};

/// Default convergence tolerance on the per-entry relative residual.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Entries of the max-normalized Perron vector below this are treated as
/// lost to the double-precision range.
pub const TINY_ENTRY: f64 = 1e-250;

/// Relative tolerance used to detect ties between Perron entries.
const TIE_TOL: f64 = 1e-12;

/// Iteration budget used when the caller has no preference.
pub fn default_max_iter(n: usize) -> usize {
    200 * n + 10_000
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("vector of length {found} does not match graph order {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error(
        "no convergence after {iterations} iterations (residual {residual:e}, q1 estimate {q1})"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        q1: f64,
    },
    #[error("Rayleigh quotient decreased by {drop:e} at iteration {iteration}")]
    NonMonotone { iteration: usize, drop: f64 },
}

/// Dominant eigenpair of `Q(G)` with a residual certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronResult {
    pub q1: f64,
    /// Perron vector with unit 2-norm.
    pub x_unit: Vec<f64>,
    /// Same vector rescaled so that its largest entry is exactly 1.
    pub x_max1: Vec<f64>,
    /// `max_v |(Qx)_v - q1 x_v| / q1` for `x = x_max1`.
    pub residual: f64,
    /// `max_v |(Qx)_v - q1 x_v| / (q1 x_v)` over entries above [`TINY_ENTRY`].
    /// This is the quantity the iteration drives below `tol`.
    pub entry_residual: f64,
    pub iterations: usize,
    /// Some entries fell below [`TINY_ENTRY`]; ratios built from them should
    /// go through the log-space kite formulas instead.
    pub tiny_entries: bool,
}

impl PerronResult {
    pub fn norm_sq_max1(&self) -> f64 {
        self.x_max1.iter().map(|v| v * v).sum()
    }
}

/// `y = Q x`, i.e. `y_v = d(v) x_v + sum_{u ~ v} x_u`.
pub fn q_matvec(g: &Graph, x: &[f64]) -> Result<Vec<f64>, SpectralError> {
    if x.len() != g.n() {
        return Err(SpectralError::DimensionMismatch {
            expected: g.n(),
            found: x.len(),
        });
    }
    let mut y = vec![0.0; g.n()];
    matvec_into(g, x, &mut y);
    Ok(y)
}

fn matvec_into(g: &Graph, x: &[f64], y: &mut [f64]) {
    for (v, out) in y.iter_mut().enumerate() {
        let nb = g.neighbors(v);
        let s: f64 = nb.iter().map(|&u| x[u as usize]).sum();
        *out = nb.len() as f64 * x[v] + s;
    }
}

/// `x^T Q x / x^T x` for any nonzero `x`.
pub fn rayleigh_quotient(g: &Graph, x: &[f64]) -> Result<f64, SpectralError> {
    let y = q_matvec(g, x)?;
    let num: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    Ok(num / den)
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

/// Residuals of the eigen-equation for `x`, scaled so the largest entry is 1:
/// `(max_v |r_v| / q, max over non-tiny v of |r_v| / (q x_v))`.
fn residuals(x: &[f64], y: &[f64], q: f64) -> (f64, f64, bool) {
    let xmax = x.iter().cloned().fold(0.0, f64::max);
    let mut abs_res = 0.0f64;
    let mut rel_res = 0.0f64;
    let mut tiny = false;
    for (&xv, &yv) in x.iter().zip(y) {
        let r = (yv - q * xv).abs();
        abs_res = abs_res.max(r / (q * xmax));
        if xv > TINY_ENTRY * xmax {
            rel_res = rel_res.max(r / (q * xv));
        } else {
            tiny = true;
        }
    }
    (abs_res, rel_res, tiny)
}

/// Power iteration for the Perron eigenpair of `Q(G)`.
///
/// Starts from `degree + 1` and stops once every non-tiny entry satisfies
/// its eigen-equation to relative accuracy `tol`; this also bounds the
/// reported `residual` by `tol`. The returned `q1` is the Rayleigh quotient
/// of the returned vector. Rayleigh quotients of successive iterates must be
/// nondecreasing (Q is positive semidefinite); a drop beyond rounding is
/// reported as [`SpectralError::NonMonotone`].
pub fn perron(g: &Graph, tol: f64, max_iter: usize) -> Result<PerronResult, SpectralError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::InvalidTolerance(tol));
    }
    let n = g.n();
    if n == 1 {
        return Ok(PerronResult {
            q1: 0.0,
            x_unit: vec![1.0],
            x_max1: vec![1.0],
            residual: 0.0,
            entry_residual: 0.0,
            iterations: 0,
            tiny_entries: false,
        });
    }
    if !is_connected(g) {
        return Err(SpectralError::NotConnected);
    }

    let mut x: Vec<f64> = (0..n).map(|v| g.degree(v) as f64 + 1.0).collect();
    normalize(&mut x);
    let mut y = vec![0.0; n];
    let mut prev_rho = 0.0f64;
    let mut last = (0.0, f64::INFINITY, 0.0);

    for iteration in 1..=max_iter {
        matvec_into(g, &x, &mut y);
        let rho: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let drop = prev_rho - rho;
        if drop > 1e-12 * rho + f64::MIN_POSITIVE {
            return Err(SpectralError::NonMonotone { iteration, drop });
        }
        prev_rho = rho;

        let (abs_res, rel_res, tiny) = residuals(&x, &y, rho);
        last = (rho, rel_res, abs_res);
        if rel_res <= tol {
            let xmax = x.iter().cloned().fold(0.0, f64::max);
            let x_max1 = x.iter().map(|v| v / xmax).collect();
            return Ok(PerronResult {
                q1: rho,
                x_unit: x,
                x_max1,
                residual: abs_res,
                entry_residual: rel_res,
                iterations: iteration,
                tiny_entries: tiny,
            });
        }

        std::mem::swap(&mut x, &mut y);
        normalize(&mut x);
    }
    Err(SpectralError::NoConvergence {
        iterations: max_iter,
        residual: last.1,
        q1: last.0,
    })
}

/// Principal ratio `gamma = x_max / x_min` of the Perron vector together with
/// where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub gamma: f64,
    pub q1: f64,
    pub vmin: usize,
    pub vmax: usize,
    /// Shortest `vmin -> vmax` path.
    pub path: Vec<usize>,
    pub pendant_prefix: usize,
    /// Set when Perron entries dropped below [`TINY_ENTRY`]; `gamma` is then
    /// unreliable (possibly infinite).
    pub log_space_recommended: bool,
}

impl RatioReport {
    /// Number of vertices on the min -> max path.
    pub fn k(&self) -> usize {
        self.path.len()
    }
}

/// Builds the ratio report for an already computed Perron result.
///
/// `vmin` (`vmax`) is the lowest-index vertex whose entry is within a
/// relative `1e-12` of the minimum (maximum).
pub fn ratio_report(g: &Graph, pr: &PerronResult) -> RatioReport {
    let x = &pr.x_max1;
    let xmin = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let xmax = x.iter().cloned().fold(0.0, f64::max);
    let vmin = x
        .iter()
        .position(|&v| v <= xmin * (1.0 + TIE_TOL))
        .expect("nonempty vector");
    let vmax = x
        .iter()
        .position(|&v| v >= xmax * (1.0 - TIE_TOL))
        .expect("nonempty vector");
    let path = shortest_path(g, vmin, vmax).expect("connected graph");
    let pendant_prefix = pendant_prefix_length(g, &path).expect("BFS path is a path");
    RatioReport {
        gamma: x[vmax] / x[vmin],
        q1: pr.q1,
        vmin,
        vmax,
        path,
        pendant_prefix,
        log_space_recommended: pr.tiny_entries,
    }
}

/// Perron computation followed by [`ratio_report`].
pub fn analyze(g: &Graph, tol: f64) -> Result<(PerronResult, RatioReport), SpectralError> {
    let pr = perron(g, tol, default_max_iter(g.n()))?;
    let report = ratio_report(g, &pr);
    Ok((pr, report))
}

pub fn principal_ratio(g: &Graph, tol: f64) -> Result<RatioReport, SpectralError> {
    analyze(g, tol).map(|(_, r)| r)
}
