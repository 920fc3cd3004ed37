//! Large-order behaviour of the best kite.

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::graph::{build_kite, KiteParams};
use crate::kite::{best_kite_k, Scale};
use crate::spectral::{default_max_iter, perron, DEFAULT_TOL};

/// Window for `(n - k*) ln n / n`; the expected limit is 1.
pub const LENGTH_BAND: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    /// Best kite path length.
    pub k_star: usize,
    /// `ln gamma` of the best kite.
    pub log_gamma: f64,
    /// `(n - k*) ln n / n`.
    pub length_ratio: f64,
    pub in_band: bool,
    /// Perron entry at `v_{k-1}` with the largest entry scaled to 1.
    pub x_k_minus_1: f64,
    /// `n^(-1/6)`.
    pub n_pow: f64,
    pub x_below: bool,
}

/// One row per order, in input order. Each `n` must be at least 10.
pub fn asymptotic_scan(n_values: &[usize]) -> Result<Vec<ScanRow>, VerifyError> {
    n_values
        .iter()
        .map(|&n| {
            if n < 10 {
                return Err(VerifyError::ScanOrder(n));
            }
            let (k, log_gamma) = best_kite_k(n, Scale::Log)?;
            let g = build_kite(KiteParams::new(n, k)?);
            let pr = perron(&g, DEFAULT_TOL, default_max_iter(n))?;
            let x_k_minus_1 = pr.x_max1[k - 2];
            let n_f = n as f64;
            let length_ratio = (n - k) as f64 * n_f.ln() / n_f;
            let n_pow = n_f.powf(-1.0 / 6.0);
            Ok(ScanRow {
                n,
                k_star: k,
                log_gamma,
                length_ratio,
                in_band: (LENGTH_BAND.0..=LENGTH_BAND.1).contains(&length_ratio),
                x_k_minus_1,
                n_pow,
                x_below: x_k_minus_1 < n_pow,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_order_row_is_finite() {
        let rows = asymptotic_scan(&[10]).unwrap();
        let r = &rows[0];
        assert_eq!(r.n, 10);
        assert!((2..=8).contains(&r.k_star));
        for v in [r.log_gamma, r.length_ratio, r.x_k_minus_1, r.n_pow] {
            assert!(v.is_finite());
        }
        assert!(r.x_k_minus_1 > 0.0 && r.x_k_minus_1 < 1.0);
    }

    #[test]
    fn rejects_tiny_orders() {
        assert_eq!(
            asymptotic_scan(&[9]).unwrap_err(),
            VerifyError::ScanOrder(9)
        );
    }
}
