//! Rayleigh-quotient probes: how far `q1` can move when one edge changes.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{graph_id, LemmaFinding, LemmaId, VerifyError, PROBE_TOL};
use crate::graph::{is_connected, Graph};
use crate::spectral::{default_max_iter, perron, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeAction {
    Add,
    Remove,
}

impl fmt::Display for EdgeAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeAction::Add => "add",
            EdgeAction::Remove => "remove",
        })
    }
}

/// Adds or removes `edge` and compares the shift in `q1` with the Rayleigh
/// bound built from the Perron vector of the original graph:
///
/// * add: `q+ - q >= (x_u + x_v)^2 / |x|^2`
/// * remove: `q- - q >= -(x_u + x_v)^2 / |x|^2 >= -4 / |x|^2`, the last
///   with the largest entry of `x` equal to 1.
///
/// The finding holds when its margin is at least `-1e-10`.
pub fn perturbation_probe(
    g: &Graph,
    edge: (usize, usize),
    action: EdgeAction,
) -> Result<LemmaFinding, VerifyError> {
    let (u, v) = edge;
    let n = g.n();
    let invalid = VerifyError::InvalidEdge { u, v, action };
    if u >= n || v >= n || u == v {
        return Err(invalid);
    }
    let present = g.has_edge(u, v);
    let h = match action {
        EdgeAction::Add if !present => g.with_edge(u, v)?,
        EdgeAction::Remove if present => g.without_edge(u, v)?,
        _ => return Err(invalid),
    };
    if !is_connected(g) {
        return Err(crate::spectral::SpectralError::NotConnected.into());
    }
    if !is_connected(&h) {
        return Err(VerifyError::Disconnects { u, v });
    }

    let old = perron(g, DEFAULT_TOL, default_max_iter(n))?;
    let new = perron(&h, DEFAULT_TOL, default_max_iter(n))?;
    let x = &old.x_unit;
    let norm_sq: f64 = x.iter().map(|t| t * t).sum();
    let rhs = (x[u] + x[v]).powi(2) / norm_sq;
    let shift = new.q1 - old.q1;

    let (lemma, margin, details) = match action {
        EdgeAction::Add => (
            LemmaId::RayleighAdd,
            shift - rhs,
            format!("q+ - q = {shift:.12e}, (x_u + x_v)^2/|x|^2 = {rhs:.12e}"),
        ),
        EdgeAction::Remove => {
            let cap = 4.0 / old.norm_sq_max1();
            let rhs_max1 = (old.x_max1[u] + old.x_max1[v]).powi(2) / old.norm_sq_max1();
            (
                LemmaId::RayleighRemove,
                (shift + rhs).min(cap - rhs_max1),
                format!(
                    "q- - q = {shift:.12e}, (x_u + x_v)^2/|x|^2 = {rhs:.12e}, 4/|x|^2 = {cap:.12e}"
                ),
            )
        }
    };
    let id = graph_id(g);
    Ok(LemmaFinding::hard(
        lemma,
        &id,
        margin,
        1.0,
        PROBE_TOL,
        format!("edge ({u}, {v}); {details}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_kite, KiteParams};
    use crate::verify::Status;

    fn kite(n: usize, k: usize) -> Graph {
        build_kite(KiteParams::new(n, k).unwrap())
    }

    #[test]
    fn restore_clique_edge() {
        // kite(8,4): clique on 3..=7; drop (5, 6) then put it back.
        let g = kite(8, 4).without_edge(5, 6).unwrap();
        let f = perturbation_probe(&g, (5, 6), EdgeAction::Add).unwrap();
        assert_eq!(f.lemma_id, LemmaId::RayleighAdd);
        assert_eq!(f.status, Status::Holds);
        assert!(f.margin > 0.0);
    }

    #[test]
    fn pendant_removal_disconnects() {
        let g = kite(8, 4);
        assert_eq!(
            perturbation_probe(&g, (0, 1), EdgeAction::Remove).unwrap_err(),
            VerifyError::Disconnects { u: 0, v: 1 }
        );
    }

    #[test]
    fn invalid_edges() {
        let g = kite(8, 4);
        assert!(matches!(
            perturbation_probe(&g, (0, 1), EdgeAction::Add),
            Err(VerifyError::InvalidEdge { .. })
        ));
        assert!(matches!(
            perturbation_probe(&g, (0, 2), EdgeAction::Remove),
            Err(VerifyError::InvalidEdge { .. })
        ));
        assert!(matches!(
            perturbation_probe(&g, (3, 3), EdgeAction::Add),
            Err(VerifyError::InvalidEdge { .. })
        ));
    }

    #[test]
    fn join_path_to_clique() {
        // kite(10,5): v_(k-1) = 3, clique 4..=9; vertex 6 is not adjacent to 3.
        let g = kite(10, 5);
        let f = perturbation_probe(&g, (3, 6), EdgeAction::Add).unwrap();
        assert_eq!(f.status, Status::Holds);
        assert!(f.margin > 0.0);
    }

    #[test]
    fn remove_clique_edge() {
        let f = perturbation_probe(&kite(9, 3), (4, 7), EdgeAction::Remove).unwrap();
        assert_eq!(f.lemma_id, LemmaId::RayleighRemove);
        assert_eq!(f.status, Status::Holds);
    }
}
