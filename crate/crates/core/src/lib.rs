//! Principal ratio of the signless Laplacian `Q(G) = D(G) + A(G)`.
//!
//! The principal ratio `gamma(G)` of a connected graph is the ratio of the
//! largest to the smallest entry of the Perron vector of `Q(G)`. Among
//! connected graphs of a given order it is maximized, for large orders, by
//! kites: a path glued by one end to a clique.
//!
//! - [`graph`]: graphs, named families, kites, BFS paths.
//! - [`graph6`]: bit-exact graph6 codec.
//! - [`spectral`]: matrix-free `Q`, Perron eigenpair, ratio reports.
//! - [`kite`]: `sigma(q)`, the `U_i` sequence and kite ratios.
//! - [`enumerate`]: exhaustive connected-graph corpora and canonical forms.
//! - [`verify`]: extremal search and inequality checks with numeric margins.

pub mod enumerate;
pub mod graph;
pub mod graph6;
pub mod kite;
pub mod spectral;
pub mod verify;

pub use graph::{build_kite, build_named, Family, Graph, KiteParams};
pub use kite::Scale;
pub use spectral::{perron, principal_ratio, PerronResult, RatioReport, DEFAULT_TOL};
