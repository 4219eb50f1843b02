//! Exact counting of edge-weighted subgraph occurrences in weighted
//! undirected networks.
//!
//! Two evaluation routes are provided and cross-validated:
//!
//! * [`closed_forms`] — dedicated matrix/tensor expressions for the 29
//!   connected patterns on 3–5 vertices listed in [`catalog`];
//! * [`engine`] — a general inclusion–exclusion engine over the partition
//!   lattice that handles arbitrary small pattern multigraphs.
//!
//! Both count *labeled* occurrences
//! `L = sum over injective vertex tuples of the product of edge weights`;
//! dividing by the pattern's automorphism count gives the unlabeled count.
//! A brute-force [`oracle`] over all injective tuples backs the test
//! suites.

pub mod bench;
pub mod catalog;
pub mod closed_forms;
pub mod engine;
pub mod error;
pub mod graph;
pub mod kernels;
pub mod oracle;
pub mod pattern;

pub use catalog::{catalog, entry, list_patterns, parse_pattern, ArityClass, CatalogEntry};
pub use closed_forms::eval_closed_form;
pub use engine::{count, CountResult};
pub use error::{Error, Result};
pub use graph::{parse_dense_matrix, parse_edge_list, WeightedGraph};
pub use oracle::{brute_force_count, OracleConfig};
pub use pattern::{parse_literal, PatternMultigraph};
