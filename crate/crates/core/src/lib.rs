//! Quota trees over directed multigraphs.
//!
//! A quota tree is a rooted tree immersed in a host digraph so that every
//! vertex `v` is hit exactly `q(v)` times. This crate decides when such trees
//! (and forests with a given start portfolio) exist, finds them with a
//! generic queue-driven search, counts them exactly, samples them uniformly,
//! finds minimum-weight ones, and uses them to expand DFAs and to compute
//! `k` lightest paths.
//!
//! ```
//! use quota_trees::{count_forests_exact, MultiGraph, QuotaSpec};
//!
//! // Cayley: 4^2 spanning trees of K_4 rooted at a fixed vertex.
//! let g = MultiGraph::complete(4);
//! let spec = QuotaSpec::single_root(&g, vec![1; 4], 0).unwrap();
//! assert_eq!(count_forests_exact(&g, &spec).unwrap(), 16u32.into());
//! ```

pub mod counting;
pub mod dfa;
pub mod error;
pub mod feasibility;
pub mod forest;
pub mod graph;
pub mod io;
pub mod mqf;
pub mod oracle;
pub mod sampling;
pub mod search;

pub use counting::{
    count_extensions, count_forests_at_most, count_forests_exact, matrix_forest_det, quota_symbol,
    quota_symbol_rec, RecurrenceEvaluator,
};
pub use dfa::{dfa_equivalent, dfa_graph, expand_dfa, feasible_class_sizes, minimize_dfa, Dfa};
pub use error::{Error, Result};
pub use feasibility::{achievable, enough_arrows_violations, feasibility_report, is_connected_support};
pub use forest::{validate_forest, ForestViolation, ImmersedForest};
pub use graph::{adjacency_matrix, check_out_covering, in_arrows, Mode, MultiGraph, QuotaSpec, Weight, WeightMap};
pub use mqf::{check_inventory, euler_circuit, inventory_to_forest, min_quota_inventory, violating_subset, Inventory};
pub use oracle::{brute_force_k_lightest, brute_force_mqf, enumerate_forests};
pub use sampling::{sample_batch, sample_forest};
pub use search::{at_most_to_exact, k_lightest_paths, quota_search, Discipline, SearchConfig, SearchError};
