//! The bipartite incidence graph between all k-flats and all h-flats of F_q^d.

mod gram;
mod graph;
mod pairs;

pub use gram::{gram_matrix, verify_decomposition, ClassSummary, DecompositionReport, Gram};
pub use graph::{IncidenceGraph, Params, Part};
pub use pairs::{common_neighbor_count, count_incidences, pair_rank};
