//! Spectra of incidence graphs, the expander mixing audit and the
//! incidence deviation bound.

mod bounds;
mod eigen;
mod mixing;
mod spectrum;

pub use bounds::{
    guarantee_threshold, incidence_bound_check, incidence_bound_check_indexed, lambda3_bound_exponent, lambda3_bound_sq_exact,
    BoundSource,
    IncidenceReport,
};
pub use eigen::{eigen_sym, eigen_sym_with, EigenMethod, SymMatrix};
pub use mixing::{mixing_audit, MixingReport};
pub use spectrum::{graph_spectrum, lambda3_bound_sq, SpectrumReport, DEFAULT_TOL};
