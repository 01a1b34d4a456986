//! Exact incidence computations for affine flats over finite fields.
//!
//! k-flats and h-flats of F_q^d form a biregular bipartite graph under
//! containment. This crate enumerates them in canonical form, counts the
//! graph exactly, eigensolves its Gram matrix and audits mixing, incidence and
//! richness bounds against the measured spectrum.
//!
//! Counting is exact (`BigUint`), field elements are `u32`, and the spectral
//! layer is generic over [`Scalar`] with `f64` aliases below.

pub mod budget;
pub mod cli;
pub mod error;
pub mod flats;
pub mod gf;
pub mod incidence;
pub mod linalg;
pub mod oracle;
pub mod richness;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use flats::{count_x, count_y, enumerate_flats, gaussian_binomial, CountTable, Flat};
pub use gf::{Elem, FieldCtx};
pub use incidence::{IncidenceGraph, Params, Part};
pub use linalg::{FqMatrix, FqVector};
pub use sampling::SplitMix64;
pub use scalar::Scalar;
pub use verify::{run_verify, VerifyConfig, VerifyReport};

pub type Spectrum = spectral::SpectrumReport<f64>;
pub type Spectrum32 = spectral::SpectrumReport<f32>;
pub type Mixing = spectral::MixingReport<f64>;
pub type Incidence = spectral::IncidenceReport<f64>;
pub type Rich = richness::RichReport<f64>;
