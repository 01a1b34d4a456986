//! Affine k-flats in F_q^d: canonical form, enumeration and exact counts.

mod counts;
mod enumerate;
mod flat;

pub use counts::{count_x, count_y, gaussian_binomial, gaussian_binomial_u64, pair_class_degrees, CountTable};
pub use enumerate::{enumerate_flats, enumerate_subspaces, for_each_flat};
pub use flat::{flat_eq, Flat};
