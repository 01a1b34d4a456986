use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::incidence::{IncidenceGraph, Part};
use crate::scalar::Scalar;

use super::SpectrumReport;

/// Observed edge count between X and Y against the mixing-lemma bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport<T> {
    #[serde(rename = "X_size")]
    pub x_size: usize,
    #[serde(rename = "Y_size")]
    pub y_size: usize,
    pub e: u64,
    /// `a |X| |Y| / |B|` as a float; the exact value is `main_exact`.
    pub main: T,
    pub deviation: T,
    pub bound_basic: T,
    pub bound_refined: T,
    pub pass: bool,
    #[serde(skip)]
    pub main_exact: Ratio<u64>,
    #[serde(skip)]
    pub pass_basic: bool,
    #[serde(skip)]
    pub pass_refined: bool,
}

/// Sorted, deduplicated copy of `idx`, rejecting indices outside `0..size`.
pub(crate) fn normalize_subset(idx: &[usize], size: usize) -> Result<Vec<usize>> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= size) {
        return Err(Error::BadSubset { index: bad, size });
    }
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Number of edges between `xs` (in A) and `ys` (in B), both normalized.
pub(crate) fn edges_between(g: &IncidenceGraph, xs: &[usize], ys: &[usize]) -> u64 {
    let mut in_y = vec![false; g.size(Part::B)];
    for &y in ys {
        in_y[y] = true;
    }
    xs.iter()
        .map(|&x| g.neighbors(Part::A, x).iter().filter(|&&b| in_y[b as usize]).count() as u64)
        .sum()
}

/// Compare e(X, Y) with `a|X||Y|/|B|` using the third eigenvalue from `spectrum`.
pub fn mixing_audit<T: Scalar>(
    g: &IncidenceGraph,
    spectrum: &SpectrumReport<T>,
    xs: &[usize],
    ys: &[usize],
) -> Result<MixingReport<T>> {
    let (size_a, size_b) = (g.size(Part::A), g.size(Part::B));
    let xs = normalize_subset(xs, size_a)?;
    let ys = normalize_subset(ys, size_b)?;
    let e = edges_between(g, &xs, &ys);
    let (nx, ny) = (xs.len() as u64, ys.len() as u64);
    let a = spectrum.deg_a as u64;
    let num = a * nx * ny;
    let den = size_b as u64;
    let main_exact = Ratio::new(num, den);
    let dev_num = (e * den).abs_diff(num);
    let deviation = T::of_u64(dev_num) / T::of_u64(den);
    let lambda3 = spectrum.lambda3;
    let xy = T::of_u64(nx * ny);
    let bound_basic = lambda3 * xy.sqrt();
    let fx = T::of_u64(size_a as u64 - nx) / T::of_u64(size_a as u64);
    let fy = T::of_u64(size_b as u64 - ny) / T::of_u64(size_b as u64);
    let bound_refined = lambda3 * (xy * fx * fy).sqrt();
    let slack = spectrum.tol * bound_basic.max(T::one());
    let pass_basic = deviation <= bound_basic + slack;
    let pass_refined = deviation <= bound_refined + slack;
    Ok(MixingReport {
        x_size: xs.len(),
        y_size: ys.len(),
        e,
        main: T::of(main_exact.numer().to_f64().unwrap() / main_exact.denom().to_f64().unwrap()),
        deviation,
        bound_basic,
        bound_refined,
        pass: pass_basic && pass_refined,
        main_exact,
        pass_basic,
        pass_refined,
    })
}
