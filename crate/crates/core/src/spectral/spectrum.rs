use num_traits::ToPrimitive;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::incidence::{gram_matrix, IncidenceGraph, Params, Part};
use crate::scalar::Scalar;

use super::bounds::{lambda3_bound_exponent, lambda3_bound_sq_exact};
use super::eigen::{eigen_sym, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;

/// `(2k + 1) q^{(d-h)h + k(2h-d-k+1)}`, the bound on the square of the third eigenvalue.
pub fn lambda3_bound_sq(p: &Params) -> f64 {
    (2 * p.k + 1) as f64 * (p.q as f64).powi(lambda3_bound_exponent(p) as i32)
}

/// Top of the adjacency spectrum of an incidence graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport<T> {
    pub params: Params,
    pub lambda1: T,
    /// Always `-lambda1` for a bipartite graph.
    pub lambda2: T,
    pub lambda3: T,
    /// `sqrt(2k+1) q^{((d-h)h + k(2h-d-k+1))/2}`.
    pub bound: T,
    pub ratio: T,
    /// The same bound with exact Gaussian-binomial constants in place of leading powers.
    pub bound_exact: T,
    /// `|lambda1 - sqrt(deg_A deg_B)|`.
    pub ab_check: T,
    /// Whether `h >= 2k + 1`, the range where the closed-form bound is claimed.
    pub hypothesis_ok: bool,
    /// `lambda1^2 = deg_A deg_B` within tolerance.
    pub ab_ok: bool,
    /// `lambda3^2` is within the closed-form bound.
    pub closed_form_ok: bool,
    /// `lambda3^2` is within the exact-constant bound.
    pub exact_ok: bool,
    pub pass: bool,
    #[serde(skip)]
    pub gram_part: Part,
    #[serde(skip)]
    pub tol: T,
    #[serde(skip)]
    pub deg_a: usize,
    #[serde(skip)]
    pub deg_b: usize,
}

/// Eigensolve the Gram matrix of the smaller part. Its two largest
/// eigenvalues are `lambda1^2` and `lambda3^2`, since `N N^T` and `N^T N`
/// share their nonzero spectrum.
pub fn graph_spectrum<T: Scalar>(g: &IncidenceGraph, tol: T, budget: &Budget) -> Result<SpectrumReport<T>> {
    let params = g.params();
    let (deg_a, deg_b) = g.check_biregular()?;
    let part = if g.size(Part::A) <= g.size(Part::B) { Part::A } else { Part::B };
    let n = g.size(part);
    if n as u64 > budget.max_eigen_dim {
        return Err(Error::TooLarge(format!("eigenproblem of order {n} exceeds max_eigen_dim = {}", budget.max_eigen_dim)));
    }
    let gram = gram_matrix(g, part, budget)?;
    let m = SymMatrix::from_fn(n, |i, j| T::of_u64(u64::from(gram.get(i, j))));
    let ev = eigen_sym(&m, tol)?;
    let top = ev.first().copied().unwrap_or_else(T::zero);
    let second = ev.get(1).copied().unwrap_or_else(T::zero).max(T::zero());
    let lambda1 = top.sqrt();
    let lambda3 = second.sqrt();
    let ab = T::of_u64((deg_a * deg_b) as u64);
    let bound_sq = T::of(lambda3_bound_sq(&params));
    let bound = bound_sq.sqrt();
    let exact_sq = T::of(lambda3_bound_sq_exact(&params)?.to_f64().unwrap_or(f64::INFINITY));
    let ten = T::of(10.0);
    let ab_ok = (top - ab).abs() <= ten * tol * ab.max(T::one());
    let slack = ten * tol * top.max(T::one());
    let closed_form_ok = second <= bound_sq + slack;
    let exact_ok = second <= exact_sq + slack;
    Ok(SpectrumReport {
        params,
        lambda1,
        lambda2: -lambda1,
        lambda3,
        bound,
        ratio: lambda3 / bound,
        bound_exact: exact_sq.sqrt(),
        ab_check: (lambda1 - ab.sqrt()).abs(),
        hypothesis_ok: params.h >= 2 * params.k + 1,
        ab_ok,
        closed_form_ok,
        exact_ok,
        pass: ab_ok && (closed_form_ok || params.h < 2 * params.k + 1),
        gram_part: part,
        tol,
        deg_a,
        deg_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn spectrum(q: u64, d: usize, k: usize, h: usize) -> SpectrumReport<f64> {
        let ctx = FieldCtx::new(q).unwrap();
        let g = IncidenceGraph::build(&ctx, d, k, h, &Budget::default()).unwrap();
        graph_spectrum(&g, DEFAULT_TOL, &Budget::default()).unwrap()
    }

    #[test]
    fn point_line_plane_is_sharp() {
        let s = spectrum(3, 2, 0, 1);
        assert!((s.lambda1 - 12f64.sqrt()).abs() < 1e-9);
        assert_eq!(s.lambda2, -s.lambda1);
        assert!((s.lambda3 - 3f64.sqrt()).abs() < 1e-9);
        assert!((s.ratio - 1.0).abs() < 1e-9);
        assert!(s.pass && s.hypothesis_ok);
        assert_eq!(s.gram_part, Part::A);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"params":{"q":3,"d":2,"k":0,"h":1},"lambda1":"#));
    }

    #[test]
    fn points_and_planes() {
        let s = spectrum(3, 3, 0, 2);
        assert!(s.lambda3 <= 3.0 + 1e-9);
        assert!(s.pass);
    }

    #[test]
    fn single_precision_spectrum() {
        let ctx = FieldCtx::new(3).unwrap();
        let g = IncidenceGraph::build(&ctx, 2, 0, 1, &Budget::default()).unwrap();
        let s: SpectrumReport<f32> = graph_spectrum(&g, 1e-5, &Budget::default()).unwrap();
        assert!((s.lambda3 - 3f32.sqrt()).abs() < 1e-4);
        assert!(s.pass);
    }

    #[test]
    fn respects_eigen_budget() {
        let ctx = FieldCtx::new(3).unwrap();
        let g = IncidenceGraph::build(&ctx, 3, 0, 2, &Budget::default()).unwrap();
        let tiny = Budget { max_eigen_dim: 10, ..Budget::default() };
        assert!(matches!(graph_spectrum::<f64>(&g, 1e-9, &tiny), Err(Error::TooLarge(_))));
    }
}
