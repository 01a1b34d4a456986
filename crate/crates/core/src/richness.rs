//! Rich vertices: those with at least t neighbors in a given set, and the
//! lower bounds on how many there must be once the set is large enough.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flats::Flat;
use crate::incidence::{IncidenceGraph, Params, Part};
use crate::scalar::Scalar;
use crate::spectral::SpectrumReport;

/// Vertices of the other part with at least `t` neighbors in `s` (a subset of `from`).
pub fn rich_objects(g: &IncidenceGraph, from: Part, s: &[usize], t: usize) -> Result<Vec<usize>> {
    let counts = neighbor_counts(g, from, s)?;
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c as usize >= t)
        .map(|(i, _)| i)
        .collect())
}

/// For every vertex of the other part, the number of its neighbors in `s`.
fn neighbor_counts(g: &IncidenceGraph, from: Part, s: &[usize]) -> Result<Vec<u32>> {
    let size = g.size(from);
    let mut seen = vec![false; size];
    let mut counts = vec![0u32; g.size(from.other())];
    for &v in s {
        if v >= size {
            return Err(Error::BadSubset { index: v, size });
        }
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        for &w in g.neighbors(from, v) {
            counts[w as usize] += 1;
        }
    }
    Ok(counts)
}

/// Which size hypothesis governs applicability of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    /// `|S| >= 2(t-1) |part of S| / deg(other part)`, with exact graph values.
    Exact,
    /// `|S| >= 2(t-1) q^{(d-h)(k+1)}`, the closed form.
    Paper,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RichReport<T> {
    pub params: Params,
    pub t: usize,
    /// Part containing S; the rich vertices are counted in the other part.
    #[serde(rename = "S_part")]
    pub s_part: Part,
    #[serde(rename = "S_size")]
    pub s_size: usize,
    pub hypothesis: Hypothesis,
    /// The governing hypothesis holds; otherwise the check is not applicable.
    pub hypothesis_met: bool,
    /// Exact hypothesis `|S| >= threshold_size`.
    pub hypothesis_met_exact: bool,
    pub threshold_size: u64,
    #[serde(rename = "R_count")]
    pub r_count: usize,
    /// `(t-1) / (t-1 + 2 deg mu^2)` with `mu = lambda3 / lambda1` measured.
    pub c_exact: T,
    /// Closed-form constant for plane-incidence graphs.
    pub c_paper: T,
    pub floor_exact: u64,
    pub floor_paper: u64,
    pub pass_exact: Option<bool>,
    pub pass_paper: Option<bool>,
}

impl<T> RichReport<T> {
    /// Not applicable, or every applicable bound satisfied.
    pub fn ok(&self) -> bool {
        self.pass_exact != Some(false) && (self.hypothesis == Hypothesis::Exact || self.pass_paper != Some(false))
    }
}

/// Closed-form constant and floor as `(c numerator, c denominator, floor)`.
fn paper_constant(p: &Params, s_part: Part, t: usize) -> (BigUint, BigUint, u64) {
    let (d, k, h) = (p.d as u32, p.k as u32, p.h as u32);
    let (c_exp, size_exp) = match s_part {
        // S holds h-flats, rich k-flats are counted
        Part::B => ((d - h - 1) * (h - k) + k, (d - k) * (k + 1)),
        Part::A => (k * (h - k + 1), (d - h) * (h + 1)),
    };
    let q = BigUint::from(p.q);
    let num = BigUint::from(t - 1);
    let den = &num + BigUint::from(2u32) * q.pow(c_exp);
    let floor = (&num * q.pow(size_exp)).div_ceil(&den);
    (num, den, floor.to_u64().unwrap_or(u64::MAX))
}

/// Closed-form size hypothesis `2(t-1) q^{(d-h)(k+1)}`.
pub fn paper_threshold(p: &Params, t: usize) -> BigUint {
    BigUint::from(2 * t.saturating_sub(1)) * BigUint::from(p.q).pow(((p.d - p.h) * (p.k + 1)) as u32)
}

/// Exact size hypothesis `ceil(2(t-1) |part of S| / deg(other part))`.
pub fn exact_threshold(g: &IncidenceGraph, s_part: Part, t: usize) -> u64 {
    let deg_r = g.neighbors(s_part.other(), 0).len() as u64;
    (2 * t.saturating_sub(1) as u64 * g.size(s_part) as u64).div_ceil(deg_r.max(1))
}

fn rich_report<T: Scalar>(
    g: &IncidenceGraph,
    spectrum: &SpectrumReport<T>,
    s_part: Part,
    s: &[usize],
    t: usize,
    hypothesis: Hypothesis,
) -> Result<RichReport<T>> {
    if t == 0 {
        return Err(Error::InvalidParameters("richness threshold t must be at least 1".into()));
    }
    let params = g.params();
    let counts = neighbor_counts(g, s_part, s)?;
    let s_size = {
        let mut v = s.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    let r_count = counts.iter().filter(|&&c| c as usize >= t).count();
    let r_part = s_part.other();
    let deg_r = match r_part {
        Part::A => spectrum.deg_a,
        Part::B => spectrum.deg_b,
    } as u64;
    let size_s = g.size(s_part) as u64;
    let size_r = g.size(r_part) as u64;
    let tm1 = (t - 1) as u64;

    let threshold_size = (2 * tm1 * size_s).div_ceil(deg_r);
    let hypothesis_met_exact = s_size as u64 >= threshold_size;
    let hypothesis_met_paper = BigUint::from(s_size) >= paper_threshold(&params, t);

    let mu_sq = (spectrum.lambda3 * spectrum.lambda3) / (spectrum.lambda1 * spectrum.lambda1);
    let tm1_t = T::of_u64(tm1);
    let c_exact = tm1_t / (tm1_t + T::of(2.0) * T::of_u64(deg_r) * mu_sq);
    let raw = c_exact * T::of_u64(size_r);
    let floor_exact = (raw - spectrum.tol * raw.max(T::one())).ceil().max(T::zero()).to_u64().unwrap_or(u64::MAX);

    let (c_num, c_den, floor_paper) = paper_constant(&params, s_part, t);
    let c_paper = T::of(c_num.to_f64().unwrap() / c_den.to_f64().unwrap());

    let hypothesis_met = match hypothesis {
        Hypothesis::Exact => hypothesis_met_exact,
        Hypothesis::Paper => hypothesis_met_paper,
    };
    let r = r_count as u64;
    Ok(RichReport {
        params,
        t,
        s_part,
        s_size,
        hypothesis,
        hypothesis_met,
        hypothesis_met_exact,
        threshold_size,
        r_count,
        c_exact,
        c_paper,
        floor_exact,
        floor_paper,
        pass_exact: (hypothesis_met && hypothesis_met_exact).then_some(r >= floor_exact),
        pass_paper: (hypothesis_met && hypothesis_met_paper).then_some(r >= floor_paper),
    })
}

/// Lower bound on `|R_t(S)|` from the measured spectrum, for S in either part.
pub fn lund_saraf_check<T: Scalar>(
    g: &IncidenceGraph,
    spectrum: &SpectrumReport<T>,
    s_part: Part,
    s: &[usize],
    t: usize,
) -> Result<RichReport<T>> {
    rich_report(g, spectrum, s_part, s, t, Hypothesis::Exact)
}

/// k-flats lying in at least t of the given h-flats (indices into part B).
pub fn thm2_check<T: Scalar>(g: &IncidenceGraph, spectrum: &SpectrumReport<T>, h_set: &[usize], t: usize) -> Result<RichReport<T>> {
    rich_report(g, spectrum, Part::B, h_set, t, Hypothesis::Paper)
}

/// h-flats containing at least t of the given k-flats (indices into part A).
pub fn thm3_check<T: Scalar>(g: &IncidenceGraph, spectrum: &SpectrumReport<T>, k_set: &[usize], t: usize) -> Result<RichReport<T>> {
    rich_report(g, spectrum, Part::A, k_set, t, Hypothesis::Paper)
}

/// Map explicit flats to their indices in `part`.
pub fn indices_of(g: &IncidenceGraph, part: Part, flats: &[Flat]) -> Result<Vec<usize>> {
    flats
        .iter()
        .map(|f| {
            g.index_of(part, f)
                .ok_or_else(|| Error::ParameterMismatch(format!("{f} is not a vertex of part {part:?} of {}", g.params())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::gf::FieldCtx;
    use crate::spectral::{graph_spectrum, DEFAULT_TOL};

    fn setup(q: u64, d: usize, k: usize, h: usize) -> (IncidenceGraph, SpectrumReport<f64>) {
        let ctx = FieldCtx::new(q).unwrap();
        let g = IncidenceGraph::build(&ctx, d, k, h, &Budget::default()).unwrap();
        let s = graph_spectrum(&g, DEFAULT_TOL, &Budget::default()).unwrap();
        (g, s)
    }

    #[test]
    fn rich_object_examples() {
        let (g, _) = setup(3, 2, 0, 1);
        let all_lines: Vec<usize> = (0..12).collect();
        assert_eq!(rich_objects(&g, Part::B, &all_lines, 1).unwrap(), (0..9).collect::<Vec<_>>());
        let through_p: Vec<usize> = g.neighbors(Part::A, 4).iter().map(|&b| b as usize).collect();
        assert_eq!(through_p.len(), 4);
        assert_eq!(rich_objects(&g, Part::B, &through_p, 2).unwrap(), vec![4]);
        assert!(rich_objects(&g, Part::B, &all_lines, 5).unwrap().is_empty());
        assert_eq!(rich_objects(&g, Part::B, &[12], 1).unwrap_err(), Error::BadSubset { index: 12, size: 12 });
    }

    #[test]
    fn point_line_constants() {
        let (g, s) = setup(3, 2, 0, 1);
        let lines = [0, 2, 4, 6, 8, 10];
        let r = lund_saraf_check(&g, &s, Part::B, &lines, 2).unwrap();
        assert_eq!(r.threshold_size, 6);
        assert!(r.hypothesis_met);
        assert!((r.c_exact - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.floor_exact, 3);
        assert!((r.c_paper - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.floor_paper, 3);
        assert_eq!(r.pass_exact, Some(r.r_count >= 3));
        assert_eq!(r.pass_exact, Some(true));

        let r = thm2_check(&g, &s, &lines, 2).unwrap();
        assert_eq!(r.hypothesis, Hypothesis::Paper);
        assert_eq!(r.pass_paper, Some(true));

        let all: Vec<usize> = (0..12).collect();
        let r = lund_saraf_check(&g, &s, Part::B, &all, 2).unwrap();
        assert_eq!(r.r_count, 9);

        let r = lund_saraf_check(&g, &s, Part::B, &[0, 1], 2).unwrap();
        assert!(!r.hypothesis_met);
        assert_eq!((r.pass_exact, r.pass_paper), (None, None));
        assert!(r.ok());
    }

    #[test]
    fn points_rich_lines() {
        let (g, s) = setup(3, 2, 0, 1);
        let pts = [0, 1, 3, 5, 7, 8];
        let r = thm3_check(&g, &s, &pts, 2).unwrap();
        assert!(r.hypothesis_met);
        assert!((r.c_paper - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.floor_paper, 3);
        // c_exact = 1 / (1 + 2 * 3 * 3/12)
        assert!((r.c_exact - 0.4).abs() < 1e-12);
        assert_eq!(r.floor_exact, 5);
        // six points span at least C(6,2)/C(3,2) = 5 lines with two of them
        assert!(r.r_count >= 5);
        assert_eq!(r.pass_exact, Some(true));
        let all: Vec<usize> = (0..9).collect();
        let r = thm3_check(&g, &s, &all, 3).unwrap();
        assert_eq!(r.r_count, 12);
    }

    #[test]
    fn lines_in_hyperplanes_of_f3_4() {
        let (g, s) = setup(3, 4, 1, 3);
        let h_set: Vec<usize> = (0..18).map(|i| i * 6).collect();
        let r = thm2_check(&g, &s, &h_set, 2).unwrap();
        assert!(r.hypothesis_met);
        assert!((r.c_paper - 1.0 / 7.0).abs() < 1e-12);
        assert_eq!(r.floor_paper, 729u64.div_ceil(7));
        // exact threshold ceil(2 * 120 / 13) = 19 exceeds 18
        assert_eq!(r.threshold_size, 19);
        assert_eq!(r.pass_exact, None);
    }

    #[test]
    fn monotone_in_t_and_s() {
        let (g, _) = setup(3, 3, 0, 2);
        let s_small: Vec<usize> = (0..39).step_by(3).collect();
        let s_big: Vec<usize> = (0..39).step_by(2).chain((0..39).step_by(3)).collect();
        for t in 2..5 {
            let r_t = rich_objects(&g, Part::B, &s_small, t).unwrap();
            let r_prev = rich_objects(&g, Part::B, &s_small, t - 1).unwrap();
            assert!(r_t.iter().all(|x| r_prev.contains(x)));
            let r_big = rich_objects(&g, Part::B, &s_big, t).unwrap();
            assert!(r_t.iter().all(|x| r_big.contains(x)));
        }
        let counts = neighbor_counts(&g, Part::B, &s_small).unwrap();
        let total: u32 = counts.iter().sum();
        assert_eq!(total as usize, s_small.len() * 9);
    }

    #[test]
    fn rejects_zero_threshold() {
        let (g, s) = setup(3, 2, 0, 1);
        assert!(matches!(lund_saraf_check(&g, &s, Part::B, &[0], 0), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn flat_lookup() {
        let (g, _) = setup(3, 2, 0, 1);
        let idx = indices_of(&g, Part::B, &g.part_b()[3..6]).unwrap();
        assert_eq!(idx, vec![3, 4, 5]);
        assert!(indices_of(&g, Part::A, &g.part_b()[..1]).is_err());
    }
}
