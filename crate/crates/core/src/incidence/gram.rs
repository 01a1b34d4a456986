use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::flats::{gaussian_binomial_u64, pair_class_degrees};
use crate::gf::FieldCtx;

use super::pairs::stacked_rank;
use super::{IncidenceGraph, Params, Part};

/// Dense symmetric integer matrix `N N^T` (part A) or `N^T N` (part B).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gram {
    n: usize,
    data: Vec<u32>,
}

impl Gram {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    /// Header `c0,c1,...` then one row per line.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = (0..self.n).map(|j| format!("c{j}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Gram matrix of the incidence matrix seen from `part`: entry (i, j) counts
/// the common neighbors of vertices i and j of that part.
pub fn gram_matrix(g: &IncidenceGraph, part: Part, budget: &Budget) -> Result<Gram> {
    let n = g.size(part);
    if (n as u64).saturating_mul(n as u64) > budget.max_gram_entries {
        return Err(Error::TooLarge(format!(
            "{n}x{n} Gram matrix exceeds max_gram_entries = {}",
            budget.max_gram_entries
        )));
    }
    let mut data = vec![0u32; n * n];
    for nbrs in g.adjacency(part.other()) {
        for &i in nbrs {
            let row = &mut data[i as usize * n..(i as usize + 1) * n];
            for &j in nbrs {
                row[j as usize] += 1;
            }
        }
    }
    Ok(Gram { n, data })
}

/// One pair-rank class of the decomposition of `N N^T`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassSummary {
    /// Pair rank; `t = k` is the diagonal.
    pub t: usize,
    pub diagonal: bool,
    /// Predicted common-neighbor count `G(d - t, h - t, q)`.
    pub constant: u64,
    /// Distinct Gram entries seen in this class.
    pub observed: Vec<u64>,
    pub pairs: u64,
    pub exceptions: u64,
    /// Degree of the class graph E_t if it is regular.
    pub degree: Option<u64>,
    /// Exact degree of E_t by counting; 1 on the diagonal.
    pub predicted_degree: u64,
    pub degree_min: u64,
    pub degree_max: u64,
    /// Leading exponent `(t - k)(d - t + k + 1)` of the E_t degree.
    pub leading_exponent: i64,
    /// `degree_max / q^leading_exponent`.
    pub degree_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub params: Params,
    pub classes: Vec<ClassSummary>,
    pub exceptions: u64,
    /// Every vertex has class degrees summing to |A| - 1 off the diagonal.
    pub partition_ok: bool,
    pub pass: bool,
}

#[derive(Default)]
struct ClassAcc {
    observed: Vec<u64>,
    pairs: u64,
    exceptions: u64,
}

/// Check entrywise that `N N^T (i, j)` is determined by the pair rank of
/// flats i and j, with constant `G(d - t, h - t, q)`.
pub fn verify_decomposition(ctx: &FieldCtx, g: &IncidenceGraph, budget: &Budget) -> Result<DecompositionReport> {
    let params = g.params();
    let (d, k, h, q) = (params.d, params.k, params.h, params.q);
    let n = g.size(Part::A);
    if (n as u64).saturating_mul(n as u64) > budget.max_pair_scan {
        return Err(Error::TooLarge(format!("{n}^2 pairs exceed max_pair_scan = {}", budget.max_pair_scan)));
    }
    let n_classes = k + 2;
    let constant = |t: usize| {
        if t > h {
            Ok(0)
        } else {
            gaussian_binomial_u64((d - t) as u64, (h - t) as u64, q)
                .ok_or_else(|| Error::TooLarge("class constant exceeds u64".into()))
        }
    };
    let constants: Vec<u64> = (k..=2 * k + 1).map(constant).collect::<Result<_>>()?;
    let predicted: Vec<u64> = pair_class_degrees(d as u64, k as u64, q)
        .iter()
        .map(|x| x.to_u64().unwrap_or(u64::MAX))
        .collect();
    let mut acc: Vec<ClassAcc> = (0..n_classes).map(|_| ClassAcc::default()).collect();
    // per-vertex number of partners in each off-diagonal class
    let mut class_deg = vec![0u64; n * n_classes];
    let mut row = vec![0u32; n];
    let flats = g.part_a();
    for i in 0..n {
        row.iter_mut().for_each(|x| *x = 0);
        for &b in g.neighbors(Part::A, i) {
            for &j in g.neighbors(Part::B, b as usize) {
                row[j as usize] += 1;
            }
        }
        record(&mut acc[0], constants[0], u64::from(row[i]));
        for j in i + 1..n {
            let t = stacked_rank(ctx, &flats[i], &flats[j]);
            if t <= k || t > 2 * k + 1 {
                return Err(Error::Invariant(format!("pair rank {t} outside {}..={}", k + 1, 2 * k + 1)));
            }
            let c = t - k;
            record(&mut acc[c], constants[c], u64::from(row[j]));
            class_deg[i * n_classes + c] += 1;
            class_deg[j * n_classes + c] += 1;
        }
    }

    let mut partition_ok = true;
    for i in 0..n {
        let s: u64 = class_deg[i * n_classes + 1..(i + 1) * n_classes].iter().sum();
        partition_ok &= s + 1 == n as u64;
    }
    let mut classes = Vec::new();
    for (c, a) in acc.into_iter().enumerate() {
        let t = k + c;
        if c > 0 && a.pairs == 0 {
            continue;
        }
        let (lo, hi) = if c == 0 {
            (0, 0)
        } else {
            (0..n).map(|i| class_deg[i * n_classes + c]).fold((u64::MAX, 0), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let exponent = (t as i64 - k as i64) * (d as i64 - t as i64 + k as i64 + 1);
        let mut observed = a.observed;
        observed.sort_unstable();
        classes.push(ClassSummary {
            t,
            diagonal: c == 0,
            constant: constants[c],
            observed,
            pairs: a.pairs,
            exceptions: a.exceptions,
            degree: (lo == hi).then_some(hi),
            predicted_degree: predicted.get(c).copied().unwrap_or(0),
            degree_min: lo,
            degree_max: hi,
            leading_exponent: exponent,
            degree_ratio: hi as f64 / (q as f64).powi(exponent as i32),
        });
    }
    let exceptions = classes.iter().map(|c| c.exceptions).sum();
    let regular = classes.iter().all(|c| c.diagonal || c.degree == Some(c.predicted_degree));
    Ok(DecompositionReport {
        params,
        classes,
        exceptions,
        partition_ok,
        pass: exceptions == 0 && partition_ok && regular,
    })
}

fn record(acc: &mut ClassAcc, expected: u64, value: u64) {
    acc.pairs += 1;
    if value != expected {
        acc.exceptions += 1;
    }
    if !acc.observed.contains(&value) {
        acc.observed.push(value);
    }
}
