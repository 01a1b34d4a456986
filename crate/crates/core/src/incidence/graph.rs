use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::flats::{enumerate_flats, CountTable, Flat};
use crate::gf::FieldCtx;

/// Graph parameters: field order, ambient dimension and the two flat dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Params {
    pub q: u64,
    pub d: usize,
    pub k: usize,
    pub h: usize,
}

impl Params {
    pub fn new(q: u64, d: usize, k: usize, h: usize) -> Self {
        Params { q, d, k, h }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < self.h && self.h < self.d {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!(
                "need 0 <= k < h < d, got d={} k={} h={}",
                self.d, self.k, self.h
            )))
        }
    }

    pub fn counts(&self) -> Result<CountTable> {
        CountTable::new(self.q, self.d as u64, self.k as u64, self.h as u64)
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q={} d={} k={} h={}", self.q, self.d, self.k, self.h)
    }
}

/// One side of the bipartition: `A` holds the k-flats, `B` the h-flats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    A,
    B,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::A => Part::B,
            Part::B => Part::A,
        }
    }
}

/// Bipartite graph joining each k-flat to every h-flat containing it.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    params: Params,
    part_a: Vec<Flat>,
    part_b: Vec<Flat>,
    adj_a: Vec<Vec<u32>>,
    adj_b: Vec<Vec<u32>>,
}

impl IncidenceGraph {
    /// Enumerate both parts and join every k-flat to the h-flats containing it.
    ///
    /// Edges are generated from the h-side: the k-subflats of an h-flat
    /// `span(T) + b` are the images of the k-flats of F_q^h under the affine
    /// map `c -> c T + b`, which is a bijection onto the h-flat.
    pub fn build(ctx: &FieldCtx, d: usize, k: usize, h: usize, budget: &Budget) -> Result<IncidenceGraph> {
        let params = Params::new(u64::from(ctx.order()), d, k, h);
        params.validate()?;
        let counts = params.counts()?;
        for (name, n) in [("|A|", &counts.n_kflats), ("|B|", &counts.n_hflats)] {
            if n.to_u64().is_none_or(|n| n > budget.max_flats) {
                return Err(Error::TooLarge(format!("{name} = {n} exceeds max_flats = {}", budget.max_flats)));
            }
        }
        let part_a = enumerate_flats(ctx, d, k)?;
        let part_b = enumerate_flats(ctx, d, h)?;
        let index_a: HashMap<&Flat, u32> = part_a.iter().enumerate().map(|(i, f)| (f, i as u32)).collect();
        let local = enumerate_flats(ctx, h, k)?;

        let mut adj_a = vec![Vec::new(); part_a.len()];
        let mut adj_b = Vec::with_capacity(part_b.len());
        for (bi, hf) in part_b.iter().enumerate() {
            let mut nbrs = Vec::with_capacity(local.len());
            for lf in &local {
                let mut dirs = vec![0; k * d];
                for i in 0..k {
                    combine_rows(ctx, lf.basis_row(i), hf, &mut dirs[i * d..(i + 1) * d]);
                }
                let mut base = hf.base().to_vec();
                combine_rows(ctx, lf.base(), hf, &mut base);
                let sub = Flat::from_raw(ctx, d, k, dirs, base)?;
                let ai = *index_a
                    .get(&sub)
                    .ok_or_else(|| Error::Invariant(format!("subflat {sub} missing from enumeration")))?;
                nbrs.push(ai);
                adj_a[ai as usize].push(bi as u32);
            }
            nbrs.sort_unstable();
            adj_b.push(nbrs);
        }
        drop(index_a);
        let g = IncidenceGraph { params, part_a, part_b, adj_a, adj_b };
        g.check_biregular()?;
        Ok(g)
    }

    /// Assemble a graph from explicit parts and A-side adjacency lists.
    pub fn from_adjacency(params: Params, part_a: Vec<Flat>, part_b: Vec<Flat>, adj_a: Vec<Vec<u32>>) -> Result<IncidenceGraph> {
        params.validate()?;
        if adj_a.len() != part_a.len() {
            return Err(Error::DimensionMismatch { expected: part_a.len(), found: adj_a.len() });
        }
        let mut adj_b = vec![Vec::new(); part_b.len()];
        let mut adj_a = adj_a;
        for (ai, nbrs) in adj_a.iter_mut().enumerate() {
            nbrs.sort_unstable();
            for &bi in nbrs.iter() {
                let slot = adj_b
                    .get_mut(bi as usize)
                    .ok_or(Error::BadSubset { index: bi as usize, size: part_b.len() })?;
                slot.push(ai as u32);
            }
        }
        Ok(IncidenceGraph { params, part_a, part_b, adj_a, adj_b })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn part(&self, part: Part) -> &[Flat] {
        match part {
            Part::A => &self.part_a,
            Part::B => &self.part_b,
        }
    }

    pub fn part_a(&self) -> &[Flat] {
        &self.part_a
    }

    pub fn part_b(&self) -> &[Flat] {
        &self.part_b
    }

    pub fn size(&self, part: Part) -> usize {
        self.part(part).len()
    }

    pub fn adjacency(&self, part: Part) -> &[Vec<u32>] {
        match part {
            Part::A => &self.adj_a,
            Part::B => &self.adj_b,
        }
    }

    pub fn neighbors(&self, part: Part, i: usize) -> &[u32] {
        &self.adjacency(part)[i]
    }

    /// Index of `flat` in `part`; parts are stored in canonical sorted order.
    pub fn index_of(&self, part: Part, flat: &Flat) -> Option<usize> {
        self.part(part).binary_search(flat).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj_a.iter().map(Vec::len).sum()
    }

    /// Common degree of `part`, or None if degrees differ.
    pub fn regular_degree(&self, part: Part) -> Option<usize> {
        let adj = self.adjacency(part);
        let first = adj.first().map_or(0, Vec::len);
        adj.iter().all(|n| n.len() == first).then_some(first)
    }

    /// Degrees (deg_A, deg_B) after checking biregularity against y(h,k) and x(h,k).
    pub fn check_biregular(&self) -> Result<(usize, usize)> {
        let counts = self.params.counts()?;
        let expect_a = counts.y_hk.to_usize();
        let expect_b = counts.x_hk.to_usize();
        let deg_a = self.regular_degree(Part::A);
        let deg_b = self.regular_degree(Part::B);
        match (deg_a, deg_b) {
            (Some(a), Some(b)) if Some(a) == expect_a && Some(b) == expect_b => Ok((a, b)),
            _ => Err(Error::Invariant(format!(
                "graph {} is not biregular with degrees (y={}, x={}): found {:?}/{:?}",
                self.params, counts.y_hk, counts.x_hk, deg_a, deg_b
            ))),
        }
    }

    /// Same graph with part B reordered: new index `j` holds old index `perm[j]`.
    pub fn permute_b(&self, perm: &[usize]) -> Result<IncidenceGraph> {
        let n = self.part_b.len();
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(Error::BadSubset { index: old, size: n });
            }
            inverse[old] = new;
        }
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
        }
        let part_b = perm.iter().map(|&o| self.part_b[o].clone()).collect();
        let adj_a = self
            .adj_a
            .iter()
            .map(|nbrs| nbrs.iter().map(|&b| inverse[b as usize] as u32).collect())
            .collect();
        IncidenceGraph::from_adjacency(self.params, self.part_a.clone(), part_b, adj_a)
    }

    /// Drop one edge. Only meant for negative controls in verification runs.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        if let Some(b) = self.adj_a.first_mut().and_then(Vec::pop) {
            self.adj_b[b as usize].retain(|&a| a != 0);
        }
    }

    /// Edge list CSV: header `a_index,b_index`, one edge per line.
    pub fn adjacency_csv(&self) -> String {
        let mut out = String::from("a_index,b_index\n");
        for (a, nbrs) in self.adj_a.iter().enumerate() {
            for b in nbrs {
                let _ = writeln!(out, "{a},{b}");
            }
        }
        out
    }
}

/// `out += coeffs * basis(hf)`, i.e. a linear combination of the h-flat's direction rows.
fn combine_rows(ctx: &FieldCtx, coeffs: &[u32], hf: &Flat, out: &mut [u32]) {
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (o, &t) in out.iter_mut().zip(hf.basis_row(j)) {
            *o = ctx.add(*o, ctx.mul(c, t));
        }
    }
}
