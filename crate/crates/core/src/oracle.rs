//! Brute-force reference computations over explicit point sets.
//!
//! Nothing here row-reduces: flats are compared through their enumerated
//! points and spans are grown by adding every multiple of each generator.

use std::collections::{BTreeSet, HashSet};

use crate::flats::Flat;
use crate::gf::{Elem, FieldCtx};
use crate::incidence::{IncidenceGraph, Part};
use crate::linalg::FqVector;
use crate::sampling::SplitMix64;

fn point_set(ctx: &FieldCtx, f: &Flat) -> BTreeSet<Vec<Elem>> {
    f.points(ctx).into_iter().map(|p| p.0).collect()
}

/// Equality of the underlying point sets.
pub fn same_points(ctx: &FieldCtx, u: &Flat, v: &Flat) -> bool {
    u.ambient_dim() == v.ambient_dim() && point_set(ctx, u) == point_set(ctx, v)
}

/// Every point of `inner` is a point of `outer`.
pub fn contains_by_points(ctx: &FieldCtx, outer: &Flat, inner: &Flat) -> bool {
    let pts: HashSet<Vec<Elem>> = outer.points(ctx).into_iter().map(|p| p.0).collect();
    inner.points(ctx).iter().all(|p| pts.contains(&p.0))
}

/// Size of the linear span of `gens`, built by closing under `s + c g`.
pub fn span_size(ctx: &FieldCtx, d: usize, gens: &[FqVector]) -> usize {
    let mut span: HashSet<Vec<Elem>> = HashSet::from([vec![0; d]]);
    for g in gens {
        if span.contains(&g.0) {
            continue;
        }
        let current: Vec<Vec<Elem>> = span.iter().cloned().collect();
        for s in &current {
            for c in 1..ctx.order() {
                let v: Vec<Elem> = s.iter().zip(&g.0).map(|(&a, &b)| ctx.add(a, ctx.mul(c, b))).collect();
                span.insert(v);
            }
        }
    }
    span.len()
}

/// Dimension of the affine hull of two flats, from the size of the span of
/// all point differences.
pub fn pair_rank_by_hull(ctx: &FieldCtx, v1: &Flat, v2: &Flat) -> usize {
    let mut pts = v1.points(ctx);
    pts.extend(v2.points(ctx));
    let origin = pts[0].clone();
    let diffs: Vec<FqVector> = pts[1..].iter().map(|p| p.sub(ctx, &origin)).collect();
    let size = span_size(ctx, v1.ambient_dim(), &diffs);
    let q = ctx.order() as usize;
    let mut dim = 0;
    let mut n = 1;
    while n < size {
        n *= q;
        dim += 1;
    }
    dim
}

/// Number of vertices adjacent to both `i` and `j` of `part`.
pub fn common_neighbors_by_adjacency(g: &IncidenceGraph, part: Part, i: usize, j: usize) -> u64 {
    let ni: HashSet<u32> = g.neighbors(part, i).iter().copied().collect();
    g.neighbors(part, j).iter().filter(|x| ni.contains(x)).count() as u64
}

/// Another description of `f`: random spanning directions and a random base point.
pub fn random_representation(ctx: &FieldCtx, rng: &mut SplitMix64, f: &Flat) -> Flat {
    let dirs = f.directions();
    let d = f.ambient_dim();
    let q = u64::from(ctx.order());
    let combo = |rng: &mut SplitMix64| {
        dirs.iter().fold(FqVector::zero(d), |acc, v| acc.add(ctx, &v.scale(ctx, rng.below(q) as Elem)))
    };
    let base = combo(rng).add(ctx, &f.base_vector());
    loop {
        let rows: Vec<FqVector> = (0..dirs.len()).map(|_| combo(rng)).collect();
        if let Ok(g) = Flat::from_span(ctx, &rows, &base) {
            return g;
        }
    }
}
