use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

use super::Flat;

/// Advance `digits` as a base-`q` odometer, last position fastest.
/// Returns false after the last assignment.
fn odometer_step(digits: &mut [Elem], q: u32) -> bool {
    for x in digits.iter_mut().rev() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}

/// Advance a k-combination of 0..n in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Visit every k-dimensional linear subspace of F_q^d as `(pivots, rref_basis)`,
/// ordered by pivot set and then lexicographically by the basis entries.
fn for_each_subspace(ctx: &FieldCtx, d: usize, k: usize, mut f: impl FnMut(&[usize], &[Elem])) {
    let q = ctx.order();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: row i, column j > pivot_i that is not itself a pivot column
        let free: Vec<usize> = (0..k)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..d).filter(move |j| !pivots.contains(j)).map(move |j| i * d + j)
            })
            .collect();
        let mut basis = vec![0; k * d];
        for (i, &p) in pivots.iter().enumerate() {
            basis[i * d + p] = 1;
        }
        let mut vals = vec![0; free.len()];
        loop {
            for (&slot, &v) in free.iter().zip(&vals) {
                basis[slot] = v;
            }
            f(&pivots, &basis);
            if !odometer_step(&mut vals, q) {
                break;
            }
        }
        if !next_combination(&mut pivots, d) {
            break;
        }
    }
}

pub fn enumerate_subspaces(ctx: &FieldCtx, d: usize, k: usize) -> Vec<(Vec<usize>, Vec<Elem>)> {
    let mut out = Vec::new();
    for_each_subspace(ctx, d, k, |p, b| out.push((p.to_vec(), b.to_vec())));
    out
}

/// Stream every k-flat of F_q^d in canonical order.
pub fn for_each_flat(ctx: &FieldCtx, d: usize, k: usize, mut f: impl FnMut(Flat)) -> Result<()> {
    if k >= d {
        return Err(Error::InvalidDimension { d, k });
    }
    let q = ctx.order();
    for_each_subspace(ctx, d, k, |pivots, basis| {
        let free: Vec<usize> = (0..d).filter(|j| !pivots.contains(j)).collect();
        let mut vals = vec![0; free.len()];
        loop {
            let mut base = vec![0; d];
            for (&j, &v) in free.iter().zip(&vals) {
                base[j] = v;
            }
            f(Flat::from_canonical(q, d, pivots.to_vec(), basis.to_vec(), base));
            if !odometer_step(&mut vals, q) {
                break;
            }
        }
    });
    Ok(())
}

/// Every k-flat of F_q^d exactly once, in canonical (sorted) order.
pub fn enumerate_flats(ctx: &FieldCtx, d: usize, k: usize) -> Result<Vec<Flat>> {
    let mut out = Vec::new();
    for_each_flat(ctx, d, k, |f| out.push(f))?;
    Ok(out)
}
