//! Dense vectors and matrices over GF(q): row reduction, rank and span membership.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

/// Coordinate vector in F_q^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqVector(pub Vec<Elem>);

impl FqVector {
    pub fn zero(d: usize) -> Self {
        FqVector(vec![0; d])
    }

    /// Standard basis vector e_i.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        FqVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &FqVector) -> FqVector {
        FqVector(self.0.iter().zip(&other.0).map(|(&a, &b)| ctx.add(a, b)).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &FqVector) -> FqVector {
        FqVector(self.0.iter().zip(&other.0).map(|(&a, &b)| ctx.sub(a, b)).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> FqVector {
        FqVector(self.0.iter().map(|&a| ctx.mul(c, a)).collect())
    }
}

impl From<Vec<Elem>> for FqVector {
    fn from(v: Vec<Elem>) -> Self {
        FqVector(v)
    }
}

/// Row-major dense matrix over GF(q).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[FqVector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.dim() });
            }
            data.extend_from_slice(&r.0);
        }
        Ok(FqMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FqMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<FqVector> {
        (0..self.rows).map(|r| FqVector(self.row(r).to_vec())).collect()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Elem> {
        self.data
    }
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// In-place reduced row echelon form of a row-major `rows x cols` block.
/// Pivot rows end up first; returns the pivot columns.
pub(crate) fn rref_in_place(ctx: &FieldCtx, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ctx.inv(data[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            data[r * cols + j] = ctx.mul(inv, data[r * cols + j]);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c];
            if f == 0 {
                continue;
            }
            let nf = ctx.neg(f);
            for j in c..cols {
                let v = ctx.mul(nf, data[r * cols + j]);
                data[i * cols + j] = ctx.add(data[i * cols + j], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Subtract multiples of RREF rows from `x` so that `x` vanishes at every pivot column.
/// The remainder is zero exactly when `x` lies in the row space.
pub(crate) fn reduce_against(ctx: &FieldCtx, basis: &[Elem], pivots: &[usize], cols: usize, x: &mut [Elem]) {
    for (i, &p) in pivots.iter().enumerate() {
        let f = x[p];
        if f == 0 {
            continue;
        }
        let nf = ctx.neg(f);
        let row = &basis[i * cols..(i + 1) * cols];
        for j in p..cols {
            x[j] = ctx.add(x[j], ctx.mul(nf, row[j]));
        }
    }
}

pub fn rref(ctx: &FieldCtx, m: &FqMatrix) -> Rref {
    let mut data = m.data.clone();
    let pivots = rref_in_place(ctx, &mut data, m.rows, m.cols);
    Rref {
        rank: pivots.len(),
        matrix: FqMatrix { rows: m.rows, cols: m.cols, data },
        pivots,
    }
}

fn common_dim(vectors: &[FqVector]) -> Result<Option<usize>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    let d = first.dim();
    match vectors.iter().find(|v| v.dim() != d) {
        Some(v) => Err(Error::DimensionMismatch { expected: d, found: v.dim() }),
        None => Ok(Some(d)),
    }
}

pub fn rank_of(ctx: &FieldCtx, vectors: &[FqVector]) -> Result<usize> {
    let Some(d) = common_dim(vectors)? else {
        return Ok(0);
    };
    let m = FqMatrix::from_rows(d, vectors)?;
    Ok(rref(ctx, &m).rank)
}

/// Whether `x` is a linear combination of `vectors` (the empty span is {0}).
pub fn in_span(ctx: &FieldCtx, vectors: &[FqVector], x: &FqVector) -> Result<bool> {
    let Some(d) = common_dim(vectors)? else {
        return Ok(x.is_zero());
    };
    if x.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
    }
    let r = rref(ctx, &FqMatrix::from_rows(d, vectors)?);
    let mut rem = x.0.clone();
    reduce_against(ctx, &r.matrix.data, &r.pivots, d, &mut rem);
    Ok(rem.iter().all(|&c| c == 0))
}
