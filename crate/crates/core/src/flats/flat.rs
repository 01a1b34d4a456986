use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{reduce_against, rref_in_place, FqVector};

/// An affine k-flat `span{v_1..v_k} + v_{k+1}` in canonical form.
///
/// The direction space is stored as a k x d matrix in reduced row echelon
/// form and the base point is reduced so that it vanishes at every pivot
/// column. Two flats are equal as point sets iff these fields are equal, so
/// the derived `Eq`/`Hash` are point-set equality. The derived `Ord` is the
/// enumeration order: pivots, then basis entries, then base entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    q: u32,
    d: usize,
    k: usize,
    pivots: Vec<usize>,
    basis: Vec<Elem>,
    base: Vec<Elem>,
}

impl Flat {
    /// Canonical flat through `base` with direction space spanned by `directions`.
    pub fn from_span(ctx: &FieldCtx, directions: &[FqVector], base: &FqVector) -> Result<Flat> {
        let d = base.dim();
        let k = directions.len();
        if k >= d {
            return Err(Error::InvalidDimension { d, k });
        }
        let mut data = Vec::with_capacity(k * d);
        for v in directions {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
            }
            data.extend_from_slice(&v.0);
        }
        Self::from_raw(ctx, d, k, data, base.0.clone())
    }

    /// A single point, the k = 0 flat.
    pub fn point(ctx: &FieldCtx, x: &FqVector) -> Result<Flat> {
        Self::from_span(ctx, &[], x)
    }

    /// Canonicalize raw row-major direction data and a base point.
    pub(crate) fn from_raw(ctx: &FieldCtx, d: usize, k: usize, mut basis: Vec<Elem>, mut base: Vec<Elem>) -> Result<Flat> {
        let pivots = rref_in_place(ctx, &mut basis, k, d);
        if pivots.len() != k {
            return Err(Error::DegenerateSpan { rank: pivots.len(), expected: k });
        }
        reduce_against(ctx, &basis, &pivots, d, &mut base);
        Ok(Flat { q: ctx.order(), d, k, pivots, basis, base })
    }

    /// Assemble from parts already in canonical form.
    pub(crate) fn from_canonical(q: u32, d: usize, pivots: Vec<usize>, basis: Vec<Elem>, base: Vec<Elem>) -> Flat {
        debug_assert_eq!(basis.len(), pivots.len() * d);
        debug_assert!(pivots.iter().all(|&p| base[p] == 0));
        Flat { q, d, k: pivots.len(), pivots, basis, base }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row-major k x d direction basis in RREF.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn basis_row(&self, i: usize) -> &[Elem] {
        &self.basis[i * self.d..(i + 1) * self.d]
    }

    pub fn directions(&self) -> Vec<FqVector> {
        (0..self.k).map(|i| FqVector(self.basis_row(i).to_vec())).collect()
    }

    pub fn base(&self) -> &[Elem] {
        &self.base
    }

    pub fn base_vector(&self) -> FqVector {
        FqVector(self.base.clone())
    }

    fn check_field(&self, ctx: &FieldCtx) -> Result<()> {
        if ctx.order() != self.q {
            return Err(Error::ParameterMismatch(format!(
                "flat over GF({}) used with GF({})",
                self.q,
                ctx.order()
            )));
        }
        Ok(())
    }

    /// Whether the direction-space reduction of `x` vanishes.
    fn direction_contains(&self, ctx: &FieldCtx, x: &mut [Elem]) -> bool {
        reduce_against(ctx, &self.basis, &self.pivots, self.d, x);
        x.iter().all(|&c| c == 0)
    }

    pub fn contains_point(&self, ctx: &FieldCtx, x: &FqVector) -> Result<bool> {
        self.check_field(ctx)?;
        if x.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.dim() });
        }
        let mut diff: Vec<Elem> = x.0.iter().zip(&self.base).map(|(&a, &b)| ctx.sub(a, b)).collect();
        Ok(self.direction_contains(ctx, &mut diff))
    }

    /// Whether `inner` is a subset of `self`: every direction row of `inner` and
    /// the difference of base points lie in the direction space of `self`.
    pub fn contains_flat(&self, ctx: &FieldCtx, inner: &Flat) -> Result<bool> {
        self.check_field(ctx)?;
        if inner.q != self.q || inner.d != self.d || inner.k > self.k {
            return Err(Error::ParameterMismatch(format!(
                "cannot test containment of a {}-flat in F_{}^{} inside a {}-flat in F_{}^{}",
                inner.k, inner.q, inner.d, self.k, self.q, self.d
            )));
        }
        let mut diff: Vec<Elem> = inner.base.iter().zip(&self.base).map(|(&a, &b)| ctx.sub(a, b)).collect();
        if !self.direction_contains(ctx, &mut diff) {
            return Ok(false);
        }
        for i in 0..inner.k {
            let mut row = inner.basis_row(i).to_vec();
            if !self.direction_contains(ctx, &mut row) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All q^k points, in lexicographic order of their coefficient tuples.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<FqVector> {
        let q = u64::from(self.q);
        let total = q.pow(self.k as u32);
        (0..total)
            .map(|code| {
                let mut x = self.base.clone();
                let mut c = code;
                for i in (0..self.k).rev() {
                    let coef = (c % q) as Elem;
                    c /= q;
                    if coef == 0 {
                        continue;
                    }
                    for (xj, &bj) in x.iter_mut().zip(self.basis_row(i)) {
                        *xj = ctx.add(*xj, ctx.mul(coef, bj));
                    }
                }
                FqVector(x)
            })
            .collect()
    }

    /// Parse the one-line text form `q d k | row; row | base` and canonicalize.
    pub fn parse(ctx: &FieldCtx, line: &str) -> Result<Flat> {
        let bad = |msg: &str| Error::Parse(format!("{msg}: {line:?}"));
        let sections: Vec<&str> = line.split('|').map(str::trim).collect();
        let [head, rows, base] = sections[..] else {
            return Err(bad("expected three '|'-separated sections"));
        };
        let nums = |s: &str| -> Result<Vec<u64>> {
            s.split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| bad("non-integer field")))
                .collect()
        };
        let head = nums(head)?;
        let [q, d, k] = head[..] else {
            return Err(bad("header must be `q d k`"));
        };
        if q != u64::from(ctx.order()) {
            return Err(Error::ParameterMismatch(format!("line is over GF({q}), context is GF({})", ctx.order())));
        }
        let (d, k) = (d as usize, k as usize);
        let to_vec = |vals: Vec<u64>| -> Result<FqVector> {
            if vals.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: vals.len() });
            }
            if vals.iter().any(|&v| v >= q) {
                return Err(bad("coordinate out of range"));
            }
            Ok(FqVector(vals.into_iter().map(|v| v as Elem).collect()))
        };
        let dirs = if rows.is_empty() {
            Vec::new()
        } else {
            rows.split(';').map(|r| to_vec(nums(r)?)).collect::<Result<Vec<_>>>()?
        };
        if dirs.len() != k {
            return Err(bad("number of basis rows differs from k"));
        }
        Flat::from_span(ctx, &dirs, &to_vec(nums(base)?)?)
    }
}

fn join(vals: &[Elem]) -> String {
    vals.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} |", self.q, self.d, self.k)?;
        if self.k > 0 {
            let rows: Vec<String> = (0..self.k).map(|i| join(self.basis_row(i))).collect();
            write!(f, " {}", rows.join("; "))?;
        }
        write!(f, " | {}", join(&self.base))
    }
}

/// Point-set equality of two flats with matching parameters.
pub fn flat_eq(u: &Flat, v: &Flat) -> Result<bool> {
    if (u.q, u.d, u.k) != (v.q, v.d, v.k) {
        return Err(Error::ParameterMismatch(format!(
            "comparing a {}-flat in F_{}^{} with a {}-flat in F_{}^{}",
            u.k, u.q, u.d, v.k, v.q, v.d
        )));
    }
    Ok(u == v)
}
