//! Eigenvalues of dense real symmetric matrices.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square matrix, row-major, expected to be symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SymMatrix { n, data }
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(SymMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    fn check_symmetric(&self, tol: T) -> Result<()> {
        let limit = tol * self.max_abs().max(T::one());
        for i in 0..self.n {
            for j in i + 1..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > limit {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EigenMethod {
    /// Householder reduction to tridiagonal form followed by implicit QL.
    #[default]
    Tridiagonal,
    /// Cyclic Jacobi rotations.
    Jacobi,
}

/// All eigenvalues of `m`, sorted in descending order.
pub fn eigen_sym<T: Scalar>(m: &SymMatrix<T>, tol: T) -> Result<Vec<T>> {
    eigen_sym_with(m, tol, EigenMethod::default())
}

pub fn eigen_sym_with<T: Scalar>(m: &SymMatrix<T>, tol: T, method: EigenMethod) -> Result<Vec<T>> {
    m.check_symmetric(tol)?;
    let mut ev = match method {
        EigenMethod::Tridiagonal => {
            let (mut diag, mut off) = tridiagonalize(m);
            tridiagonal_ql(&mut diag, &mut off)?;
            diag
        }
        EigenMethod::Jacobi => jacobi(m, tol)?,
    };
    ev.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    Ok(ev)
}

/// Householder reduction. Returns the diagonal and the subdiagonal
/// (`off[i]` couples rows i-1 and i; `off[0] = 0`).
fn tridiagonalize<T: Scalar>(m: &SymMatrix<T>) -> (Vec<T>, Vec<T>) {
    let n = m.n;
    let mut a = m.data.clone();
    let mut off = vec![T::zero(); n];
    for i in (1..n).rev() {
        let l = i - 1;
        let (row_i, rest) = {
            let (head, tail) = a.split_at_mut(i * n);
            (&mut tail[..n], head)
        };
        if l == 0 {
            off[i] = row_i[0];
            continue;
        }
        let scale = row_i[..=l].iter().fold(T::zero(), |s, &x| s + x.abs());
        if scale == T::zero() {
            off[i] = row_i[l];
            continue;
        }
        let mut h = T::zero();
        for x in row_i[..=l].iter_mut() {
            *x = *x / scale;
            h = h + *x * *x;
        }
        let f = row_i[l];
        let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
        off[i] = scale * g;
        h = h - f * g;
        row_i[l] = f - g;
        // p = A u / h, accumulated into off[0..=l]
        let mut fsum = T::zero();
        for j in 0..=l {
            let row_j = &rest[j * n..j * n + l + 1];
            let g = row_j.iter().zip(&row_i[..=l]).fold(T::zero(), |s, (&x, &y)| s + x * y);
            off[j] = g / h;
            fsum = fsum + off[j] * row_i[j];
        }
        let hh = fsum / (h + h);
        for j in 0..=l {
            off[j] = off[j] - hh * row_i[j];
        }
        // A -= u q^T + q u^T on the leading (l+1) block, both triangles
        for j in 0..=l {
            let (uj, qj) = (row_i[j], off[j]);
            let row_j = &mut rest[j * n..j * n + l + 1];
            for (kk, x) in row_j.iter_mut().enumerate() {
                *x = *x - (uj * off[kk] + qj * row_i[kk]);
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    if let Some(first) = off.first_mut() {
        *first = T::zero();
    }
    (diag, off)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
/// On return `diag` holds the eigenvalues.
fn tridiagonal_ql<T: Scalar>(diag: &mut [T], off: &mut [T]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::one() + T::one();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Invariant("QL iteration did not converge".into()));
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(T::one());
            g = diag[m] - diag[l] + off[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    off[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] = diag[l] - p;
            off[l] = g;
            off[m] = T::zero();
        }
    }
    Ok(())
}

/// Cyclic Jacobi: sweep rotations until the off-diagonal mass is below
/// `tol^2 * ||m||_F^2`.
fn jacobi<T: Scalar>(m: &SymMatrix<T>, tol: T) -> Result<Vec<T>> {
    let n = m.n;
    let mut a = m.data.clone();
    let total = m.frobenius_sq().max(T::min_positive_value());
    let limit = tol * tol * total;
    let two = T::one() + T::one();
    for _sweep in 0..100 {
        let mut offsq = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                offsq = offsq + two * a[i * n + j] * a[i * n + j];
            }
        }
        if offsq <= limit {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Invariant("Jacobi sweeps did not converge".into()))
}
