use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

fn pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Number of k-dimensional linear subspaces of F_q^n:
/// `prod_{i<k} (q^n - q^i) / (q^k - q^i)`. Zero when k > n.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pow(q, n) - pow(q, i);
        den *= pow(q, k) - pow(q, i);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

pub fn gaussian_binomial_u64(n: u64, k: u64, q: u64) -> Option<u64> {
    gaussian_binomial(n, k, q).to_u64()
}

/// x(h,k): number of k-flats inside a fixed h-flat, `q^{h-k} G(h,k,q)`.
pub fn count_x(h: u64, k: u64, q: u64) -> BigUint {
    if k > h {
        return BigUint::zero();
    }
    pow(q, h - k) * gaussian_binomial(h, k, q)
}

/// Number of k-flats W with `dim aff(V, W) = t` for a fixed k-flat V of F_q^d,
/// for `t = k ..= min(d, 2k+1)`. Inverts
/// `q^{t-k} G(t,k) = sum_{s=k}^{t} G(t-k, s-k) f(s)` over the flats between V and a t-flat.
pub fn pair_class_degrees(d: u64, k: u64, q: u64) -> Vec<BigUint> {
    let top = d.min(2 * k + 1);
    let mut f: Vec<BigUint> = Vec::new();
    for t in k..=top {
        let mut v = count_x(t, k, q);
        for (s, fs) in (k..t).zip(&f) {
            v -= gaussian_binomial(t - k, s - k, q) * fs;
        }
        f.push(v);
    }
    (k..=top).zip(f).map(|(t, ft)| gaussian_binomial(d - k, t - k, q) * ft).collect()
}

/// y(h,k): number of h-flats of F_q^d containing a fixed k-flat,
/// `prod_{i=k}^{h-1} (q^{d-i} - 1) / (q^{h-i} - 1)`.
pub fn count_y(d: u64, h: u64, k: u64, q: u64) -> BigUint {
    if k > h || h > d {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in k..h {
        num *= pow(q, d - i) - 1u32;
        den *= pow(q, h - i) - 1u32;
    }
    num / den
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Exact sizes and degrees of the k-flat / h-flat incidence structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub q: u64,
    pub d: u64,
    pub k: u64,
    pub h: u64,
    #[serde(serialize_with = "ser_big")]
    pub n_kflats: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub n_hflats: BigUint,
    /// Degree of every h-flat.
    #[serde(serialize_with = "ser_big")]
    pub x_hk: BigUint,
    /// Degree of every k-flat.
    #[serde(serialize_with = "ser_big")]
    pub y_hk: BigUint,
}

impl CountTable {
    pub fn new(q: u64, d: u64, k: u64, h: u64) -> Result<CountTable> {
        if !(k < h && h < d) {
            return Err(Error::InvalidParameters(format!("need 0 <= k < h < d, got d={d} k={k} h={h}")));
        }
        Ok(CountTable {
            q,
            d,
            k,
            h,
            n_kflats: count_x(d, k, q),
            n_hflats: count_x(d, h, q),
            x_hk: count_x(h, k, q),
            y_hk: count_y(d, h, k, q),
        })
    }

    pub fn edges(&self) -> BigUint {
        &self.n_kflats * &self.y_hk
    }

    /// `|A| y = |B| x`.
    pub fn double_count_ok(&self) -> bool {
        &self.n_kflats * &self.y_hk == &self.n_hflats * &self.x_hk
    }
}
