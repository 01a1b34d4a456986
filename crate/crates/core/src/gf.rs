//! Arithmetic in GF(q) for prime powers q = p^e.
//!
//! Elements are encoded as integers `0..q` whose base-p digits are the
//! coefficients of a polynomial of degree < e, reduced modulo a fixed monic
//! irreducible polynomial. For prime q this is plain modular arithmetic.

use crate::error::{Error, Result};

/// Field element in the base-p digit encoding.
pub type Elem = u32;

/// Largest order for which full operation tables are precomputed.
const TABLE_LIMIT: u32 = 1024;

/// Arithmetic context for GF(q).
#[derive(Clone)]
pub struct FieldCtx {
    q: u32,
    p: u32,
    e: u32,
    /// Coefficients c_0..c_{e-1} of the monic modulus x^e + c_{e-1}x^{e-1} + ... + c_0.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

#[derive(Clone)]
struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldCtx {
    /// Field of order `q`; odd characteristic only.
    pub fn new(q: u64) -> Result<Self> {
        Self::with_options(q, false)
    }

    /// Field of order `q`, optionally admitting characteristic 2.
    pub fn with_options(q: u64, allow_even: bool) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::OrderNotPrimePower(q))?;
        if p == 2 && !allow_even {
            return Err(Error::EvenCharacteristic(q));
        }
        if q > u64::from(u32::MAX) {
            return Err(Error::TooLarge(format!("field order {q}")));
        }
        let (q, p) = (q as u32, p as u32);
        let modulus = if e == 1 {
            vec![0]
        } else {
            smallest_irreducible(p, e as usize)
        };
        let mut ctx = FieldCtx {
            q,
            p,
            e,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as Elem, b as Elem);
                mul[a * q + b] = self.mul_slow(a as Elem, b as Elem);
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem;
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Non-leading coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    fn digits(&self, mut a: Elem) -> Vec<u32> {
        let mut out = vec![0; self.e as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return ((u64::from(a) + u64::from(b)) % u64::from(self.p)) as Elem;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack_digits(&sum)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = u64::from(self.p);
        if self.e == 1 {
            return ((u64::from(a) * u64::from(b)) % p) as Elem;
        }
        let e = self.e as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        // x^e = -(c_{e-1} x^{e-1} + ... + c_0)
        for deg in (e..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = deg - e + i;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.pack_digits(&digits)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => {
                let d: Vec<u32> = self
                    .digits(a)
                    .iter()
                    .map(|&x| (self.p - x) % self.p)
                    .collect();
                self.pack_digits(&d)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => t.inv[a as usize],
            None => self.pow(a, u64::from(self.q) - 2),
        })
    }
}

/// Polynomial remainder of `num` by monic `den` over GF(p); coefficients lowest first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + (p - lead) * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomials of degree `deg`, full coefficient lists lowest first.
fn monic_polys(p: u32, deg: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg as u32);
    (0..count).map(move |mut code| {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push((code % p as u64) as u32);
            code /= p as u64;
        }
        coeffs.push(1);
        coeffs
    })
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    (1..=deg / 2).all(|fd| monic_polys(p, fd).all(|f| poly_rem(poly, &f, p).iter().any(|&c| c != 0)))
}

/// Monic irreducible of degree `e` with the smallest encoding sum c_i p^i.
fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    monic_polys(p, e)
        .find(|f| is_irreducible(f, p))
        .map(|mut f| {
            f.pop();
            f
        })
        .expect("irreducible polynomials exist in every degree")
}
