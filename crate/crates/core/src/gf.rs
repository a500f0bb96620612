//! Arithmetic in F_p and F_{p^m}.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// Fields up to this size get full addition/multiplication tables.
const TABLE_LIMIT: u32 = 1024;

/// An element of F_{p^m}. The payload packs the coordinate vector
/// (c_0, .., c_{m-1}) over the power basis of the generator as Σ c_i p^i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Packed integer form; equals the value itself in a prime field.
    pub fn raw(self) -> u32 {
        self.0
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    pw: Vec<u32>,
    tables: Option<Tables>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Builds F_{p^m}. Without a modulus the lexicographically smallest monic
    /// irreducible of degree m is used (tuples compared from the constant term up).
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::DegreeMismatch("m must be at least 1".into()));
        }
        if p >= 1 << 31 {
            return Err(Error::TooLarge(format!("p = {p}")));
        }
        let p = p as u32;
        let q = (p as u64).checked_pow(m).filter(|&q| q < 1 << 31);
        let Some(q) = q else {
            return Err(Error::TooLarge(format!("{p}^{m}")));
        };
        let q = q as u32;
        let modulus = match modulus {
            Some(md) => {
                let mut md: Vec<u32> = md.to_vec();
                while md.len() > 1 && *md.last().unwrap() == 0 {
                    md.pop();
                }
                if md.len() != m as usize + 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "modulus has degree {}, expected {m}",
                        md.len() as i64 - 1
                    )));
                }
                if md.iter().any(|&c| c >= p) || md[m as usize] != 1 {
                    return Err(Error::DegreeMismatch(
                        "modulus must be monic over F_p".into(),
                    ));
                }
                if m > 1 && !Self::irreducible_over_prime(p, &md) {
                    return Err(Error::ReducibleModulus(p));
                }
                md
            }
            None if m == 1 => vec![0, 1],
            None => Self::smallest_irreducible(p, m),
        };
        let mut pw = Vec::with_capacity(m as usize);
        let mut acc = 1u32;
        for _ in 0..m {
            pw.push(acc);
            acc = acc.wrapping_mul(p);
        }
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            pw,
            tables: None,
        };
        if m > 1 && q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(Arc::new(ctx))
    }

    pub fn prime(p: u64) -> Result<Arc<FieldCtx>> {
        Self::new(p, 1, None)
    }

    fn irreducible_over_prime(p: u32, md: &[u32]) -> bool {
        let fp = FieldCtx::prime(p as u64).expect("p already checked");
        let f = Poly::from_coeffs(md.iter().map(|&c| FieldElem(c)).collect());
        poly::is_irreducible(&fp, &f)
    }

    fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
        // Odometer over (c_0, .., c_{m-1}) with c_0 most significant.
        let mut tail = vec![0u32; m as usize];
        loop {
            let mut md = tail.clone();
            md.push(1);
            if md[0] != 0 && Self::irreducible_over_prime(p, &md) {
                return md;
            }
            let mut i = m as usize;
            loop {
                i -= 1;
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                assert!(i > 0, "an irreducible of every degree exists");
            }
        }
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        let mut neg = vec![0u32; q];
        let mut inv = vec![0u32; q];
        for a in 0..q {
            neg[a] = self.neg_slow(a as u32);
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as u32, b as u32);
                mul[a * q + b] = self.mul_slow(a as u32, b as u32);
            }
        }
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Field size p^m.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Monic modulus over F_p, little-endian, length m+1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }
    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(self.p as i64) as u32)
    }

    /// The generator of F_{p^m} over F_p (equal to 0 when m = 1, modulus x).
    pub fn generator(&self) -> FieldElem {
        if self.m == 1 {
            FieldElem((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElem(self.p)
        }
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem> {
        if c.len() > self.m as usize {
            return Err(Error::DegreeMismatch(format!(
                "{} coordinates for a degree-{} field",
                c.len(),
                self.m
            )));
        }
        let mut v = 0u32;
        for (i, &ci) in c.iter().enumerate() {
            if ci >= self.p {
                return Err(Error::RangeError(format!(
                    "coordinate {ci} not in [0, {})",
                    self.p
                )));
            }
            v += ci * self.pw[i];
        }
        Ok(FieldElem(v))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.m)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.q
    }

    /// Position of `a` in the canonical order (coordinate tuples compared from c_0).
    pub fn rank(&self, a: FieldElem) -> u32 {
        let mut r = 0u32;
        for c in self.coeffs(a) {
            r = r * self.p + c;
        }
        r
    }

    pub fn from_rank(&self, mut r: u32) -> FieldElem {
        let mut v = 0u32;
        for i in (0..self.m as usize).rev() {
            v += (r % self.p) * self.pw[i];
            r /= self.p;
        }
        FieldElem(v)
    }

    /// Canonical element order used for all sorting.
    pub fn cmp(&self, a: FieldElem, b: FieldElem) -> Ordering {
        if self.m == 1 {
            a.0.cmp(&b.0)
        } else {
            self.rank(a).cmp(&self.rank(b))
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |r| self.from_rank(r))
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut v = 0;
        for i in 0..self.m as usize {
            v += ((a % self.p + b % self.p) % self.p) * self.pw[i];
            a /= self.p;
            b /= self.p;
        }
        v
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let mut a = a;
        let mut v = 0;
        for i in 0..self.m as usize {
            v += ((self.p - a % self.p) % self.p) * self.pw[i];
            a /= self.p;
        }
        v
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let p = self.p as u64;
        let ad = self.coeffs(FieldElem(a));
        let bd = self.coeffs(FieldElem(b));
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + ad[i] as u64 * bd[j] as u64) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for k in 0..m {
                let sub = c * self.modulus[k] as u64 % p;
                prod[i - m + k] = (prod[i - m + k] + p - sub) % p;
            }
            prod[i] = 0;
        }
        (0..m).map(|i| prod[i] as u32 * self.pw[i]).sum()
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.m == 1 {
            let s = a.0 + b.0;
            FieldElem(if s >= self.p { s - self.p } else { s })
        } else if let Some(t) = &self.tables {
            FieldElem(t.add[(a.0 * self.q + b.0) as usize])
        } else {
            FieldElem(self.add_slow(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.m == 1 {
            FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else if let Some(t) = &self.tables {
            FieldElem(t.neg[a.0 as usize])
        } else {
            FieldElem(self.neg_slow(a.0))
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.m == 1 {
            FieldElem((a.0 as u64 * b.0 as u64 % self.p as u64) as u32)
        } else if let Some(t) = &self.tables {
            FieldElem(t.mul[(a.0 * self.q + b.0) as usize])
        } else {
            FieldElem(self.mul_slow(a.0, b.0))
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.m == 1 {
            // extended Euclid on (a, p)
            let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            return Ok(FieldElem(t0.rem_euclid(self.p as i64) as u32));
        }
        if let Some(t) = &self.tables {
            return Ok(FieldElem(t.inv[a.0 as usize]));
        }
        Ok(self.pow_u64(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e; 0^0 = 1.
    pub fn pow_u64(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^e for a big exponent; 0^0 = 1.
    pub fn pow(&self, a: FieldElem, e: &BigUint) -> FieldElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    /// The unique λ₀ with λ₀^{p^s} = λ.
    pub fn ps_root(&self, lambda: FieldElem, s: u32) -> Result<FieldElem> {
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        let order = self.q as u64 - 1;
        if order == 1 {
            return Ok(lambda);
        }
        let mut ps = 1u64;
        for _ in 0..s {
            ps = ps * self.p as u64 % order;
        }
        let e = modinv(ps, order).expect("p is invertible mod p^m - 1");
        Ok(self.pow_u64(lambda, e))
    }
}

fn modinv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}
