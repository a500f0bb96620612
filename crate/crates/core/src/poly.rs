//! Dense univariate polynomials over F_{p^m}.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// Seed for the equal-degree splitting stream unless overridden.
pub const DEFAULT_SEED: u64 = 0xC0DEC;

/// Little-endian coefficients, no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<FieldElem>,
}

impl Poly {
    pub fn from_coeffs(mut c: Vec<FieldElem>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    /// Coefficients given as integers of the prime subfield.
    pub fn from_ints(k: &FieldCtx, c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| k.from_int(x)).collect())
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }
    pub fn one() -> Poly {
        Poly {
            c: vec![FieldElem::ONE],
        }
    }
    pub fn x() -> Poly {
        Poly {
            c: vec![FieldElem::ZERO, FieldElem::ONE],
        }
    }
    pub fn constant(a: FieldElem) -> Poly {
        Poly::from_coeffs(vec![a])
    }
    pub fn monomial(a: FieldElem, deg: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![FieldElem::ZERO; deg + 1];
        c[deg] = a;
        Poly { c }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.c
    }
    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Number of stored coefficients (degree + 1, or 0).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.c.len()
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == FieldElem::ONE
    }
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).copied().unwrap_or(FieldElem::ZERO)
    }
    pub fn lead(&self) -> FieldElem {
        self.c.last().copied().unwrap_or(FieldElem::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == FieldElem::ONE
    }

    /// x^k · self
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![FieldElem::ZERO; k];
        c.extend_from_slice(&self.c);
        Poly { c }
    }

    /// self mod x^k
    pub fn truncate(&self, k: usize) -> Poly {
        Poly::from_coeffs(self.c[..k.min(self.c.len())].to_vec())
    }
}

pub fn add(k: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let (long, short) = if a.c.len() >= b.c.len() {
        (a, b)
    } else {
        (b, a)
    };
    let mut c = long.c.clone();
    for (i, &x) in short.c.iter().enumerate() {
        c[i] = k.add(c[i], x);
    }
    Poly::from_coeffs(c)
}

pub fn neg(k: &FieldCtx, a: &Poly) -> Poly {
    Poly {
        c: a.c.iter().map(|&x| k.neg(x)).collect(),
    }
}

pub fn sub(k: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.c.len().max(b.c.len());
    let c = (0..n).map(|i| k.sub(a.coeff(i), b.coeff(i))).collect();
    Poly::from_coeffs(c)
}

pub fn scale(k: &FieldCtx, a: &Poly, s: FieldElem) -> Poly {
    if s.is_zero() {
        return Poly::zero();
    }
    Poly {
        c: a.c.iter().map(|&x| k.mul(x, s)).collect(),
    }
}

pub fn mul(k: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let n = a.c.len() + b.c.len() - 1;
    if k.m() == 1 {
        let p = k.p() as u64;
        let mut acc = vec![0u64; n];
        if p < 1 << 16 {
            for (i, &x) in a.c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let x = x.raw() as u64;
                for (j, &y) in b.c.iter().enumerate() {
                    acc[i + j] += x * y.raw() as u64;
                }
            }
            return Poly::from_coeffs(acc.into_iter().map(|v| FieldElem((v % p) as u32)).collect());
        }
        for (i, &x) in a.c.iter().enumerate() {
            for (j, &y) in b.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x.raw() as u64 * y.raw() as u64 % p) % p;
            }
        }
        return Poly::from_coeffs(acc.into_iter().map(|v| FieldElem(v as u32)).collect());
    }
    let mut c = vec![FieldElem::ZERO; n];
    for (i, &x) in a.c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.c.iter().enumerate() {
            c[i + j] = k.add(c[i + j], k.mul(x, y));
        }
    }
    Poly::from_coeffs(c)
}

/// (q, r) with a = q·b + r and deg r < deg b.
pub fn divmod(k: &FieldCtx, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let Some(db) = b.degree() else {
        return Err(Error::DivisionByZero);
    };
    let Some(da) = a.degree() else {
        return Ok((Poly::zero(), Poly::zero()));
    };
    if da < db {
        return Ok((Poly::zero(), a.clone()));
    }
    let inv = k.inv(b.lead())?;
    let mut r = a.c.clone();
    let mut q = vec![FieldElem::ZERO; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = k.mul(r[i + db], inv);
        if c.is_zero() {
            continue;
        }
        q[i] = c;
        for (j, &y) in b.c.iter().enumerate() {
            r[i + j] = k.sub(r[i + j], k.mul(c, y));
        }
    }
    r.truncate(db);
    Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
}

pub fn rem(k: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divmod(k, a, b)?.1)
}

/// a / b when b divides a, otherwise None.
pub fn exact_div(k: &FieldCtx, a: &Poly, b: &Poly) -> Result<Option<Poly>> {
    let (q, r) = divmod(k, a, b)?;
    Ok(r.is_zero().then_some(q))
}

/// (monic(a), lc(a)).
pub fn monic(k: &FieldCtx, a: &Poly) -> Result<(Poly, FieldElem)> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lc = a.lead();
    Ok((scale(k, a, k.inv(lc)?), lc))
}

/// (g, u, v) with g = gcd(a, b) monic and u·a + v·b = g; deg u < deg b − deg g.
pub fn xgcd(k: &FieldCtx, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = divmod(k, &r0, &r1)?;
        r0 = std::mem::replace(&mut r1, r);
        let s = sub(k, &s0, &mul(k, &q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = sub(k, &t0, &mul(k, &q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = k.inv(r0.lead())?;
    let g = scale(k, &r0, inv);
    let mut u = scale(k, &s0, inv);
    let mut v = scale(k, &t0, inv);
    if !b.is_zero() {
        let bg = divmod(k, b, &g)?.0;
        if bg.degree() == Some(0) {
            u = Poly::zero();
        } else {
            u = rem(k, &u, &bg)?;
        }
        v = exact_div(k, &sub(k, &g, &mul(k, &u, a)), b)?.expect("Bezout identity");
    }
    Ok((g, u, v))
}

pub fn gcd(k: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_zero() {
        let r = rem(k, &r0, &r1)?;
        r0 = std::mem::replace(&mut r1, r);
    }
    Ok(monic(k, &r0)?.0)
}

pub fn mulmod(k: &FieldCtx, a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
    rem(k, &mul(k, a, b), m)
}

/// a^e mod m for an arbitrary-size exponent.
pub fn modpow(k: &FieldCtx, a: &Poly, e: &BigUint, m: &Poly) -> Result<Poly> {
    if m.degree().unwrap_or(0) == 0 {
        return Err(Error::BadModulus);
    }
    let base = rem(k, a, m)?;
    let mut acc = Poly::one();
    for i in (0..e.bits()).rev() {
        acc = mulmod(k, &acc, &acc, m)?;
        if e.bit(i) {
            acc = mulmod(k, &acc, &base, m)?;
        }
    }
    Ok(acc)
}

pub fn modpow_u64(k: &FieldCtx, a: &Poly, e: u64, m: &Poly) -> Result<Poly> {
    modpow(k, a, &BigUint::from(e), m)
}

pub fn pow(k: &FieldCtx, a: &Poly, mut e: u64) -> Poly {
    let mut base = a.clone();
    let mut acc = Poly::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(k, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(k, &base, &base);
        }
    }
    acc
}

/// x^{deg f} f(1/x): coefficient reversal.
pub fn reciprocal(f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = f.c.clone();
    c.reverse();
    Ok(Poly::from_coeffs(c))
}

pub fn derivative(k: &FieldCtx, a: &Poly) -> Poly {
    let c =
        a.c.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| k.mul(x, k.from_int(i as i64)))
            .collect();
    Poly::from_coeffs(c)
}

pub fn eval(k: &FieldCtx, a: &Poly, x: FieldElem) -> FieldElem {
    a.c.iter()
        .rev()
        .fold(FieldElem::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
}

/// x^n − c
pub fn xn_minus(k: &FieldCtx, n: usize, c: FieldElem) -> Poly {
    let mut v = vec![FieldElem::ZERO; n + 1];
    v[n] = FieldElem::ONE;
    v[0] = k.sub(v[0], c);
    Poly::from_coeffs(v)
}

/// Reduces a mod x^n − c by folding: x^{n+i} ≡ c·x^i.
pub fn reduce_xn(k: &FieldCtx, a: &Poly, n: usize, c: FieldElem) -> Poly {
    if a.c.len() <= n {
        return a.clone();
    }
    let mut out = a.c.clone();
    for i in (n..out.len()).rev() {
        let top = out[i];
        if !top.is_zero() {
            out[i - n] = k.add(out[i - n], k.mul(top, c));
        }
    }
    out.truncate(n);
    Poly::from_coeffs(out)
}

/// Canonical order: degree ascending, then coefficients compared from x^0 upward.
pub fn cmp_canonical(k: &FieldCtx, a: &Poly, b: &Poly) -> Ordering {
    a.c.len().cmp(&b.c.len()).then_with(|| {
        for (&x, &y) in a.c.iter().zip(&b.c) {
            match k.cmp(x, y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(Poly, u32)>,
}

pub fn factor_squarefree(k: &FieldCtx, f: &Poly) -> Result<Factorization> {
    factor_squarefree_seeded(k, f, DEFAULT_SEED)
}

/// Distinct-degree factorization, then equal-degree splitting driven by a
/// ChaCha stream seeded with `seed`. Output is sorted canonically, so it does
/// not depend on the seed.
pub fn factor_squarefree_seeded(k: &FieldCtx, f: &Poly, seed: u64) -> Result<Factorization> {
    match f.degree() {
        None | Some(0) => return Err(Error::ConstantInput),
        _ => {}
    }
    if !gcd(k, f, &derivative(k, f))?.is_one() {
        return Err(Error::NotSquarefree);
    }
    let (g, unit) = monic(k, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (h, d) in distinct_degree(k, &g)? {
        equal_degree(k, h, d, &mut rng, &mut out)?;
    }
    out.sort_by(|a, b| cmp_canonical(k, a, b));
    Ok(Factorization {
        unit,
        factors: out.into_iter().map(|p| (p, 1)).collect(),
    })
}

fn distinct_degree(k: &FieldCtx, f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = k.q() as u64;
    let mut h = f.clone();
    let mut xq = Poly::x();
    let mut d = 1usize;
    let mut out = Vec::new();
    while h.degree().unwrap_or(0) >= 2 * d {
        xq = modpow_u64(k, &xq, q, &h)?;
        let t = gcd(k, &h, &sub(k, &xq, &Poly::x()))?;
        if !t.is_one() {
            h = divmod(k, &h, &t)?.0;
            xq = rem(k, &xq, &h)?;
            out.push((t, d));
        }
        d += 1;
    }
    if let Some(dh) = h.degree() {
        if dh > 0 {
            out.push((h, dh));
        }
    }
    Ok(out)
}

fn random_poly(k: &FieldCtx, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    Poly::from_coeffs(
        (0..below)
            .map(|_| k.from_rank(rng.gen_range(0..k.q())))
            .collect(),
    )
}

fn equal_degree(
    k: &FieldCtx,
    f: Poly,
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly>,
) -> Result<()> {
    let mut stack = vec![f];
    let half = (BigUint::from(k.q()).pow(d as u32) - 1u32) / 2u32;
    while let Some(h) = stack.pop() {
        let n = h.degree().expect("nonzero");
        if n == d {
            out.push(h);
            continue;
        }
        loop {
            let a = random_poly(k, n, rng);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let probe = if k.p() == 2 {
                // absolute trace Σ a^{2^i}, i < m·d
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..(k.m() as usize * d) {
                    t = mulmod(k, &t, &t, &h)?;
                    acc = add(k, &acc, &t);
                }
                acc
            } else {
                let g = gcd(k, &a, &h)?;
                if !g.is_one() {
                    let other = divmod(k, &h, &g)?.0;
                    stack.push(g);
                    stack.push(other);
                    break;
                }
                sub(k, &modpow(k, &a, &half, &h)?, &Poly::one())
            };
            if probe.is_zero() {
                continue;
            }
            let g = gcd(k, &probe, &h)?;
            let dg = g.degree().unwrap();
            if dg > 0 && dg < n {
                let other = divmod(k, &h, &g)?.0;
                stack.push(g);
                stack.push(other);
                break;
            }
        }
    }
    Ok(())
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test. `f` should be monic and nonconstant; constants return false.
pub fn is_irreducible(k: &FieldCtx, f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let q = k.q() as u64;
    // x^{q^i} mod f for i = 0..=n
    let mut frob = vec![rem(k, &Poly::x(), f).unwrap()];
    for i in 1..=n {
        frob.push(modpow_u64(k, &frob[i - 1], q, f).unwrap());
    }
    if frob[n] != frob[0] {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        gcd(k, f, &sub(k, &frob[n / r], &Poly::x()))
            .unwrap()
            .is_one()
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..max_len)
    }

    fn mk(v: &[u32]) -> Poly {
        Poly::from_coeffs(v.iter().map(|&x| FieldElem(x)).collect())
    }

    proptest! {
        #[test]
        fn divmod_roundtrip(a in arb_poly(49, 20), b in arb_poly(49, 8)) {
            let k = FieldCtx::new(7, 2, None).unwrap();
            let (a, b) = (mk(&a), mk(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = divmod(&k, &a, &b).unwrap();
            prop_assert_eq!(add(&k, &mul(&k, &q, &b), &r), a);
            prop_assert!(r.len() < b.len());
        }

        #[test]
        fn bezout_identity(a in arb_poly(5, 15), b in arb_poly(5, 15)) {
            let k = FieldCtx::prime(5).unwrap();
            let (a, b) = (mk(&a), mk(&b));
            prop_assume!(!a.is_zero() || !b.is_zero());
            let (g, u, v) = xgcd(&k, &a, &b).unwrap();
            prop_assert_eq!(add(&k, &mul(&k, &u, &a), &mul(&k, &v, &b)), g.clone());
            prop_assert!(g.is_monic());
            if !b.is_zero() && !rem(&k, &a, &b).unwrap().is_zero() {
                prop_assert!(u.len() + g.len() < b.len() + 1);
            }
        }

        #[test]
        fn frobenius_power_of_bezout(a in arb_poly(9, 8), b in arb_poly(9, 8), s in 1u32..3) {
            let k = FieldCtx::new(3, 2, None).unwrap();
            let (a, b) = (mk(&a), mk(&b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (g, u, v) = xgcd(&k, &a, &b).unwrap();
            prop_assume!(g.is_one());
            let e = 3u64.pow(s);
            let lhs = add(&k, &mul(&k, &pow(&k, &u, e), &pow(&k, &a, e)), &mul(&k, &pow(&k, &v, e), &pow(&k, &b, e)));
            prop_assert_eq!(lhs, Poly::one());
        }

        #[test]
        fn reciprocal_identities(a in arb_poly(5, 10), b in arb_poly(5, 10)) {
            let k = FieldCtx::prime(5).unwrap();
            let (a, b) = (mk(&a), mk(&b));
            prop_assume!(!a.coeff(0).is_zero() && !b.coeff(0).is_zero());
            prop_assert_eq!(reciprocal(&reciprocal(&a).unwrap()).unwrap(), a.clone());
            prop_assert_eq!(reciprocal(&mul(&k, &a, &b)).unwrap(), mul(&k, &reciprocal(&a).unwrap(), &reciprocal(&b).unwrap()));
        }

        #[test]
        fn factorization_reproduces_input(n in 1usize..30, c in 1u32..13) {
            prop_assume!(n % 13 != 0);
            let k = FieldCtx::prime(13).unwrap();
            let g = xn_minus(&k, n, FieldElem(c));
            let fz = factor_squarefree(&k, &g).unwrap();
            let prod = fz.factors.iter().fold(Poly::constant(fz.unit), |acc, (f, _)| mul(&k, &acc, f));
            prop_assert_eq!(prod, g);
            for (i, (f, _)) in fz.factors.iter().enumerate() {
                prop_assert!(is_irreducible(&k, f));
                for (h, _) in &fz.factors[i + 1..] {
                    prop_assert!(gcd(&k, f, h).unwrap().is_one());
                }
            }
        }
    }
}
