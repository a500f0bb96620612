//! The chain ring K = F_q[x]/(f^e) with f monic irreducible.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{self, Poly};

/// A reduced representative, degree < d·e.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChainElem(pub(crate) Poly);

impl ChainElem {
    pub fn poly(&self) -> &Poly {
        &self.0
    }
    pub fn into_poly(self) -> Poly {
        self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[derive(Debug)]
pub struct ChainCtx {
    field: Arc<FieldCtx>,
    f: Poly,
    d: usize,
    e: usize,
    f_pows: Vec<Poly>,
}

impl PartialEq for ChainCtx {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.f == other.f && self.e == other.e
    }
}

/// ⌈x/2⌉ for any integer, e.g. ⌈−1/2⌉ = 0.
pub fn ceil_half(x: i64) -> i64 {
    -((-x).div_euclid(2))
}

impl ChainCtx {
    pub fn new(field: Arc<FieldCtx>, f: Poly, e: usize) -> Result<ChainCtx> {
        let d = match f.degree() {
            None | Some(0) => return Err(Error::ConstantInput),
            Some(d) => d,
        };
        if !f.is_monic() {
            return Err(Error::DegreeMismatch("uniformizer must be monic".into()));
        }
        if e == 0 {
            return Err(Error::SZero);
        }
        if !poly::is_irreducible(&field, &f) {
            return Err(Error::InvalidSpec("uniformizer is reducible".into()));
        }
        let mut f_pows = vec![Poly::one()];
        for i in 1..=e {
            f_pows.push(poly::mul(&field, &f_pows[i - 1], &f));
        }
        Ok(ChainCtx {
            field,
            f,
            d,
            e,
            f_pows,
        })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }
    pub fn f(&self) -> &Poly {
        &self.f
    }
    pub fn d(&self) -> usize {
        self.d
    }
    /// Nilpotency index of f.
    pub fn e(&self) -> usize {
        self.e
    }
    /// f^i as a polynomial, 0 ≤ i ≤ e.
    pub fn f_pow_poly(&self, i: usize) -> &Poly {
        &self.f_pows[i]
    }
    /// f^e
    pub fn modulus(&self) -> &Poly {
        &self.f_pows[self.e]
    }
    /// |K| = q^{d·e}
    pub fn size(&self) -> BigUint {
        BigUint::from(self.field.q()).pow((self.d * self.e) as u32)
    }

    pub fn reduce(&self, a: &Poly) -> ChainElem {
        if a.len() <= self.d * self.e {
            return ChainElem(a.clone());
        }
        ChainElem(poly::rem(&self.field, a, self.modulus()).expect("modulus is nonzero"))
    }

    pub fn zero(&self) -> ChainElem {
        ChainElem(Poly::zero())
    }
    pub fn one(&self) -> ChainElem {
        ChainElem(Poly::one())
    }
    pub fn constant(&self, c: FieldElem) -> ChainElem {
        ChainElem(Poly::constant(c))
    }
    pub fn f_pow(&self, i: usize) -> ChainElem {
        if i >= self.e {
            self.zero()
        } else {
            ChainElem(self.f_pows[i].clone())
        }
    }

    pub fn add(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        ChainElem(poly::add(&self.field, &a.0, &b.0))
    }
    pub fn sub(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        ChainElem(poly::sub(&self.field, &a.0, &b.0))
    }
    pub fn neg(&self, a: &ChainElem) -> ChainElem {
        ChainElem(poly::neg(&self.field, &a.0))
    }
    pub fn scale(&self, a: &ChainElem, c: FieldElem) -> ChainElem {
        ChainElem(poly::scale(&self.field, &a.0, c))
    }
    pub fn mul(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        self.reduce(&poly::mul(&self.field, &a.0, &b.0))
    }
    pub fn pow(&self, a: &ChainElem, mut n: u64) -> ChainElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: &ChainElem) -> bool {
        !a.is_zero() && !poly::rem(&self.field, &a.0, &self.f).unwrap().is_zero()
    }

    pub fn inv(&self, a: &ChainElem) -> Result<ChainElem> {
        if !self.is_unit(a) {
            return Err(Error::DivisionByZero);
        }
        let (_, u, _) = poly::xgcd(&self.field, &a.0, self.modulus())?;
        Ok(self.reduce(&u))
    }

    /// Digits b_0..b_{e-1}, each of degree < d, with Σ b_k f^k = a.
    pub fn expand(&self, a: &ChainElem) -> Vec<Poly> {
        let mut out = Vec::with_capacity(self.e);
        let mut cur = a.0.clone();
        for _ in 0..self.e {
            let (q, r) = poly::divmod(&self.field, &cur, &self.f).unwrap();
            out.push(r);
            cur = q;
        }
        out
    }

    pub fn recompose(&self, digits: &[Poly]) -> ChainElem {
        let mut acc = Poly::zero();
        for (k, b) in digits.iter().enumerate().take(self.e) {
            acc = poly::add(
                &self.field,
                &acc,
                &poly::mul(&self.field, b, &self.f_pows[k]),
            );
        }
        self.reduce(&acc)
    }

    /// Least k with a nonzero digit b_k; e for zero.
    pub fn valuation(&self, a: &ChainElem) -> usize {
        if a.is_zero() {
            return self.e;
        }
        let mut cur = a.0.clone();
        let mut k = 0;
        loop {
            let (q, r) = poly::divmod(&self.field, &cur, &self.f).unwrap();
            if !r.is_zero() {
                return k;
            }
            cur = q;
            k += 1;
        }
    }

    /// c with a = f^i·c, when valuation(a) ≥ i. The quotient is exact on representatives.
    pub fn div_f_pow(&self, a: &ChainElem, i: usize) -> Option<ChainElem> {
        poly::exact_div(&self.field, &a.0, &self.f_pows[i])
            .unwrap()
            .map(ChainElem)
    }

    /// a mod f^i, as a representative of degree < d·i.
    pub fn trunc_f(&self, a: &ChainElem, i: usize) -> ChainElem {
        ChainElem(poly::rem(&self.field, &a.0, &self.f_pows[i]).unwrap())
    }

    /// |f^lo (K/f^hi)| = q^{d(hi−lo)}
    pub fn residue_count(&self, lo: usize, hi: usize) -> BigUint {
        BigUint::from(self.field.q()).pow((self.d * (hi - lo)) as u32)
    }

    /// The set f^lo (K/f^hi) = {Σ_{k=lo}^{hi−1} c_k f^k : deg c_k < d}.
    pub fn residue_set(&self, lo: usize, hi: usize) -> Result<ResidueIter<'_>> {
        if lo > hi || hi > self.e {
            return Err(Error::RangeError(format!(
                "residue_set({lo}, {hi}) with e = {}",
                self.e
            )));
        }
        let mut basis = Vec::new();
        for k in lo..hi {
            for i in 0..self.d {
                basis.push(self.f_pows[k].shift(i));
            }
        }
        Ok(ResidueIter {
            ctx: self,
            ranks: vec![0; basis.len()],
            basis,
            cur: Poly::zero(),
            done: false,
        })
    }

    /// Image of a ∈ K under x ↦ y, i.e. a(y) evaluated in `target`.
    pub fn substitute(&self, a: &ChainElem, y: &ChainElem, target: &ChainCtx) -> ChainElem {
        let mut acc = target.zero();
        for &c in a.0.coeffs().iter().rev() {
            acc = target.add(&target.mul(&acc, y), &target.constant(c));
        }
        acc
    }

    /// Count of ideals of K + uK.
    pub fn count_ideals(&self) -> BigUint {
        let p = self.field.p() as u64;
        crate::ideals::count_ideals_e(p, self.field.m(), self.d as u32, self.e as u64)
    }
}

/// Digit odometer: slot (k, i) holds the coefficient of x^i f^k; the lowest
/// slot moves fastest and each slot runs through the field in canonical order.
pub struct ResidueIter<'a> {
    ctx: &'a ChainCtx,
    basis: Vec<Poly>,
    ranks: Vec<u32>,
    cur: Poly,
    done: bool,
}

impl Iterator for ResidueIter<'_> {
    type Item = ChainElem;

    fn next(&mut self) -> Option<ChainElem> {
        if self.done {
            return None;
        }
        let out = ChainElem(self.cur.clone());
        let k = &self.ctx.field;
        let q = k.q();
        let mut slot = 0;
        loop {
            if slot == self.ranks.len() {
                self.done = true;
                break;
            }
            let old = k.from_rank(self.ranks[slot]);
            self.ranks[slot] += 1;
            let wrapped = self.ranks[slot] == q;
            if wrapped {
                self.ranks[slot] = 0;
            }
            let new = k.from_rank(self.ranks[slot]);
            let delta = k.sub(new, old);
            self.cur = poly::add(k, &self.cur, &poly::scale(k, &self.basis[slot], delta));
            if !wrapped {
                break;
            }
            slot += 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, f: &[i64], e: usize) -> ChainCtx {
        let k = FieldCtx::prime(p).unwrap();
        let f = Poly::from_ints(&k, f);
        ChainCtx::new(k, f, e).unwrap()
    }

    #[test]
    fn ceil_half_values() {
        assert_eq!(ceil_half(-1), 0);
        assert_eq!(ceil_half(1), 1);
        assert_eq!(ceil_half(5), 3);
        assert_eq!(ceil_half(4), 2);
        assert_eq!(ceil_half(-4), -2);
        assert_eq!(ceil_half(0), 0);
    }

    #[test]
    fn basic_ring_facts() {
        let c = ctx(5, &[2, 1], 5);
        assert!(c.mul(&c.f_pow(4), &c.f_pow(1)).is_zero());
        let x = c.reduce(&Poly::x());
        assert!(c.is_unit(&x));
        assert_eq!(c.expand(&x)[0], Poly::from_ints(c.field(), &[-2]));
        let a = c.reduce(&Poly::from_ints(c.field(), &[1, 2, 3, 4]));
        assert_eq!(c.mul(&c.one(), &a), a);
        assert!(c.expand(&c.zero()).iter().all(|d| d.is_zero()));
        for k in 0..5 {
            let dig = c.expand(&c.f_pow(k));
            for (i, d) in dig.iter().enumerate() {
                assert_eq!(d.is_one(), i == k);
                assert!(d.is_one() || d.is_zero());
            }
        }
    }

    #[test]
    fn expansion_of_x4_is_binomial() {
        let c = ctx(5, &[2, 1], 5);
        let k = c.field().clone();
        let x4 = c.reduce(&Poly::from_ints(&k, &[0, 0, 0, 0, 1]));
        // x = (x+2) − 2, so the i-th digit is C(4,i)(−2)^{4−i}
        let binom = [1i64, 4, 6, 4, 1];
        let digits = c.expand(&x4);
        for i in 0..5 {
            let want = binom[i] * (-2i64).pow(4 - i as u32);
            assert_eq!(digits[i], Poly::from_ints(&k, &[want]));
        }
        assert_eq!(digits[0], Poly::from_ints(&k, &[1]));
        assert_eq!(c.recompose(&digits), x4);
    }

    #[test]
    fn valuation_examples() {
        let c = ctx(5, &[2, 1], 5);
        assert_eq!(c.valuation(&c.zero()), 5);
        assert_eq!(c.valuation(&c.one()), 0);
        let u = c.reduce(&Poly::from_ints(c.field(), &[1, 1]));
        assert!(c.is_unit(&u));
        assert_eq!(c.valuation(&c.mul(&c.f_pow(2), &u)), 2);
        let inv = c.inv(&u).unwrap();
        assert_eq!(c.mul(&u, &inv), c.one());
        assert!(c.inv(&c.f_pow(1)).is_err());
    }

    #[test]
    fn residue_sets() {
        let c = ctx(5, &[2, 1], 5);
        let v: Vec<_> = c.residue_set(3, 3).unwrap().collect();
        assert_eq!(v, vec![c.zero()]);
        let v: Vec<_> = c.residue_set(2, 4).unwrap().collect();
        assert_eq!(v.len(), 25);
        let set: std::collections::HashSet<_> = v.iter().cloned().collect();
        assert_eq!(set.len(), 25);
        assert!(v.iter().all(|a| c.valuation(a) >= 2));
        assert_eq!(v[0], c.zero());
        assert_eq!(v[1], c.f_pow(2));
        assert!(c.residue_set(3, 2).is_err());
        assert!(c.residue_set(0, 6).is_err());
    }

    fn all_elems(c: &ChainCtx) -> Vec<ChainElem> {
        c.residue_set(0, c.e()).unwrap().collect()
    }

    #[test]
    fn exhaustive_small_rings() {
        for c in [
            ctx(5, &[2, 1], 5),
            ctx(2, &[1, 1, 1], 2),
            ctx(3, &[1, 0, 1], 3),
        ] {
            let all = all_elems(&c);
            let e = c.e();
            assert_eq!(BigUint::from(all.len()), c.size());
            for a in &all {
                assert_eq!(&c.recompose(&c.expand(a)), a);
                let va = c.valuation(a);
                if !a.is_zero() {
                    let unit = c.div_f_pow(a, va).unwrap();
                    assert!(c.is_unit(&unit));
                    assert_eq!(&c.mul(&c.f_pow(va), &unit), a);
                }
                for t in 1..=e {
                    for l in t..=e {
                        let lhs = c.valuation(&c.mul(&c.f_pow(t), a)) >= l;
                        assert_eq!(lhs, va + t >= l);
                    }
                }
            }
        }
    }

    #[test]
    fn substitute_constants_fixed() {
        let c = ctx(5, &[2, 1], 5);
        let y = c.reduce(&Poly::from_ints(c.field(), &[0, 3, 1]));
        let a = c.constant(c.field().from_int(4));
        assert_eq!(c.substitute(&a, &y, &c), a);
    }
}
