//! Ideals of K + uK in five families, and codes assembled from them.
//!
//! An element A + uB of K + uK is handled as the pair (A, B). Every ideal is
//! described by a shape (k, T) and a parameter b: it is the K-span of
//! (f^{k+1}b, f^k) and (f^T, 0), or of (f^k, 0), (0, f^k) when T = k.

use num_bigint::BigUint;
use num_traits::One;

use crate::chain::{ceil_half, ChainCtx, ChainElem};
use crate::decomp::{AmbientElem, AmbientParams, FactorData};
use crate::error::{Error, Result};

/// Default cap on the number of codewords a code may materialize.
pub const MATERIALIZE_BOUND: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealCase {
    I,
    II,
    III,
    IV,
    V,
}

impl IdealCase {
    pub fn name(self) -> &'static str {
        match self {
            IdealCase::I => "I",
            IdealCase::II => "II",
            IdealCase::III => "III",
            IdealCase::IV => "IV",
            IdealCase::V => "V",
        }
    }

    pub fn parse(s: &str) -> Result<IdealCase> {
        Ok(match s {
            "I" => IdealCase::I,
            "II" => IdealCase::II,
            "III" => IdealCase::III,
            "IV" => IdealCase::IV,
            "V" => IdealCase::V,
            _ => return Err(Error::Parse(format!("unknown case {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IdealSpec {
    /// ⟨f b + u⟩
    I { b: ChainElem },
    /// ⟨f^{k+1} b + u f^k⟩
    II { k: usize, b: ChainElem },
    /// ⟨f^k⟩
    III { k: usize },
    /// ⟨f b + u, f^t⟩
    IV { t: usize, b: ChainElem },
    /// ⟨f^{k+1} b + u f^k, f^{k+t}⟩
    V { k: usize, t: usize, b: ChainElem },
}

/// Bounds (lo, hi) of the residue set f^lo (K/f^hi) holding b when T − k = span ≥ 1.
pub fn b_bounds(span: usize) -> (usize, usize) {
    ((ceil_half(span as i64) - 1) as usize, span - 1)
}

impl IdealSpec {
    pub fn case(&self) -> IdealCase {
        match self {
            IdealSpec::I { .. } => IdealCase::I,
            IdealSpec::II { .. } => IdealCase::II,
            IdealSpec::III { .. } => IdealCase::III,
            IdealSpec::IV { .. } => IdealCase::IV,
            IdealSpec::V { .. } => IdealCase::V,
        }
    }

    pub fn b(&self) -> Option<&ChainElem> {
        match self {
            IdealSpec::I { b }
            | IdealSpec::II { b, .. }
            | IdealSpec::IV { b, .. }
            | IdealSpec::V { b, .. } => Some(b),
            IdealSpec::III { .. } => None,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            IdealSpec::II { k, .. } | IdealSpec::III { k } | IdealSpec::V { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn t(&self) -> Option<usize> {
        match self {
            IdealSpec::IV { t, .. } | IdealSpec::V { t, .. } => Some(*t),
            _ => None,
        }
    }

    /// (k, T) as described in the module docs.
    pub fn shape(&self, e: usize) -> (usize, usize) {
        match *self {
            IdealSpec::I { .. } => (0, e),
            IdealSpec::II { k, .. } => (k, e),
            IdealSpec::III { k } => (k, k),
            IdealSpec::IV { t, .. } => (0, t),
            IdealSpec::V { k, t, .. } => (k, k + t),
        }
    }

    /// Inverse of `shape`; `b` is ignored when T = k.
    pub fn from_shape(k: usize, top: usize, e: usize, b: ChainElem) -> IdealSpec {
        debug_assert!(k <= top && top <= e);
        if k == top {
            IdealSpec::III { k }
        } else if top == e {
            if k == 0 {
                IdealSpec::I { b }
            } else {
                IdealSpec::II { k, b }
            }
        } else if k == 0 {
            IdealSpec::IV { t: top, b }
        } else {
            IdealSpec::V { k, t: top - k, b }
        }
    }

    pub fn validate(&self, ctx: &ChainCtx) -> Result<()> {
        let e = ctx.e();
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            IdealSpec::II { k, .. } if !(1..e).contains(&k) => {
                return bad(format!("II needs 1 <= k <= {}", e - 1))
            }
            IdealSpec::III { k } if k > e => return bad(format!("III needs k <= {e}")),
            IdealSpec::IV { t, .. } if !(1..e).contains(&t) => {
                return bad(format!("IV needs 1 <= t <= {}", e - 1))
            }
            IdealSpec::V { k, t, .. } if k < 1 || t < 1 || k + t > e - 1 => {
                return bad(format!("V needs k, t >= 1 and k + t <= {}", e - 1))
            }
            _ => {}
        }
        if let Some(b) = self.b() {
            let (k, top) = self.shape(e);
            let (lo, hi) = b_bounds(top - k);
            if b.is_zero() {
                return Ok(());
            }
            if b.poly().len() > ctx.d() * hi || ctx.valuation(b) < lo {
                return bad(format!("b must lie in f^{lo}(K/f^{hi})"));
            }
        }
        Ok(())
    }

    /// |C| = q^{d(2e − k − T)}
    pub fn size(&self, ctx: &ChainCtx) -> BigUint {
        let (k, top) = self.shape(ctx.e());
        let exp = ctx.d() * (2 * ctx.e() - k - top);
        BigUint::from(ctx.field().q()).pow(exp as u32)
    }

    /// Whether A + uB lies in the ideal: val(B) ≥ k and A − f·b·B ∈ f^T K.
    /// Per family this reads I: A = fbB; II: val(B) ≥ k, A = fbB;
    /// III: val(A), val(B) ≥ k; IV: A − fbB ∈ f^t K; V: val(B) ≥ k, A − fbB ∈ f^{k+t} K.
    pub fn contains(&self, ctx: &ChainCtx, a: &ChainElem, b_: &ChainElem) -> bool {
        let (k, top) = self.shape(ctx.e());
        if ctx.valuation(b_) < k {
            return false;
        }
        let fbb = match self.b() {
            Some(b) if !b.is_zero() => ctx.mul(&ctx.mul(&ctx.f_pow(1), b), b_),
            _ => ctx.zero(),
        };
        ctx.valuation(&ctx.sub(a, &fbb)) >= top
    }

    /// Rows of the echelon generator matrix, each with the bound h such that
    /// every element is uniquely Σ c_i row_i with c_i ∈ K/f^{h_i}.
    pub fn rows(&self, ctx: &ChainCtx) -> Vec<((ChainElem, ChainElem), usize)> {
        let e = ctx.e();
        let (k, top) = self.shape(e);
        let mut out = Vec::new();
        if k == top {
            if k < e {
                out.push(((ctx.f_pow(k), ctx.zero()), e - k));
                out.push(((ctx.zero(), ctx.f_pow(k)), e - k));
            }
            return out;
        }
        let b = self.b().expect("non-III spec has b");
        out.push(((ctx.mul(&ctx.f_pow(k + 1), b), ctx.f_pow(k)), e - k));
        if top < e {
            out.push(((ctx.f_pow(top), ctx.zero()), e - top));
        }
        out
    }

    /// Generators of the ideal in K + uK.
    pub fn generators(&self, ctx: &ChainCtx) -> Vec<(ChainElem, ChainElem)> {
        let e = ctx.e();
        let (k, top) = self.shape(e);
        if k == top {
            return vec![(ctx.f_pow(k), ctx.zero())];
        }
        let mut out = vec![self.rows(ctx)[0].0.clone()];
        if top < e {
            out.push((ctx.f_pow(top), ctx.zero()));
        }
        out
    }

    /// Every element (A, B) of the ideal, each exactly once.
    pub fn elements<'a>(
        &self,
        ctx: &'a ChainCtx,
    ) -> impl Iterator<Item = (ChainElem, ChainElem)> + 'a {
        let rows = self.rows(ctx);
        let makers: Vec<Maker<'a, (ChainElem, ChainElem)>> = rows
            .into_iter()
            .map(|(row, h)| -> Maker<'a, (ChainElem, ChainElem)> {
                Box::new(move || {
                    let row = row.clone();
                    Box::new(
                        ctx.residue_set(0, h)
                            .unwrap()
                            .map(move |c| (ctx.mul(&c, &row.0), ctx.mul(&c, &row.1))),
                    )
                })
            })
            .collect();
        Product::new(makers).map(move |parts| {
            parts.into_iter().fold((ctx.zero(), ctx.zero()), |acc, x| {
                (ctx.add(&acc.0, &x.0), ctx.add(&acc.1, &x.1))
            })
        })
    }
}

/// Normalizes the ideal of K + uK generated by `gens` into its unique spec.
///
/// Works on the K-module spanned by the generators and their u-multiples:
/// pivot on the least valuation of the B-coordinates, clear the other B
/// entries, and read T off the remaining pure-A rows.
pub fn ideal_from_generators(ctx: &ChainCtx, gens: &[(ChainElem, ChainElem)]) -> Result<IdealSpec> {
    let e = ctx.e();
    let mut rows: Vec<(ChainElem, ChainElem)> = Vec::new();
    for (a, b) in gens {
        rows.push((a.clone(), b.clone()));
        rows.push((ctx.zero(), a.clone()));
    }
    let Some((piv, k)) = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, ctx.valuation(&r.1)))
        .min_by_key(|&(_, v)| v)
        .filter(|&(_, v)| v < e)
    else {
        return Ok(IdealSpec::III { k: e });
    };
    let (pa, pb) = rows.swap_remove(piv);
    let unit = ctx.div_f_pow(&pb, k).expect("valuation k");
    let uinv = ctx.inv(&unit)?;
    let a_piv = ctx.mul(&pa, &uinv);
    let mut top = ctx.valuation(&ctx.mul(&ctx.f_pow(e - k), &a_piv));
    for (a, b) in &rows {
        let beta = ctx.div_f_pow(b, k).expect("pivot has least valuation");
        let rest = ctx.sub(a, &ctx.mul(&beta, &a_piv));
        top = top.min(ctx.valuation(&rest));
    }
    if top < k {
        return Err(Error::InvalidSpec("generators do not close under u".into()));
    }
    if top == k {
        return Ok(IdealSpec::III { k });
    }
    let span = top - k;
    let (lo, hi) = b_bounds(span);
    let head = ctx.trunc_f(&a_piv, top);
    let b = ctx.div_f_pow(&head, k + 1).ok_or_else(|| {
        Error::InvalidSpec("pivot row is not of the form (f^{k+1} b, f^k)".into())
    })?;
    let b = ctx.trunc_f(&b, hi);
    if !b.is_zero() && ctx.valuation(&b) < lo {
        return Err(Error::InvalidSpec(
            "parameter b outside its residue set".into(),
        ));
    }
    Ok(IdealSpec::from_shape(k, top, e, b))
}

/// (k, T) shapes in enumeration order: I, II by k, III by k, IV by t, V by (k, t).
fn shapes(e: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, e)];
    out.extend((1..e).map(|k| (k, e)));
    out.extend((0..=e).map(|k| (k, k)));
    out.extend((1..e).map(|t| (0, t)));
    for k in 1..e.saturating_sub(1) {
        out.extend((1..e - k).map(|t| (k, k + t)));
    }
    out
}

/// Every ideal spec of K + uK exactly once, in the documented order.
pub fn enumerate_ideals(ctx: &ChainCtx) -> impl Iterator<Item = IdealSpec> + '_ {
    let e = ctx.e();
    shapes(e).into_iter().flat_map(move |(k, top)| {
        let (lo, hi) = if top > k { b_bounds(top - k) } else { (0, 0) };
        ctx.residue_set(lo, hi)
            .expect("bounds within e")
            .map(move |b| IdealSpec::from_shape(k, top, e, b))
    })
}

fn powers(base: &BigUint, n: usize) -> Vec<BigUint> {
    let mut v = vec![BigUint::one()];
    for i in 1..=n {
        let next = &v[i - 1] * base;
        v.push(next);
    }
    v
}

fn chain_len(p: u64, s: u32) -> u64 {
    p.checked_pow(s).expect("p^s fits in 64 bits")
}

/// Ideal count of K + uK from the closed form, in terms of e = p^s.
pub fn count_ideals_e(p: u64, m: u32, d: u32, e: u64) -> BigUint {
    let qd = BigUint::from(p).pow(m * d);
    let (top, first) = if e.is_multiple_of(2) {
        (e / 2, 1u64)
    } else {
        ((e - 1) / 2, 3u64)
    };
    let pw = powers(&qd, top as usize);
    (0..=top)
        .map(|i| BigUint::from(first + 4 * i) * &pw[(top - i) as usize])
        .sum()
}

pub fn count_ideals(p: u64, m: u32, d: u32, s: u32) -> BigUint {
    count_ideals_e(p, m, d, chain_len(p, s))
}

/// Per-family counts [I, II, III, IV, V].
pub fn count_by_case_e(p: u64, m: u32, d: u32, e: u64) -> [BigUint; 5] {
    let qd = BigUint::from(p).pow(m * d);
    let pw = powers(&qd, e as usize);
    let term = |span: u64| pw[(span - ceil_half(span as i64) as u64) as usize].clone();
    let one: BigUint = term(e);
    let two: BigUint = (1..e).map(|k| term(e - k)).sum();
    let three = BigUint::from(e + 1);
    let four: BigUint = (1..e).map(term).sum();
    let mut five = BigUint::default();
    for k in 1..e.saturating_sub(1) {
        for t in 1..e - k {
            five += term(t);
        }
    }
    [one, two, three, four, five]
}

pub fn count_by_case(p: u64, m: u32, d: u32, s: u32) -> [BigUint; 5] {
    count_by_case_e(p, m, d, chain_len(p, s))
}

/// 1 + e + Σ_{k<e} q_d^{(e−k)−⌈(e−k)/2⌉} + Σ_{k≤e−2} Σ_{t=1}^{e−k−1} q_d^{t−⌈t/2⌉}, q_d = p^{md}.
pub fn count_ideals_sumform(p: u64, m: u32, d: u32, s: u32) -> BigUint {
    let e = chain_len(p, s);
    let qd = BigUint::from(p).pow(m * d);
    let pw = powers(&qd, e as usize);
    let term = |span: u64| &pw[(span - ceil_half(span as i64) as u64) as usize];
    let mut acc = BigUint::from(1 + e);
    for k in 0..e {
        acc += term(e - k);
    }
    for k in 0..e.saturating_sub(1) {
        for t in 1..e - k {
            acc += term(t);
        }
    }
    acc
}

/// A λ-constacyclic code: one ideal spec per factor, in factor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub params: AmbientParams,
    pub components: Vec<IdealSpec>,
}

impl CodeSpec {
    pub fn validate(&self, fd: &FactorData) -> Result<()> {
        if self.params != fd.params {
            return Err(Error::ContextMismatch);
        }
        if self.components.len() != fd.r() {
            return Err(Error::LengthMismatch {
                expected: fd.r(),
                got: self.components.len(),
            });
        }
        for (j, c) in self.components.iter().enumerate() {
            c.validate(fd.chain(j))?;
        }
        Ok(())
    }
}

pub fn code_size(fd: &FactorData, code: &CodeSpec) -> BigUint {
    code.components
        .iter()
        .enumerate()
        .map(|(j, c)| c.size(fd.chain(j)))
        .product()
}

pub fn count_codes(fd: &FactorData) -> BigUint {
    let p = fd.field().p() as u64;
    let m = fd.field().m();
    fd.factors
        .iter()
        .map(|f| count_ideals(p, m, f.d as u32, fd.params.s))
        .product()
}

/// Codes in odometer order (last factor fastest), optionally truncated.
pub fn enumerate_codes(fd: &FactorData, limit: Option<u64>) -> impl Iterator<Item = CodeSpec> + '_ {
    let makers: Vec<Maker<'_, IdealSpec>> = fd
        .chains()
        .iter()
        .map(|c| -> Maker<'_, IdealSpec> { Box::new(move || Box::new(enumerate_ideals(c))) })
        .collect();
    let params = fd.params.clone();
    Product::new(makers)
        .map(move |components| CodeSpec {
            params: params.clone(),
            components,
        })
        .take(limit.map_or(usize::MAX, |l| l.min(usize::MAX as u64) as usize))
}

/// Every codeword of `code` as an element of the ambient ring.
pub fn code_codewords<'a>(
    fd: &'a FactorData,
    code: &CodeSpec,
    bound: u64,
) -> Result<impl Iterator<Item = AmbientElem> + 'a> {
    code.validate(fd)?;
    let size = code_size(fd, code);
    if size > BigUint::from(bound) {
        return Err(Error::TooLarge(format!(
            "{size} codewords exceed the bound {bound}"
        )));
    }
    let makers: Vec<Maker<'a, AmbientElem>> = code
        .components
        .iter()
        .enumerate()
        .map(|(j, spec)| -> Maker<'a, AmbientElem> {
            let spec = spec.clone();
            Box::new(move || {
                Box::new(
                    spec.elements(fd.chain(j))
                        .map(move |part| fd.embed(j, &part)),
                )
            })
        })
        .collect();
    Ok(Product::new(makers).map(move |parts| {
        parts
            .iter()
            .fold(AmbientElem::default(), |acc, x| fd.add(&acc, x))
    }))
}

pub(crate) type Maker<'a, T> = Box<dyn Fn() -> Box<dyn Iterator<Item = T> + 'a> + 'a>;

/// Cartesian product of restartable streams, last stream fastest.
pub(crate) struct Product<'a, T> {
    makers: Vec<Maker<'a, T>>,
    iters: Vec<Box<dyn Iterator<Item = T> + 'a>>,
    cur: Vec<T>,
    started: bool,
    done: bool,
}

impl<'a, T: Clone> Product<'a, T> {
    pub(crate) fn new(makers: Vec<Maker<'a, T>>) -> Self {
        Product {
            makers,
            iters: Vec::new(),
            cur: Vec::new(),
            started: false,
            done: false,
        }
    }
}

impl<T: Clone> Iterator for Product<'_, T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            for mk in &self.makers {
                let mut it = mk();
                match it.next() {
                    Some(v) => self.cur.push(v),
                    None => {
                        self.done = true;
                        return None;
                    }
                }
                self.iters.push(it);
            }
            return Some(self.cur.clone());
        }
        let mut j = self.iters.len();
        loop {
            if j == 0 {
                self.done = true;
                return None;
            }
            j -= 1;
            if let Some(v) = self.iters[j].next() {
                self.cur[j] = v;
                for i in j + 1..self.iters.len() {
                    self.iters[i] = (self.makers[i])();
                    self.cur[i] = self.iters[i].next().expect("stream was nonempty before");
                }
                return Some(self.cur.clone());
            }
        }
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn closed_form_equals_sum_form(p in prop::sample::select(vec![2u64, 3, 5, 7, 13, 19]), m in 1u32..3, d in prop::sample::select(vec![1u32, 2, 4]), s in 1u32..3) {
            prop_assert_eq!(count_ideals(p, m, d, s), count_ideals_sumform(p, m, d, s));
            let by: BigUint = count_by_case(p, m, d, s).iter().sum();
            prop_assert_eq!(by, count_ideals(p, m, d, s));
        }
    }
}
