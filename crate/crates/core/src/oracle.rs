//! Brute-force reference computations for small rings.
//!
//! Everything here works with F_p-subspaces in reduced row echelon form and
//! never looks at the five-family description, so it can be used to check it.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::chain::{ChainCtx, ChainElem};
use crate::decomp::{AmbientElem, AmbientParams, FactorData};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::ideals::{enumerate_ideals, IdealSpec};
use crate::poly::Poly;

/// Largest |K| for closure-based submodule enumeration.
pub const SUBMODULE_BUDGET: u64 = 5_000;
/// Largest |K²| for the all-pairs span enumeration (|K²|² spans).
pub const PAIR_SPAN_BUDGET: u64 = 1_000;
/// Largest |R|^N for scans of the whole ambient space.
pub const AMBIENT_BUDGET: u64 = 10_000_000;
/// Largest Σ |K²| over specs for the unrestricted membership scan.
pub const MEMBERSHIP_SCAN_BUDGET: u64 = 20_000_000;

/// An F_p-subspace of F_p^dim in reduced row echelon form; equal subspaces
/// have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
}

fn pivot(v: &[u32]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

impl Subspace {
    pub fn zero(p: u32, dim: usize) -> Subspace {
        Subspace {
            p,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.rank() as u32)
    }

    fn axpy(&self, v: &mut [u32], c: u32, row: &[u32]) {
        // v -= c·row
        let p = self.p;
        for (x, &r) in v.iter_mut().zip(row) {
            if r != 0 {
                *x = (*x + p - (c * r) % p) % p;
            }
        }
    }

    pub fn reduce(&self, v: &mut [u32]) {
        for row in &self.rows {
            let c = pivot(row).unwrap();
            if v[c] != 0 {
                let k = v[c];
                self.axpy(v, k, row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds v to the span; false if it was already there.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(c) = pivot(&w) else {
            return false;
        };
        let inv = FieldCtx::prime(self.p as u64)
            .unwrap()
            .inv(FieldElem(w[c]))
            .unwrap()
            .raw();
        for x in w.iter_mut() {
            *x = *x * inv % self.p;
        }
        for i in 0..self.rows.len() {
            let k = self.rows[i][c];
            if k != 0 {
                let mut row = std::mem::take(&mut self.rows[i]);
                self.axpy(&mut row, k, &w);
                self.rows[i] = row;
            }
        }
        let at = self
            .rows
            .iter()
            .position(|r| pivot(r).unwrap() > c)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, w);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| pivot(r).unwrap()).collect()
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    /// Every vector of the subspace.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let r = self.rank();
        let total = (self.p as u64).pow(r as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u32; self.dim];
            for row in &self.rows {
                let c = (idx % self.p as u64) as u32;
                idx /= self.p as u64;
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = (*x + c * y) % self.p;
                    }
                }
            }
            v
        })
    }

    /// Nonzero vectors supported on the non-pivot coordinates; together with 0
    /// they form a complement of the subspace.
    pub fn complement_vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let piv: HashSet<usize> = self.pivots().into_iter().collect();
        let free: Vec<usize> = (0..self.dim).filter(|i| !piv.contains(i)).collect();
        let total = (self.p as u64).pow(free.len() as u32);
        (1..total).map(move |mut idx| {
            let mut v = vec![0u32; self.dim];
            for &i in &free {
                v[i] = (idx % self.p as u64) as u32;
                idx /= self.p as u64;
            }
            v
        })
    }
}

/// An F_p-linear map given by the images of the unit vectors.
#[derive(Clone, Debug)]
pub struct LinMap {
    p: u32,
    images: Vec<Vec<u32>>,
}

impl LinMap {
    pub fn from_fn(p: u32, dim: usize, f: impl Fn(&[u32]) -> Vec<u32>) -> LinMap {
        let images = (0..dim)
            .map(|i| {
                let mut e = vec![0u32; dim];
                e[i] = 1;
                f(&e)
            })
            .collect();
        LinMap { p, images }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.images.first().map_or(0, |r| r.len())];
        for (&c, img) in v.iter().zip(&self.images) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(img) {
                *o = (*o + c * x) % self.p;
            }
        }
        out
    }
}

/// A finite module over F_p presented by generating operators; submodules are
/// the subspaces stable under them.
pub struct Model {
    p: u32,
    dim: usize,
    /// Multiplication by x and by the field generator (both coordinates).
    module_ops: Vec<LinMap>,
    /// (a, b) ↦ (0, a)
    u_op: LinMap,
}

impl Model {
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn closure(&self, gens: &[Vec<u32>], with_u: bool) -> Subspace {
        let mut s = Subspace::zero(self.p, self.dim);
        let mut queue = Vec::new();
        for g in gens {
            if s.insert(g) {
                queue.push(g.clone());
            }
        }
        while let Some(v) = queue.pop() {
            let ops = self.module_ops.iter().chain(with_u.then_some(&self.u_op));
            for op in ops {
                let w = op.apply(&v);
                if s.insert(&w) {
                    queue.push(w);
                }
            }
        }
        s
    }

    /// Smallest submodule containing `gens`.
    pub fn module_closure(&self, gens: &[Vec<u32>]) -> Subspace {
        self.closure(gens, false)
    }

    /// Smallest submodule stable under u containing `gens`.
    pub fn ideal_closure(&self, gens: &[Vec<u32>]) -> Subspace {
        self.closure(gens, true)
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        s.rows()
            .iter()
            .all(|r| self.module_ops.iter().all(|op| s.contains(&op.apply(r))))
    }

    /// Condition (a, b) ∈ S ⇒ (0, a) ∈ S.
    pub fn is_u_stable(&self, s: &Subspace) -> bool {
        s.rows().iter().all(|r| s.contains(&self.u_op.apply(r)))
    }
}

fn push_digits(k: &FieldCtx, c: FieldElem, out: &mut Vec<u32>) {
    out.extend(k.coeffs(c));
}

fn poly_digits(k: &FieldCtx, a: &Poly, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len * k.m() as usize);
    for i in 0..len {
        push_digits(k, a.coeff(i), &mut out);
    }
    out
}

fn digits_poly(k: &FieldCtx, v: &[u32]) -> Poly {
    let m = k.m() as usize;
    Poly::from_coeffs(v.chunks(m).map(|c| k.from_coeffs(c).unwrap()).collect())
}

/// K² as an F_p-space: A's coordinates, then B's.
pub struct KSquare<'a> {
    pub ctx: &'a ChainCtx,
    pub model: Model,
    half: usize,
}

impl<'a> KSquare<'a> {
    pub fn new(ctx: &'a ChainCtx) -> KSquare<'a> {
        let k = ctx.field();
        let p = k.p();
        let half = ctx.d() * ctx.e() * k.m() as usize;
        let dim = 2 * half;
        let mut ks = KSquare {
            ctx,
            model: Model {
                p,
                dim,
                module_ops: Vec::new(),
                u_op: LinMap {
                    p,
                    images: Vec::new(),
                },
            },
            half,
        };
        let x = ctx.reduce(&Poly::x());
        let g = ctx.constant(k.generator());
        let mut ops = vec![LinMap::from_fn(p, dim, |v| {
            let (a, b) = ks.from_vec(v);
            ks.to_vec(&ctx.mul(&a, &x), &ctx.mul(&b, &x))
        })];
        if k.m() > 1 {
            ops.push(LinMap::from_fn(p, dim, |v| {
                let (a, b) = ks.from_vec(v);
                ks.to_vec(&ctx.mul(&a, &g), &ctx.mul(&b, &g))
            }));
        }
        let u_op = LinMap::from_fn(p, dim, |v| {
            let (a, _) = ks.from_vec(v);
            ks.to_vec(&ctx.zero(), &a)
        });
        ks.model.module_ops = ops;
        ks.model.u_op = u_op;
        ks
    }

    pub fn to_vec(&self, a: &ChainElem, b: &ChainElem) -> Vec<u32> {
        let k = self.ctx.field();
        let len = self.ctx.d() * self.ctx.e();
        let mut v = poly_digits(k, a.poly(), len);
        v.extend(poly_digits(k, b.poly(), len));
        v
    }

    pub fn from_vec(&self, v: &[u32]) -> (ChainElem, ChainElem) {
        let k = self.ctx.field();
        (
            ChainElem(digits_poly(k, &v[..self.half])),
            ChainElem(digits_poly(k, &v[self.half..])),
        )
    }

    fn pair_rows(&self, rows: &[(ChainElem, ChainElem)]) -> Vec<Vec<u32>> {
        rows.iter().map(|(a, b)| self.to_vec(a, b)).collect()
    }

    /// Submodule generated by rows of a generator matrix.
    pub fn span(&self, rows: &[(ChainElem, ChainElem)]) -> Subspace {
        self.model.module_closure(&self.pair_rows(rows))
    }

    /// Ideal of K + uK generated by elements A + uB.
    pub fn ideal_span(&self, gens: &[(ChainElem, ChainElem)]) -> Subspace {
        self.model.ideal_closure(&self.pair_rows(gens))
    }
}

fn check_budget(ctx: &ChainCtx) -> Result<()> {
    if ctx.size() > BigUint::from(SUBMODULE_BUDGET) {
        return Err(Error::TooLarge(format!(
            "|K| = {} exceeds the oracle budget",
            ctx.size()
        )));
    }
    Ok(())
}

/// Closed-form count Σ_{j=0}^{e} (2j+1) q^{d(e−j)} of submodules of K².
pub fn submodule_count_formula(ctx: &ChainCtx) -> BigUint {
    let e = ctx.e();
    let qd = BigUint::from(ctx.field().q()).pow(ctx.d() as u32);
    (0..=e)
        .map(|j| BigUint::from(2 * j + 1) * qd.pow((e - j) as u32))
        .sum()
}

/// All submodules of K², found from 0 by repeatedly adjoining one vector v
/// with f·v already inside. Every submodule is reached: a strictly larger T
/// contains such a v (take the last nonzero f-multiple of any w ∈ T \ S).
pub fn brute_submodules(ctx: &ChainCtx) -> Result<HashSet<Subspace>> {
    check_budget(ctx)?;
    let ks = KSquare::new(ctx);
    let p = ctx.field().p();
    let dim = ks.model.dim;
    let f = ChainElem(ctx.f().clone());
    let mul_f = LinMap::from_fn(p, dim, |v| {
        let (a, b) = ks.from_vec(v);
        ks.to_vec(&ctx.mul(&a, &f), &ctx.mul(&b, &f))
    });
    let zero = Subspace::zero(p, dim);
    let mut seen: HashSet<Subspace> = HashSet::new();
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(s) = queue.pop() {
        for v in colon_complement(&s, &mul_f) {
            let mut gens = s.rows().to_vec();
            gens.push(v);
            let t = ks.model.module_closure(&gens);
            if seen.insert(t.clone()) {
                queue.push(t);
            }
        }
    }
    Ok(seen)
}

/// Representatives (first nonzero coordinate 1) of the nonzero classes of (S : f)/S.
fn colon_complement(s: &Subspace, mul_f: &LinMap) -> Vec<Vec<u32>> {
    let p = s.p;
    let dim = s.dim;
    // kernel of v ↦ (f·v mod S): eliminate on [residual | identity]
    let mut rows: Vec<(Vec<u32>, Vec<u32>)> = (0..dim)
        .map(|i| {
            let mut e = vec![0u32; dim];
            e[i] = 1;
            let mut r = mul_f.apply(&e);
            s.reduce(&mut r);
            (r, e)
        })
        .collect();
    let fp = FieldCtx::prime(p as u64).unwrap();
    let mut kernel = Vec::new();
    let mut used = vec![false; rows.len()];
    for col in 0..dim {
        let Some(pi) = (0..rows.len()).find(|&i| !used[i] && rows[i].0[col] != 0) else {
            continue;
        };
        used[pi] = true;
        let inv = fp.inv(FieldElem(rows[pi].0[col])).unwrap().raw();
        let (pr, pe) = rows[pi].clone();
        let pr: Vec<u32> = pr.iter().map(|x| x * inv % p).collect();
        let pe: Vec<u32> = pe.iter().map(|x| x * inv % p).collect();
        rows[pi] = (pr.clone(), pe.clone());
        for (i, (r, e)) in rows.iter_mut().enumerate() {
            let c = r[col];
            if i == pi || c == 0 {
                continue;
            }
            for j in 0..dim {
                r[j] = (r[j] + p - c * pr[j] % p) % p;
                e[j] = (e[j] + p - c * pe[j] % p) % p;
            }
        }
    }
    for (i, (r, e)) in rows.into_iter().enumerate() {
        if !used[i] && r.iter().all(|&x| x == 0) {
            kernel.push(e);
        }
    }
    let mut t = s.clone();
    let mut dirs = Vec::new();
    for v in kernel {
        if t.insert(&v) {
            dirs.push(v);
        }
    }
    let w = dirs.len() as u32;
    let mut out = Vec::new();
    for idx in 1..(p as u64).pow(w) {
        let coeffs: Vec<u32> = (0..w)
            .map(|i| ((idx / (p as u64).pow(i)) % p as u64) as u32)
            .collect();
        if coeffs.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut v = vec![0u32; dim];
        for (c, d) in coeffs.iter().zip(&dirs) {
            for (x, &y) in v.iter_mut().zip(d) {
                *x = (*x + c * y) % p;
            }
        }
        out.push(v);
    }
    out
}

/// All submodules of K² as spans of every ordered pair of elements.
pub fn brute_submodules_by_pairs(ctx: &ChainCtx) -> Result<HashSet<Subspace>> {
    let sq = ctx.size().pow(2);
    if sq > BigUint::from(PAIR_SPAN_BUDGET) {
        return Err(Error::TooLarge(format!(
            "|K²| = {sq} exceeds the pair-span budget"
        )));
    }
    let ks = KSquare::new(ctx);
    let all: Vec<Vec<u32>> = Subspace::full(ctx.field().p(), ks.model.dim)
        .vectors()
        .collect();
    let mut out = HashSet::new();
    for a in &all {
        for b in &all {
            out.insert(ks.model.module_closure(&[a.clone(), b.clone()]));
        }
    }
    Ok(out)
}

impl Subspace {
    pub fn full(p: u32, dim: usize) -> Subspace {
        let rows = (0..dim)
            .map(|i| {
                let mut e = vec![0u32; dim];
                e[i] = 1;
                e
            })
            .collect();
        Subspace { p, dim, rows }
    }
}

/// Submodules satisfying (a, b) ∈ S ⇒ (0, a) ∈ S, i.e. the ideals of K + uK.
pub fn brute_u_stable(ctx: &ChainCtx) -> Result<HashSet<Subspace>> {
    let ks = KSquare::new(ctx);
    Ok(brute_submodules(ctx)?
        .into_iter()
        .filter(|s| ks.model.is_u_stable(s))
        .collect())
}

/// Spans of the nine generator-matrix families, with multiplicity.
pub fn generator_families(ctx: &ChainCtx) -> Result<Vec<Subspace>> {
    check_budget(ctx)?;
    let ks = KSquare::new(ctx);
    let e = ctx.e();
    let f = |i: usize| ctx.f_pow(i);
    let z = ctx.zero();
    let one = ctx.one();
    let rs = |lo: usize, hi: usize| ctx.residue_set(lo, hi).unwrap();
    let mut mats: Vec<Vec<(ChainElem, ChainElem)>> = Vec::new();
    for a in rs(0, e) {
        mats.push(vec![(one.clone(), a)]);
    }
    for k in 1..e {
        for a in rs(0, e - k) {
            mats.push(vec![(f(k), ctx.mul(&f(k), &a))]);
        }
    }
    for b in rs(0, e - 1) {
        mats.push(vec![(ctx.mul(&f(1), &b), one.clone())]);
    }
    for k in 1..e {
        for b in rs(0, e - k - 1) {
            mats.push(vec![(ctx.mul(&f(k + 1), &b), f(k))]);
        }
    }
    for k in 0..=e {
        mats.push(vec![(f(k), z.clone()), (z.clone(), f(k))]);
    }
    for t in 1..e {
        for c in rs(0, t) {
            mats.push(vec![(one.clone(), c), (z.clone(), f(t))]);
        }
    }
    for k in 1..e.saturating_sub(1) {
        for t in 1..e - k {
            for c in rs(0, t) {
                mats.push(vec![(f(k), ctx.mul(&f(k), &c)), (z.clone(), f(k + t))]);
            }
        }
    }
    for t in 1..e {
        for c in rs(1, t) {
            mats.push(vec![(c, one.clone()), (f(t), z.clone())]);
        }
    }
    for k in 1..e.saturating_sub(1) {
        for t in 1..e - k {
            for c in rs(1, t) {
                mats.push(vec![(ctx.mul(&f(k), &c), f(k)), (f(k + t), z.clone())]);
            }
        }
    }
    Ok(mats.iter().map(|m| ks.span(m)).collect())
}

/// The ideal a spec denotes, computed as a closure of its generators.
pub fn spec_span(ks: &KSquare<'_>, spec: &IdealSpec) -> Subspace {
    ks.ideal_span(&spec.generators(ks.ctx))
}

/// Outcome of comparing the family-wise enumeration against the oracle.
#[derive(Debug, Default)]
pub struct ClassificationCheck {
    pub submodules: usize,
    pub submodule_formula: BigUint,
    pub family_spans: usize,
    pub family_distinct: usize,
    pub families_equal_submodules: bool,
    pub u_stable: usize,
    pub specs: usize,
    pub count_ideals: BigUint,
    pub specs_equal_u_stable: bool,
    pub sizes_match: bool,
    pub membership_match: bool,
}

impl ClassificationCheck {
    pub fn passed(&self) -> bool {
        BigUint::from(self.submodules) == self.submodule_formula
            && BigUint::from(self.family_spans) == self.submodule_formula
            && self.family_distinct == self.submodules
            && self.families_equal_submodules
            && BigUint::from(self.u_stable) == self.count_ideals
            && BigUint::from(self.specs) == self.count_ideals
            && self.specs_equal_u_stable
            && self.sizes_match
            && self.membership_match
    }
}

/// Runs every oracle comparison for one chain ring.
pub fn check_classification(ctx: &ChainCtx) -> Result<ClassificationCheck> {
    let ks = KSquare::new(ctx);
    let subs = brute_submodules(ctx)?;
    let fam = generator_families(ctx)?;
    let fam_set: HashSet<Subspace> = fam.iter().cloned().collect();
    let ustable: HashSet<Subspace> = subs
        .iter()
        .filter(|s| ks.model.is_u_stable(s))
        .cloned()
        .collect();
    let specs: Vec<IdealSpec> = enumerate_ideals(ctx).collect();
    let spans: Vec<Subspace> = specs.iter().map(|s| spec_span(&ks, s)).collect();
    let span_set: HashSet<Subspace> = spans.iter().cloned().collect();
    let sizes_match = specs
        .iter()
        .zip(&spans)
        .all(|(s, sp)| s.size(ctx) == sp.size());
    let membership_match = check_membership(&ks, &specs, &spans);
    Ok(ClassificationCheck {
        submodules: subs.len(),
        submodule_formula: submodule_count_formula(ctx),
        family_spans: fam.len(),
        family_distinct: fam_set.len(),
        families_equal_submodules: fam_set == subs,
        u_stable: ustable.len(),
        specs: specs.len(),
        count_ideals: ctx.count_ideals(),
        specs_equal_u_stable: span_set.len() == specs.len() && span_set == ustable,
        sizes_match,
        membership_match,
    })
}

/// The membership test of each spec must cut out exactly its span. Every
/// element of the span must pass; off the span, either every element of K²
/// is scanned, or (for bigger rings) the nonzero vectors of a complement,
/// which suffices because the membership test is F_p-linear.
fn check_membership(ks: &KSquare<'_>, specs: &[IdealSpec], spans: &[Subspace]) -> bool {
    let ctx = ks.ctx;
    let total = BigUint::from(specs.len()) * ctx.size().pow(2);
    let full_scan = total <= BigUint::from(MEMBERSHIP_SCAN_BUDGET);
    let everything = Subspace::full(ctx.field().p(), ks.model.dim);
    for (spec, span) in specs.iter().zip(spans) {
        let inside = span.vectors().all(|v| {
            let (a, b) = ks.from_vec(&v);
            spec.contains(ctx, &a, &b)
        });
        if !inside {
            return false;
        }
        let outside_ok = if full_scan {
            everything.vectors().all(|v| {
                let (a, b) = ks.from_vec(&v);
                spec.contains(ctx, &a, &b) == span.contains(&v)
            })
        } else {
            span.complement_vectors().all(|v| {
                let (a, b) = ks.from_vec(&v);
                !spec.contains(ctx, &a, &b)
            })
        };
        if !outside_ok {
            return false;
        }
    }
    true
}

/// R^N = (F_q + uF_q)^N as an F_p-space: a₀'s coordinates, then a₁'s.
pub struct Ambient<'a> {
    pub fd: &'a FactorData,
    pub model: Model,
}

impl<'a> Ambient<'a> {
    pub fn new(fd: &'a FactorData) -> Ambient<'a> {
        let k = fd.field();
        let p = k.p();
        let n = fd.len();
        let dim = 2 * n * k.m() as usize;
        let mut am = Ambient {
            fd,
            model: Model {
                p,
                dim,
                module_ops: Vec::new(),
                u_op: LinMap {
                    p,
                    images: Vec::new(),
                },
            },
        };
        let x = AmbientElem::new(Poly::x(), Poly::zero());
        let x = AmbientElem::new(fd.reduce(&x.a0), Poly::zero());
        let g = AmbientElem::new(Poly::constant(k.generator()), Poly::zero());
        let mut ops = vec![LinMap::from_fn(p, dim, |v| {
            am.to_vec(&fd.mul(&am.from_vec(v), &x))
        })];
        if k.m() > 1 {
            ops.push(LinMap::from_fn(p, dim, |v| {
                am.to_vec(&fd.mul(&am.from_vec(v), &g))
            }));
        }
        let u_op = LinMap::from_fn(p, dim, |v| {
            let a = am.from_vec(v);
            am.to_vec(&AmbientElem::new(Poly::zero(), a.a0))
        });
        am.model.module_ops = ops;
        am.model.u_op = u_op;
        am
    }

    pub fn to_vec(&self, a: &AmbientElem) -> Vec<u32> {
        let k = self.fd.field();
        let n = self.fd.len();
        let mut v = poly_digits(k, &a.a0, n);
        v.extend(poly_digits(k, &a.a1, n));
        v
    }

    pub fn from_vec(&self, v: &[u32]) -> AmbientElem {
        let k = self.fd.field();
        let h = v.len() / 2;
        AmbientElem::new(digits_poly(k, &v[..h]), digits_poly(k, &v[h..]))
    }

    pub fn span(&self, words: &[AmbientElem]) -> Subspace {
        let mut s = Subspace::zero(self.model.p, self.model.dim);
        for w in words {
            s.insert(&self.to_vec(w));
        }
        s
    }

    /// Checks closure under x-multiplication (the constacyclic shift), u and
    /// the field generator.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        self.model.is_submodule(s) && self.model.is_u_stable(s)
    }
}

fn ambient_budget(params: &AmbientParams) -> Result<u64> {
    let size = params.ambient_size();
    if size > BigUint::from(AMBIENT_BUDGET) {
        return Err(Error::TooLarge(format!(
            "|R|^N = {size} exceeds the ambient budget"
        )));
    }
    Ok(u64::try_from(size).unwrap())
}

/// Ideals of R[x]/(x^N − λ) assembled from the per-factor brute-force sets.
pub fn brute_ambient_ideals(fd: &FactorData) -> Result<Vec<Subspace>> {
    ambient_budget(&fd.params)?;
    let am = Ambient::new(fd);
    let mut per_factor: Vec<Vec<Vec<AmbientElem>>> = Vec::new();
    for j in 0..fd.r() {
        let ctx = fd.chain(j);
        let ks = KSquare::new(ctx);
        let mut sets: Vec<Subspace> = brute_u_stable(ctx)?.into_iter().collect();
        sets.sort_by(|a, b| a.rows.cmp(&b.rows));
        per_factor.push(
            sets.iter()
                .map(|s| {
                    s.rows()
                        .iter()
                        .map(|r| fd.embed(j, &ks.from_vec(r)))
                        .collect()
                })
                .collect(),
        );
    }
    let mut out = vec![Vec::new()];
    for sets in &per_factor {
        let mut next = Vec::with_capacity(out.len() * sets.len());
        for acc in &out {
            for s in sets {
                let mut w: Vec<AmbientElem> = acc.clone();
                w.extend(s.iter().cloned());
                next.push(w);
            }
        }
        out = next;
    }
    Ok(out.iter().map(|w| am.span(w)).collect())
}

/// Summary of the ambient-ring comparison.
#[derive(Debug)]
pub struct AmbientCheck {
    pub assembled: usize,
    pub distinct: usize,
    pub expected: BigUint,
    pub all_closed: bool,
    pub principal_covered: bool,
    pub sums_covered: bool,
    pub matches_enumeration: bool,
}

impl AmbientCheck {
    pub fn passed(&self) -> bool {
        BigUint::from(self.distinct) == self.expected
            && self.assembled == self.distinct
            && self.all_closed
            && self.principal_covered
            && self.sums_covered
            && self.matches_enumeration
    }
}

/// Assembled ideals are ideals, every principal ideal and every sum of two
/// ideals is among them (so nothing is missing), and they agree with the
/// spans of the enumerated code specs.
pub fn check_ambient(fd: &FactorData) -> Result<AmbientCheck> {
    let total = ambient_budget(&fd.params)?;
    let am = Ambient::new(fd);
    let ideals = brute_ambient_ideals(fd)?;
    let set: HashSet<Subspace> = ideals.iter().cloned().collect();
    let all_closed = ideals.iter().all(|s| am.is_ideal(s));
    let everything = Subspace::full(am.model.p, am.model.dim);
    debug_assert_eq!(everything.size(), BigUint::from(total));
    let principal_covered = everything
        .vectors()
        .all(|v| set.contains(&am.model.ideal_closure(&[v])));
    let sums_covered = ideals
        .iter()
        .all(|a| ideals.iter().all(|b| set.contains(&a.join(b))));
    let mut from_specs = HashSet::new();
    for code in crate::ideals::enumerate_codes(fd, None) {
        let mut gens = Vec::new();
        for (j, spec) in code.components.iter().enumerate() {
            for g in spec.generators(fd.chain(j)) {
                gens.push(am.to_vec(&fd.embed(j, &g)));
            }
        }
        from_specs.insert(am.model.ideal_closure(&gens));
    }
    Ok(AmbientCheck {
        assembled: ideals.len(),
        distinct: set.len(),
        expected: crate::ideals::count_codes(fd),
        all_closed,
        principal_covered,
        sums_covered,
        matches_enumeration: from_specs == set,
    })
}

/// Dense integer key of a vector of R^N; needs q^{2N} < 2^64.
pub fn vector_key(params: &AmbientParams, a: &AmbientElem) -> u64 {
    let q = params.field.q() as u64;
    let mut key = 0u64;
    for i in (0..params.len()).rev() {
        key = key * q * q + a.a0.coeff(i).raw() as u64 + q * a.a1.coeff(i).raw() as u64;
    }
    key
}

/// All vectors of R^N orthogonal to every codeword, found by scanning R^N.
/// The result is returned as sorted keys (see `vector_key`).
pub fn brute_dual(codewords: &[AmbientElem], params: &AmbientParams) -> Result<Vec<u64>> {
    let total = ambient_budget(params)?;
    let k = params.field.clone();
    let n = params.len();
    // an F_p basis of the code's span; orthogonality to it is orthogonality to the code
    let dim = 2 * n * k.m() as usize;
    let mut basis = Subspace::zero(k.p(), dim);
    let mut reps = Vec::new();
    for w in codewords {
        let mut v = poly_digits(&k, &w.a0, n);
        v.extend(poly_digits(&k, &w.a1, n));
        if basis.insert(&v) {
            reps.push(w);
        }
    }
    if basis.size() != BigUint::from(codewords.len()) {
        return Err(Error::InvalidSpec("codeword set is not F_p-linear".into()));
    }
    let reps: Vec<(Vec<FieldElem>, Vec<FieldElem>)> = reps
        .iter()
        .map(|w| {
            (
                (0..n).map(|i| w.a0.coeff(i)).collect(),
                (0..n).map(|i| w.a1.coeff(i)).collect(),
            )
        })
        .collect();
    let q = k.q();
    let mut a = vec![FieldElem::ZERO; n];
    let mut b = vec![FieldElem::ZERO; n];
    let mut ranks = vec![0u32; 2 * n];
    let mut out = Vec::new();
    for idx in 0..total {
        let orth = reps.iter().all(|(c, d)| {
            let mut s0 = FieldElem::ZERO;
            let mut s1 = FieldElem::ZERO;
            for i in 0..n {
                s0 = k.add(s0, k.mul(a[i], c[i]));
                s1 = k.add(s1, k.add(k.mul(a[i], d[i]), k.mul(b[i], c[i])));
            }
            s0.is_zero() && s1.is_zero()
        });
        if orth {
            let el = AmbientElem::new(Poly::from_coeffs(a.clone()), Poly::from_coeffs(b.clone()));
            out.push(vector_key(params, &el));
        }
        if idx + 1 == total {
            break;
        }
        let mut slot = 0;
        loop {
            ranks[slot] += 1;
            let wrap = ranks[slot] == q;
            if wrap {
                ranks[slot] = 0;
            }
            let val = FieldElem(ranks[slot]);
            if slot < n {
                a[slot] = val;
            } else {
                b[slot - n] = val;
            }
            if !wrap {
                break;
            }
            slot += 1;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Sorted keys of a list of codewords.
pub fn keys(params: &AmbientParams, words: impl IntoIterator<Item = AmbientElem>) -> Vec<u64> {
    let mut v: Vec<u64> = words.into_iter().map(|w| vector_key(params, &w)).collect();
    v.sort_unstable();
    v
}

/// K = F_q[x]/(f^{p^s}) for the smallest monic irreducible f of degree d with
/// nonzero constant term; the ring depends only on (q, d, p^s) up to isomorphism.
pub fn standard_chain(p: u64, m: u32, d: usize, s: u32) -> Result<ChainCtx> {
    let k = FieldCtx::new(p, m, None)?;
    let q = k.q();
    let e = (p as usize).pow(s);
    let mut tail = vec![0u32; d];
    loop {
        let mut c: Vec<FieldElem> = tail.iter().map(|&r| k.from_rank(r)).collect();
        c.push(k.one());
        let f = Poly::from_coeffs(c);
        if !f.coeff(0).is_zero() && crate::poly::is_irreducible(&k, &f) {
            return ChainCtx::new(k, f, e);
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Err(Error::InvalidSpec(format!("no irreducible of degree {d}")));
            }
            i -= 1;
            tail[i] += 1;
            if tail[i] < q {
                break;
            }
            tail[i] = 0;
        }
    }
}

/// Summary of the dual comparison over every code of one ambient ring.
#[derive(Debug, Default)]
pub struct DualCheck {
    pub codes: usize,
    /// Codes whose dual (general construction) matches the brute-force dual.
    pub general_matches: usize,
    /// Same for the in-ring construction, when λ = ±1.
    pub nu_matches: Option<usize>,
    pub size_products: usize,
    pub double_duals: usize,
}

impl DualCheck {
    pub fn passed(&self) -> bool {
        self.general_matches == self.codes
            && self.nu_matches.is_none_or(|n| n == self.codes)
            && self.size_products == self.codes
            && self.double_duals == self.codes
    }
}

pub fn check_duals(fd: &FactorData) -> Result<DualCheck> {
    use crate::dual::{dual_code, dual_code_nu};
    use crate::ideals::{code_codewords, code_size, enumerate_codes};
    let params = &fd.params;
    let total = BigUint::from(ambient_budget(params)?);
    let fd_hat = FactorData::build(&params.dual())?;
    let mut chk = DualCheck {
        nu_matches: fd.pairing.as_ref().map(|_| 0),
        ..Default::default()
    };
    for code in enumerate_codes(fd, None) {
        chk.codes += 1;
        let words: Vec<AmbientElem> = code_codewords(fd, &code, AMBIENT_BUDGET)?.collect();
        let brute = brute_dual(&words, params)?;
        if code_size(fd, &code) * BigUint::from(brute.len()) == total {
            chk.size_products += 1;
        }
        let general = dual_code(fd, &code)?.to_code_spec(&fd_hat)?;
        let gen_words = code_codewords(&fd_hat, &general, AMBIENT_BUDGET)?;
        if keys(&fd_hat.params, gen_words) == brute {
            chk.general_matches += 1;
        }
        let back = dual_code(&fd_hat, &general)?.to_code_spec(fd)?;
        let mut double_ok = back == code;
        if let Some(n) = chk.nu_matches.as_mut() {
            let d = dual_code_nu(fd, &code)?;
            if keys(params, code_codewords(fd, &d, AMBIENT_BUDGET)?) == brute {
                *n += 1;
            }
            double_ok &= dual_code_nu(fd, &d)? == code;
        }
        if double_ok {
            chk.double_duals += 1;
        }
    }
    Ok(chk)
}

/// Summary of the self-dual comparison for λ = ν = ±1.
#[derive(Debug, Default)]
pub struct SelfDualCheck {
    pub emitted: usize,
    pub brute_fixed_points: usize,
    pub sets_equal: bool,
    pub all_pass_predicate: bool,
    pub count_matches: bool,
}

impl SelfDualCheck {
    pub fn passed(&self) -> bool {
        self.sets_equal
            && self.all_pass_predicate
            && self.count_matches
            && self.emitted == self.brute_fixed_points
    }
}

/// Codes equal to their brute-force dual, against the structured enumeration.
pub fn check_self_dual(fd: &FactorData, nu: i8) -> Result<SelfDualCheck> {
    use crate::dual::{count_self_dual, enumerate_self_dual, is_self_dual};
    use crate::ideals::{code_codewords, enumerate_codes};
    let params = &fd.params;
    ambient_budget(params)?;
    let mut brute = HashSet::new();
    for code in enumerate_codes(fd, None) {
        let words: Vec<AmbientElem> = code_codewords(fd, &code, AMBIENT_BUDGET)?.collect();
        let mine = keys(params, words.iter().cloned());
        if brute_dual(&words, params)? == mine {
            brute.insert(mine);
        }
    }
    let mut emitted = HashSet::new();
    let mut all_pass = true;
    let mut n = 0usize;
    for code in enumerate_self_dual(fd, nu)? {
        n += 1;
        all_pass &= is_self_dual(fd, &code)?;
        emitted.insert(keys(params, code_codewords(fd, &code, AMBIENT_BUDGET)?));
    }
    Ok(SelfDualCheck {
        emitted: n,
        brute_fixed_points: brute.len(),
        sets_equal: emitted == brute && emitted.len() == n,
        all_pass_predicate: all_pass,
        count_matches: count_self_dual(fd, nu)? == BigUint::from(n),
    })
}

/// ⟨u⟩ in the λ ring has brute-force dual ⟨u⟩ in the λ⁻¹ ring.
pub fn u_ideal_is_self_dual_across(params: &AmbientParams) -> Result<bool> {
    let k = &params.field;
    let n = params.len();
    let all = Subspace::full(k.p(), n * k.m() as usize);
    let words: Vec<AmbientElem> = all
        .vectors()
        .map(|v| AmbientElem::new(Poly::zero(), digits_poly(k, &v)))
        .collect();
    let brute = brute_dual(&words, params)?;
    Ok(brute == keys(&params.dual(), words))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome<T: std::fmt::Debug>(
    name: String,
    r: Result<T>,
    ok: impl Fn(&T) -> bool,
) -> CheckOutcome {
    match r {
        Ok(v) => CheckOutcome {
            name,
            passed: ok(&v),
            detail: format!("{v:?}"),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn ambient_fd(p: u64, s: u32, n: u64, lambda: i64) -> Result<FactorData> {
    let k = FieldCtx::prime(p)?;
    let l = k.from_int(lambda);
    FactorData::build(&AmbientParams::new(k, s, n, l)?)
}

/// The oracle comparisons behind `verify`. Quick stays within a few seconds;
/// full covers every instance of the acceptance suite.
pub fn suite(level: Level) -> Vec<CheckOutcome> {
    let rings: &[(u64, u32, usize, u32)] = match level {
        Level::Quick => &[
            (2, 1, 1, 1),
            (2, 1, 2, 1),
            (2, 1, 1, 2),
            (3, 1, 1, 1),
            (2, 2, 1, 1),
        ],
        Level::Full => &[
            (2, 1, 1, 1),
            (2, 1, 2, 1),
            (2, 1, 1, 2),
            (3, 1, 1, 1),
            (3, 1, 2, 1),
            (5, 1, 1, 1),
            (2, 2, 1, 1),
        ],
    };
    let mut out = Vec::new();
    for &(p, m, d, s) in rings {
        let r = standard_chain(p, m, d, s).and_then(|c| check_classification(&c));
        out.push(outcome(
            format!("classification p={p} m={m} d={d} s={s}"),
            r,
            |c| c.passed(),
        ));
    }
    let ambient: &[(u64, u32, u64, i64)] = match level {
        Level::Quick => &[(2, 1, 1, 1), (3, 1, 1, 1), (3, 1, 2, -1)],
        Level::Full => &[
            (2, 1, 1, 1),
            (3, 1, 1, 1),
            (3, 1, 2, 1),
            (3, 1, 2, -1),
            (2, 1, 3, 1),
        ],
    };
    for &(p, s, n, l) in ambient {
        let r = ambient_fd(p, s, n, l).and_then(|fd| check_ambient(&fd));
        out.push(outcome(
            format!("ambient ideals p={p} s={s} n={n} lambda={l}"),
            r,
            |c| c.passed(),
        ));
    }
    let duals: &[(u64, u32, u64, i64)] = match level {
        Level::Quick => &[(3, 1, 1, 1), (3, 1, 1, -1), (2, 1, 3, 1)],
        Level::Full => &[
            (3, 1, 1, 1),
            (3, 1, 1, -1),
            (3, 1, 2, 1),
            (3, 1, 2, -1),
            (2, 1, 3, 1),
        ],
    };
    for &(p, s, n, l) in duals {
        let r = ambient_fd(p, s, n, l).and_then(|fd| check_duals(&fd));
        out.push(outcome(
            format!("duals p={p} s={s} n={n} lambda={l}"),
            r,
            |c| c.passed(),
        ));
    }
    let selfdual: &[(u64, u32, u64, i64)] = match level {
        Level::Quick => &[(3, 1, 1, -1), (2, 1, 3, 1)],
        Level::Full => &[(3, 1, 1, -1), (3, 1, 2, -1), (3, 1, 2, 1), (2, 1, 3, 1)],
    };
    for &(p, s, n, l) in selfdual {
        let r =
            ambient_fd(p, s, n, l).and_then(|fd| check_self_dual(&fd, if l == 1 { 1 } else { -1 }));
        out.push(outcome(
            format!("self-dual p={p} s={s} n={n} nu={l}"),
            r,
            |c| c.passed(),
        ));
    }
    if level == Level::Full {
        let r = ambient_fd(5, 1, 1, 3).and_then(|fd| u_ideal_is_self_dual_across(&fd.params));
        out.push(outcome(
            "<u> self-dual across lambda=3, lambda=2 (p=5, N=5)".into(),
            r,
            |&b| b,
        ));
    }
    out
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
    fn subspace_rref_is_canonical() {
        let mut a = Subspace::zero(3, 3);
        a.insert(&[1, 2, 0]);
        a.insert(&[0, 1, 1]);
        let mut b = Subspace::zero(3, 3);
        b.insert(&[1, 0, 1]);
        b.insert(&[2, 1, 0]);
        assert_eq!(a, b);
        assert!(!a.insert(&[1, 0, 1]));
        assert_eq!(a.vectors().count(), 9);
        assert_eq!(a.complement_vectors().count(), 2);
    }

    #[test]
    fn submodule_counts() {
        let c = ctx(2, &[1, 1], 2);
        assert_eq!(brute_submodules(&c).unwrap().len(), 15);
        assert_eq!(submodule_count_formula(&c), BigUint::from(15u32));
        assert_eq!(
            brute_submodules_by_pairs(&c).unwrap(),
            brute_submodules(&c).unwrap()
        );
        assert_eq!(brute_u_stable(&c).unwrap().len(), 7);
        let c3 = ctx(3, &[1, 1], 3);
        assert_eq!(brute_submodules(&c3).unwrap().len(), 76);
        assert_eq!(brute_u_stable(&c3).unwrap().len(), 16);
    }

    #[test]
    fn families_on_the_smallest_ring() {
        let c = ctx(2, &[1, 1], 2);
        let chk = check_classification(&c).unwrap();
        assert!(chk.passed(), "{chk:?}");
        // family (v) with k = e is the zero module
        let ks = KSquare::new(&c);
        let zero = ks.span(&[(c.f_pow(2), c.zero()), (c.zero(), c.f_pow(2))]);
        assert_eq!(zero.rank(), 0);
    }

    #[test]
    fn ambient_small() {
        let k = FieldCtx::prime(2).unwrap();
        let fd = FactorData::build(&AmbientParams::new(k.clone(), 1, 1, k.one()).unwrap()).unwrap();
        let chk = check_ambient(&fd).unwrap();
        assert!(chk.passed(), "{chk:?}");
        assert_eq!(chk.distinct, 7);
    }

    #[test]
    fn dual_of_trivial_codes() {
        let k = FieldCtx::prime(3).unwrap();
        let params = AmbientParams::new(k.clone(), 1, 1, k.one()).unwrap();
        let all = brute_dual(&[AmbientElem::default()], &params).unwrap();
        assert_eq!(all.len(), 729);
        let fd = FactorData::build(&params).unwrap();
        let full = crate::ideals::CodeSpec {
            params: params.clone(),
            components: vec![IdealSpec::III { k: 0 }],
        };
        let words: Vec<_> = crate::ideals::code_codewords(&fd, &full, 1 << 20)
            .unwrap()
            .collect();
        assert_eq!(brute_dual(&words, &params).unwrap(), vec![0]);
    }
}
