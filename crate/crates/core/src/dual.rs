//! Euclidean duals of constacyclic codes, and self-dual codes when λ = ±1.
//!
//! The dual of a λ-constacyclic code is λ⁻¹-constacyclic. Its j-th component
//! lives over the chain ring of the monic reciprocal of f_j, and is reached
//! through a ↦ a(x⁻¹) with x⁻¹ = λ x^{N−1} in the dual ring.

use num_bigint::BigUint;
use num_traits::One;

use crate::chain::{ChainCtx, ChainElem};
use crate::decomp::{AmbientParams, FactorData};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals, ideal_from_generators, CodeSpec, IdealSpec, Maker, Product};
use crate::poly::{self, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCodeSpec {
    /// Parameters of the dual ring (λ replaced by λ⁻¹).
    pub params: AmbientParams,
    /// Monic reciprocal of f_j, in the original factor order.
    pub factors: Vec<Poly>,
    pub components: Vec<IdealSpec>,
}

impl DualCodeSpec {
    /// Reindexes the components to the factor order of `fd_hat`, the factor
    /// data of the dual ring.
    pub fn to_code_spec(&self, fd_hat: &FactorData) -> Result<CodeSpec> {
        if fd_hat.params != self.params {
            return Err(Error::ContextMismatch);
        }
        let mut comps = vec![None; fd_hat.r()];
        for (j, f) in self.factors.iter().enumerate() {
            let i = fd_hat.index_of(f).ok_or(Error::ContextMismatch)?;
            comps[i] = Some(self.components[j].clone());
        }
        let components = comps
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::ContextMismatch)?;
        Ok(CodeSpec {
            params: self.params.clone(),
            components,
        })
    }
}

/// x⁻¹ = λ x^{N−1} as an element of `target`, for the ring with x^N = λ⁻¹.
fn inv_x(target: &ChainCtx, params: &AmbientParams) -> Result<ChainElem> {
    let k = target.field();
    let xn1 = poly::modpow_u64(k, &Poly::x(), params.len() as u64 - 1, target.modulus())?;
    Ok(target.scale(&ChainElem(xn1), params.lambda))
}

/// a(x⁻¹) for a ∈ K_j, landing in the chain ring of the reciprocal factor.
pub fn inv_x_image(
    src: &ChainCtx,
    a: &ChainElem,
    target: &ChainCtx,
    params: &AmbientParams,
) -> Result<ChainElem> {
    Ok(src.substitute(a, &inv_x(target, params)?, target))
}

/// Builds the dual of one component. `params` are those of the code being
/// dualized; `f_rec` is reciprocal(f_j), not normalized, and `target` is the
/// chain ring over some monic associate of it.
pub fn dual_component(
    src: &ChainCtx,
    spec: &IdealSpec,
    target: &ChainCtx,
    f_rec: &Poly,
    params: &AmbientParams,
) -> Result<IdealSpec> {
    let e = src.e();
    let k = target.field();
    let ft = target.reduce(f_rec);
    let fpow = |i: usize| target.pow(&ft, i as u64);
    let xnd = poly::modpow_u64(
        k,
        &Poly::x(),
        (params.len() - src.d()) as u64,
        target.modulus(),
    )?;
    let c0 = target.scale(&ChainElem(xnd), k.neg(params.lambda));
    let bt = match spec.b() {
        Some(b) => inv_x_image(src, b, target, params)?,
        None => target.zero(),
    };
    let lead = |i: usize| target.mul(&target.mul(&c0, &fpow(i)), &bt);
    let gens = match *spec {
        IdealSpec::I { .. } => vec![(lead(1), target.one())],
        IdealSpec::II { k: kk, .. } => vec![(lead(1), target.one()), (fpow(e - kk), target.zero())],
        IdealSpec::III { k: kk } => vec![(fpow(e - kk), target.zero())],
        IdealSpec::IV { t, .. } => vec![(lead(e - t + 1), fpow(e - t))],
        IdealSpec::V { k: kk, t, .. } => {
            vec![
                (lead(e - kk - t + 1), fpow(e - kk - t)),
                (fpow(e - kk), target.zero()),
            ]
        }
    };
    ideal_from_generators(target, &gens)
}

/// Second construction of the same component: the annihilator generators
/// written in K_j, then carried over by a ↦ a(x⁻¹) coordinatewise.
pub fn dual_component_via_annihilator(
    src: &ChainCtx,
    spec: &IdealSpec,
    target: &ChainCtx,
    params: &AmbientParams,
) -> Result<IdealSpec> {
    let e = src.e();
    let f = |i: usize| src.f_pow(i);
    let b = spec.b().cloned().unwrap_or_default();
    let neg_fb = |i: usize| src.neg(&src.mul(&f(i), &b));
    let gens = match *spec {
        IdealSpec::I { .. } => vec![(neg_fb(1), src.one())],
        IdealSpec::II { k, .. } => vec![(neg_fb(1), src.one()), (f(e - k), src.zero())],
        IdealSpec::III { k } => vec![(f(e - k), src.zero())],
        IdealSpec::IV { t, .. } => vec![(neg_fb(e - t + 1), f(e - t))],
        IdealSpec::V { k, t, .. } => vec![
            (neg_fb(e - k - t + 1), f(e - k - t)),
            (f(e - k), src.zero()),
        ],
    };
    let y = inv_x(target, params)?;
    let mapped: Vec<_> = gens
        .iter()
        .map(|(a, b)| (src.substitute(a, &y, target), src.substitute(b, &y, target)))
        .collect();
    ideal_from_generators(target, &mapped)
}

/// Dual code in the λ⁻¹ ring, component j over the monic reciprocal of f_j.
pub fn dual_code(fd: &FactorData, code: &CodeSpec) -> Result<DualCodeSpec> {
    code.validate(fd)?;
    let k = fd.field();
    let mut factors = Vec::with_capacity(fd.r());
    let mut components = Vec::with_capacity(fd.r());
    for (j, spec) in code.components.iter().enumerate() {
        let f_rec = poly::reciprocal(&fd.factors[j].f)?;
        let (f_hat, _) = poly::monic(k, &f_rec)?;
        let target = ChainCtx::new(k.clone(), f_hat.clone(), fd.e())?;
        components.push(dual_component(
            fd.chain(j),
            spec,
            &target,
            &f_rec,
            &fd.params,
        )?);
        factors.push(f_hat);
    }
    Ok(DualCodeSpec {
        params: fd.params.dual(),
        factors,
        components,
    })
}

/// Dual code in the same ring when λ = ±1; component j of C yields component τ(j).
pub fn dual_code_nu(fd: &FactorData, code: &CodeSpec) -> Result<CodeSpec> {
    let pairing = fd.pairing.as_ref().ok_or(Error::NotSelfPairedLambda)?;
    code.validate(fd)?;
    let mut comps = vec![None; fd.r()];
    for (j, spec) in code.components.iter().enumerate() {
        let t = pairing.tau[j];
        let f_rec = poly::reciprocal(&fd.factors[j].f)?;
        comps[t] = Some(dual_component(
            fd.chain(j),
            spec,
            fd.chain(t),
            &f_rec,
            &fd.params,
        )?);
    }
    Ok(CodeSpec {
        params: fd.params.clone(),
        components: comps.into_iter().map(Option::unwrap).collect(),
    })
}

pub fn is_self_dual(fd: &FactorData, code: &CodeSpec) -> Result<bool> {
    Ok(dual_code_nu(fd, code)? == *code)
}

fn check_nu(fd: &FactorData, nu: i8) -> Result<()> {
    let k = fd.field();
    if !fd.params.is_self_paired() || fd.params.lambda != k.from_int(nu as i64) {
        return Err(Error::NotSelfPairedLambda);
    }
    Ok(())
}

/// Whether b + ν δ_j x^{N−d} b(x⁻¹) ≡ 0 mod f^h in K_j (j a τ-fixed index).
fn fixed_congruence(fd: &FactorData, j: usize, b: &ChainElem, h: usize) -> Result<bool> {
    let ch = fd.chain(j);
    let k = fd.field();
    let pr = fd.pairing.as_ref().ok_or(Error::NotSelfPairedLambda)?;
    let nu = fd.params.lambda;
    let bt = inv_x_image(ch, b, ch, &fd.params)?;
    let xnd = poly::modpow_u64(k, &Poly::x(), (fd.len() - ch.d()) as u64, ch.modulus())?;
    let coef = k.mul(nu, pr.delta[j]);
    let img = ch.scale(&ch.mul(&ChainElem(xnd), &bt), coef);
    let lhs = ch.add(b, &img);
    Ok(lhs.is_zero() || ch.valuation(&lhs) >= h)
}

/// Self-dual choices for a τ-fixed component: ⟨fb + u⟩, ⟨f^k⟩ with 2k = e,
/// and ⟨f^{k+1}b + u f^k, f^{k+t}⟩ with e = 2k + t, filtered by the congruence.
fn fixed_candidates(fd: &FactorData, j: usize) -> Result<Vec<IdealSpec>> {
    let ch = fd.chain(j);
    let e = ch.e();
    let mut out = Vec::new();
    for spec in enumerate_ideals(ch) {
        let keep = match &spec {
            IdealSpec::I { b } => fixed_congruence(fd, j, b, e - 1)?,
            IdealSpec::III { k } => 2 * k == e,
            IdealSpec::V { k, t, b } => e == 2 * k + t && fixed_congruence(fd, j, b, t - 1)?,
            _ => false,
        };
        if keep {
            out.push(spec);
        }
    }
    Ok(out)
}

/// Every self-dual ν-constacyclic code. Fixed indices range over their
/// filtered candidates; for a pair (j, τ(j)) the j-th component is free and
/// the τ(j)-th is its dual.
pub fn enumerate_self_dual(fd: &FactorData, nu: i8) -> Result<impl Iterator<Item = CodeSpec> + '_> {
    check_nu(fd, nu)?;
    let pr = fd.pairing.as_ref().expect("checked");
    let mut makers: Vec<Maker<'_, Vec<(usize, IdealSpec)>>> = Vec::new();
    for j in 0..pr.rho {
        let cands = fixed_candidates(fd, j)?;
        makers.push(Box::new(move || {
            Box::new(cands.clone().into_iter().map(move |s| vec![(j, s)]))
        }));
    }
    for j in pr.rho..pr.rho + pr.paired_count {
        let t = pr.tau[j];
        let f_rec = poly::reciprocal(&fd.factors[j].f)?;
        makers.push(Box::new(move || {
            let f_rec = f_rec.clone();
            Box::new(enumerate_ideals(fd.chain(j)).map(move |s| {
                let d = dual_component(fd.chain(j), &s, fd.chain(t), &f_rec, &fd.params)
                    .expect("dual of a valid spec");
                vec![(j, s), (t, d)]
            }))
        }));
    }
    let params = fd.params.clone();
    let r = fd.r();
    Ok(Product::new(makers).map(move |groups| {
        let mut comps = vec![None; r];
        for (j, s) in groups.into_iter().flatten() {
            comps[j] = Some(s);
        }
        CodeSpec {
            params: params.clone(),
            components: comps.into_iter().map(Option::unwrap).collect(),
        }
    }))
}

pub fn count_self_dual(fd: &FactorData, nu: i8) -> Result<BigUint> {
    check_nu(fd, nu)?;
    let pr = fd.pairing.as_ref().expect("checked");
    let p = fd.field().p() as u64;
    let m = fd.field().m();
    let mut acc = BigUint::one();
    for j in 0..pr.rho {
        acc *= BigUint::from(fixed_candidates(fd, j)?.len());
    }
    for j in pr.rho..pr.rho + pr.paired_count {
        acc *= crate::ideals::count_ideals(p, m, fd.factors[j].d as u32, fd.params.s);
    }
    Ok(acc)
}
