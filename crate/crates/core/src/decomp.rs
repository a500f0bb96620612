//! CRT decomposition of (F_q + uF_q)[x]/(x^N − λ) into the chain rings
//! K_j + uK_j, K_j = F_q[x]/(f_j^{p^s}).

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::chain::{ChainCtx, ChainElem};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{self, Poly, DEFAULT_SEED};

/// Lengths above this are refused; all per-factor data is dense in N.
pub const MAX_LEN: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientParams {
    pub field: Arc<FieldCtx>,
    pub s: u32,
    pub n: u64,
    pub lambda: FieldElem,
}

impl AmbientParams {
    pub fn new(field: Arc<FieldCtx>, s: u32, n: u64, lambda: FieldElem) -> Result<AmbientParams> {
        if s == 0 {
            return Err(Error::SZero);
        }
        if n == 0 {
            return Err(Error::RangeError("n must be positive".into()));
        }
        let g = n.gcd(&(field.p() as u64));
        if g != 1 {
            return Err(Error::GcdViolation(g));
        }
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        if !field.contains(lambda) {
            return Err(Error::RangeError("lambda is not a field element".into()));
        }
        let len = (field.p() as u64)
            .checked_pow(s)
            .and_then(|e| e.checked_mul(n))
            .filter(|&len| len <= MAX_LEN as u64);
        if len.is_none() {
            return Err(Error::TooLarge(format!(
                "length n·p^s with n={n}, p={}, s={s}",
                field.p()
            )));
        }
        Ok(AmbientParams {
            field,
            s,
            n,
            lambda,
        })
    }

    /// e = p^s
    pub fn e(&self) -> usize {
        (self.field.p() as usize).pow(self.s)
    }

    /// N = n·p^s
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.n as usize * self.e()
    }

    pub fn lambda_inv(&self) -> FieldElem {
        self.field.inv(self.lambda).expect("lambda is nonzero")
    }

    /// Same ring data with λ replaced by λ⁻¹.
    pub fn dual(&self) -> AmbientParams {
        AmbientParams {
            lambda: self.lambda_inv(),
            ..self.clone()
        }
    }

    pub fn is_self_paired(&self) -> bool {
        let k = &self.field;
        k.mul(self.lambda, self.lambda) == k.one()
    }

    /// |R|^N = p^{2mN}
    pub fn ambient_size(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(2 * self.len() as u32)
    }
}

/// a₀ + u·a₁ in (F_q + uF_q)[x]/(x^N − λ), both parts of degree < N.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AmbientElem {
    pub a0: Poly,
    pub a1: Poly,
}

impl AmbientElem {
    pub fn new(a0: Poly, a1: Poly) -> AmbientElem {
        AmbientElem { a0, a1 }
    }
    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub f: Poly,
    pub d: usize,
    /// F_j = (x^n − λ₀)/f_j
    pub cofactor: Poly,
    pub v: Poly,
    pub w: Poly,
    /// ε_j = (v_j F_j)^{p^s} mod x^N − λ
    pub eps: Poly,
}

/// Reciprocal pairing of the factors; only present when λ = ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    /// 0-based involution: f_{τ(j)} is the monic reciprocal of f_j.
    pub tau: Vec<usize>,
    /// δ_j = f_j(0)⁻¹
    pub delta: Vec<FieldElem>,
    pub rho: usize,
    pub paired_count: usize,
}

#[derive(Debug)]
pub struct FactorData {
    pub params: AmbientParams,
    pub lambda0: FieldElem,
    pub factors: Vec<Factor>,
    pub pairing: Option<Pairing>,
    chains: Vec<ChainCtx>,
}

impl FactorData {
    pub fn build(params: &AmbientParams) -> Result<FactorData> {
        Self::build_with_seed(params, DEFAULT_SEED)
    }

    pub fn build_with_seed(params: &AmbientParams, seed: u64) -> Result<FactorData> {
        let k = params.field.clone();
        let n = params.n as usize;
        let e = params.e();
        let len = params.len();
        let lambda0 = k.ps_root(params.lambda, params.s)?;
        let g = poly::xn_minus(&k, n, lambda0);
        let mut fs: Vec<Poly> = poly::factor_squarefree_seeded(&k, &g, seed)?
            .factors
            .into_iter()
            .map(|(f, _)| f)
            .collect();

        let pairing = if params.is_self_paired() {
            let (order, pairing) = pair_reciprocals(&k, &fs)?;
            fs = order.into_iter().map(|i| fs[i].clone()).collect();
            Some(pairing)
        } else {
            None
        };

        let ps = BigUint::from(k.p()).pow(params.s);
        let modulus = poly::xn_minus(&k, len, params.lambda);
        let mut factors = Vec::with_capacity(fs.len());
        let mut chains = Vec::with_capacity(fs.len());
        for f in fs {
            let d = f.degree().expect("nonconstant");
            let cofactor = poly::exact_div(&k, &g, &f)?.expect("factor divides x^n − λ₀");
            let (gg, v, w) = poly::xgcd(&k, &cofactor, &f)?;
            debug_assert!(gg.is_one());
            let eps = poly::modpow(&k, &poly::mul(&k, &v, &cofactor), &ps, &modulus)?;
            chains.push(ChainCtx::new(k.clone(), f.clone(), e)?);
            factors.push(Factor {
                f,
                d,
                cofactor,
                v,
                w,
                eps,
            });
        }
        Ok(FactorData {
            params: params.clone(),
            lambda0,
            factors,
            pairing,
            chains,
        })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.params.field
    }
    pub fn r(&self) -> usize {
        self.factors.len()
    }
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.params.len()
    }
    pub fn e(&self) -> usize {
        self.params.e()
    }

    /// Chain ring K_j (0-based j).
    pub fn chain(&self, j: usize) -> &ChainCtx {
        &self.chains[j]
    }
    pub fn chains(&self) -> &[ChainCtx] {
        &self.chains
    }

    pub fn tau(&self, j: usize) -> Result<usize> {
        let pr = self.pairing.as_ref().ok_or(Error::NotSelfPairedLambda)?;
        Ok(pr.tau[j])
    }

    pub fn index_of(&self, f: &Poly) -> Option<usize> {
        self.factors.iter().position(|x| &x.f == f)
    }

    /// Reduction mod x^N − λ.
    pub fn reduce(&self, a: &Poly) -> Poly {
        poly::reduce_xn(self.field(), a, self.len(), self.params.lambda)
    }

    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&poly::mul(self.field(), a, b))
    }

    pub fn mul(&self, a: &AmbientElem, b: &AmbientElem) -> AmbientElem {
        let k = self.field();
        let a0 = self.mul_poly(&a.a0, &b.a0);
        let a1 = poly::add(
            k,
            &self.mul_poly(&a.a0, &b.a1),
            &self.mul_poly(&a.a1, &b.a0),
        );
        AmbientElem { a0, a1 }
    }

    pub fn add(&self, a: &AmbientElem, b: &AmbientElem) -> AmbientElem {
        let k = self.field();
        AmbientElem {
            a0: poly::add(k, &a.a0, &b.a0),
            a1: poly::add(k, &a.a1, &b.a1),
        }
    }

    /// j-th CRT coordinate: both parts reduced mod f_j^{p^s}.
    pub fn project(&self, a: &AmbientElem, j: usize) -> Result<(ChainElem, ChainElem)> {
        let c = self.chains.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.r(),
        })?;
        Ok((c.reduce(&a.a0), c.reduce(&a.a1)))
    }

    /// ε_j · (A + uB) mod x^N − λ.
    pub fn embed(&self, j: usize, part: &(ChainElem, ChainElem)) -> AmbientElem {
        let eps = &self.factors[j].eps;
        AmbientElem {
            a0: self.mul_poly(eps, part.0.poly()),
            a1: self.mul_poly(eps, part.1.poly()),
        }
    }

    /// Σ_j ε_j · parts_j mod x^N − λ.
    pub fn assemble(&self, parts: &[(ChainElem, ChainElem)]) -> Result<AmbientElem> {
        if parts.len() != self.r() {
            return Err(Error::LengthMismatch {
                expected: self.r(),
                got: parts.len(),
            });
        }
        let mut acc = AmbientElem::default();
        for (j, part) in parts.iter().enumerate() {
            acc = self.add(&acc, &self.embed(j, part));
        }
        Ok(acc)
    }

    /// Σ ε_j = 1, ε_j² = ε_j and ε_j ε_l = 0 for j ≠ l, all mod x^N − λ.
    pub fn idempotents_ok(&self) -> bool {
        let k = self.field();
        let mut sum = Poly::zero();
        for (j, a) in self.factors.iter().enumerate() {
            sum = poly::add(k, &sum, &a.eps);
            if self.mul_poly(&a.eps, &a.eps) != a.eps {
                return false;
            }
            if self.factors[j + 1..]
                .iter()
                .any(|b| !self.mul_poly(&a.eps, &b.eps).is_zero())
            {
                return false;
            }
        }
        self.reduce(&sum).is_one()
    }
}

/// Matches monic reciprocals and returns the reordering (fixed points, then
/// first members of pairs, then their partners) together with the pairing in
/// the new indexing.
fn pair_reciprocals(k: &FieldCtx, fs: &[Poly]) -> Result<(Vec<usize>, Pairing)> {
    let r = fs.len();
    let mut tau = vec![usize::MAX; r];
    for (j, f) in fs.iter().enumerate() {
        let (rec, _) = poly::monic(k, &poly::reciprocal(f)?)?;
        tau[j] = fs.iter().position(|g| *g == rec).ok_or_else(|| {
            Error::InvalidSpec("reciprocal of a factor of x^n − λ₀ is not a factor".into())
        })?;
    }
    let fixed: Vec<usize> = (0..r).filter(|&j| tau[j] == j).collect();
    let firsts: Vec<usize> = (0..r).filter(|&j| tau[j] > j).collect();
    let mut order = fixed.clone();
    order.extend(&firsts);
    order.extend(firsts.iter().map(|&j| tau[j]));
    let mut pos = vec![0; r];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let new_tau = order.iter().map(|&old| pos[tau[old]]).collect();
    let delta = order
        .iter()
        .map(|&old| k.inv(fs[old].coeff(0)))
        .collect::<Result<Vec<_>>>()?;
    let pairing = Pairing {
        tau: new_tau,
        delta,
        rho: fixed.len(),
        paired_count: firsts.len(),
    };
    Ok((order, pairing))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, m: u32, s: u32, n: u64, lambda: i64) -> AmbientParams {
        let k = FieldCtx::new(p, m, None).unwrap();
        let l = k.from_int(lambda);
        AmbientParams::new(k, s, n, l).unwrap()
    }

    #[test]
    fn validation() {
        let k = FieldCtx::prime(5).unwrap();
        assert_eq!(
            AmbientParams::new(k.clone(), 1, 10, k.one()).unwrap_err(),
            Error::GcdViolation(5)
        );
        assert_eq!(
            AmbientParams::new(k.clone(), 0, 1, k.one()).unwrap_err(),
            Error::SZero
        );
        assert_eq!(
            AmbientParams::new(k.clone(), 1, 1, k.zero()).unwrap_err(),
            Error::ZeroLambda
        );
    }

    #[test]
    fn negacyclic_f5_length_30() {
        let fd = FactorData::build(&params(5, 1, 1, 6, -1)).unwrap();
        let k = fd.field().clone();
        let got: Vec<Poly> = fd.factors.iter().map(|f| f.f.clone()).collect();
        let want = vec![
            Poly::from_ints(&k, &[2, 1]),
            Poly::from_ints(&k, &[4, 2, 1]),
            Poly::from_ints(&k, &[3, 1]),
            Poly::from_ints(&k, &[4, 3, 1]),
        ];
        assert_eq!(got, want);
        let pr = fd.pairing.as_ref().unwrap();
        assert_eq!(pr.rho, 0);
        assert_eq!(pr.paired_count, 2);
        assert_eq!(pr.tau, vec![2, 3, 0, 1]);
        assert_eq!(pr.delta[0], k.from_int(3));
        let mut eps1 = vec![0i64; 26];
        for (i, c) in [(25, 2), (20, 1), (15, 3), (10, 4), (5, 2), (0, 1)] {
            eps1[i] = c;
        }
        assert_eq!(fd.factors[0].eps, Poly::from_ints(&k, &eps1));
    }

    #[test]
    fn single_factor_has_unit_idempotent() {
        let fd = FactorData::build(&params(5, 1, 1, 1, 2)).unwrap();
        assert_eq!(fd.r(), 1);
        let k = fd.field();
        assert_eq!(fd.lambda0, k.ps_root(k.from_int(2), 1).unwrap());
        assert_eq!(
            fd.factors[0].f,
            Poly::from_ints(k, &[-(fd.lambda0.raw() as i64), 1])
        );
        assert!(fd.factors[0].eps.is_one());
    }

    fn check_identities(fd: &FactorData) {
        let k = fd.field();
        let r = fd.r();
        let mut sum = Poly::zero();
        for j in 0..r {
            let ej = &fd.factors[j].eps;
            assert!(ej.len() <= fd.len());
            sum = poly::add(k, &sum, ej);
            assert_eq!(&fd.mul_poly(ej, ej), ej);
            for l in 0..r {
                let red = fd.chain(l).reduce(ej);
                assert_eq!(red.is_zero(), l != j);
                if l == j {
                    assert!(red.poly().is_one());
                } else {
                    assert!(fd.mul_poly(ej, &fd.factors[l].eps).is_zero());
                }
            }
            let fa = &fd.factors[j];
            let bez = poly::add(
                k,
                &poly::mul(k, &fa.v, &fa.cofactor),
                &poly::mul(k, &fa.w, &fa.f),
            );
            assert!(bez.is_one());
            assert!(fa.v.len() <= fa.d);
            // ε_j equals the coefficientwise Frobenius of v_j F_j spread to x^{i p^s}
            let vf = poly::mul(k, &fa.v, &fa.cofactor);
            let ps = fd.e();
            let mut fr = vec![FieldElem::ZERO; fd.len()];
            for (i, &c) in vf.coeffs().iter().enumerate() {
                fr[i * ps] = k.pow_u64(c, ps as u64);
            }
            assert_eq!(Poly::from_coeffs(fr), fa.eps);
        }
        assert!(sum.is_one());
        let prod = fd
            .factors
            .iter()
            .fold(Poly::one(), |a, f| poly::mul(k, &a, &f.f));
        assert_eq!(prod, poly::xn_minus(k, fd.params.n as usize, fd.lambda0));
        assert_eq!(k.pow_u64(fd.lambda0, fd.e() as u64), fd.params.lambda);
        if let Some(pr) = &fd.pairing {
            assert_eq!(pr.rho + 2 * pr.paired_count, r);
            for j in 0..r {
                let t = pr.tau[j];
                assert_eq!(pr.tau[t], j);
                assert_eq!(t == j, j < pr.rho);
                // reciprocal(f_j) = f_j(0) · f_τ(j), i.e. f_τ(j) = δ_j · reciprocal(f_j)
                let rec = poly::reciprocal(&fd.factors[j].f).unwrap();
                assert_eq!(poly::scale(k, &rec, pr.delta[j]), fd.factors[t].f);
                assert_eq!(pr.delta[t], k.inv(pr.delta[j]).unwrap());
            }
            for i in 0..pr.paired_count {
                assert_eq!(pr.tau[pr.rho + i], pr.rho + pr.paired_count + i);
            }
        }
    }

    #[test]
    fn identities_on_several_instances() {
        for (p, m, s, n, l) in [
            (5, 1, 1, 6, -1),
            (3, 1, 1, 2, 1),
            (3, 1, 1, 2, -1),
            (2, 1, 2, 7, 1),
            (7, 2, 1, 4, 3),
            (13, 1, 1, 4, 2),
        ] {
            check_identities(&FactorData::build(&params(p, m, s, n, l)).unwrap());
        }
    }

    #[test]
    fn project_and_assemble() {
        let fd = FactorData::build(&params(5, 1, 1, 6, -1)).unwrap();
        let k = fd.field().clone();
        let eps1 = AmbientElem::new(fd.factors[0].eps.clone(), Poly::zero());
        let (a, b) = fd.project(&eps1, 0).unwrap();
        assert!(a.poly().is_one() && b.is_zero());
        assert!(fd.project(&eps1, 1).unwrap().0.is_zero());
        assert!(matches!(
            fd.project(&eps1, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        let one = AmbientElem::new(Poly::one(), Poly::zero());
        let parts: Vec<_> = (0..4).map(|j| fd.project(&one, j).unwrap()).collect();
        assert!(parts.iter().all(|(a, b)| a.poly().is_one() && b.is_zero()));
        assert_eq!(fd.assemble(&parts).unwrap(), one);
        let mut unit0 = vec![(fd.chain(0).zero(), fd.chain(0).zero()); 4];
        for (j, u) in unit0.iter_mut().enumerate() {
            *u = (fd.chain(j).zero(), fd.chain(j).zero());
        }
        unit0[0].0 = fd.chain(0).one();
        assert_eq!(fd.assemble(&unit0).unwrap().a0, fd.factors[0].eps);
        assert!(matches!(
            fd.assemble(&unit0[..2]),
            Err(Error::LengthMismatch { .. })
        ));
        let g = AmbientElem::new(
            Poly::from_ints(&k, &[1, 2, 3, 4, 0, 1, 2]),
            Poly::from_ints(&k, &[0, 0, 4, 4]),
        );
        let parts: Vec<_> = (0..4).map(|j| fd.project(&g, j).unwrap()).collect();
        assert_eq!(fd.assemble(&parts).unwrap(), g);
    }

    #[test]
    fn no_pairing_when_lambda_squared_not_one() {
        let fd = FactorData::build(&params(5, 1, 1, 4, 3)).unwrap();
        assert!(fd.pairing.is_none());
        assert_eq!(fd.r(), 1);
        assert_eq!(fd.tau(0), Err(Error::NotSelfPairedLambda));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn project_assemble_are_inverse_ring_maps(a in prop::collection::vec(0i64..3, 0..18),
                                                  b in prop::collection::vec(0i64..3, 0..18),
                                                  c in prop::collection::vec(0i64..3, 0..18),
                                                  d in prop::collection::vec(0i64..3, 0..18),
                                                  neg in any::<bool>()) {
            let k = FieldCtx::prime(3).unwrap();
            let lam = if neg { k.from_int(-1) } else { k.one() };
            let fd = FactorData::build(&AmbientParams::new(k.clone(), 2, 2, lam).unwrap()).unwrap();
            let x = AmbientElem::new(fd.reduce(&Poly::from_ints(&k, &a)), fd.reduce(&Poly::from_ints(&k, &b)));
            let y = AmbientElem::new(fd.reduce(&Poly::from_ints(&k, &c)), fd.reduce(&Poly::from_ints(&k, &d)));
            let px: Vec<_> = (0..fd.r()).map(|j| fd.project(&x, j).unwrap()).collect();
            prop_assert_eq!(fd.assemble(&px).unwrap(), x.clone());
            let xy = fd.mul(&x, &y);
            let sum = fd.add(&x, &y);
            for j in 0..fd.r() {
                let ch = fd.chain(j);
                let (x0, x1) = fd.project(&x, j).unwrap();
                let (y0, y1) = fd.project(&y, j).unwrap();
                let (m0, m1) = fd.project(&xy, j).unwrap();
                prop_assert_eq!(m0, ch.mul(&x0, &y0));
                prop_assert_eq!(m1, ch.add(&ch.mul(&x0, &y1), &ch.mul(&x1, &y0)));
                let (s0, s1) = fd.project(&sum, j).unwrap();
                prop_assert_eq!(s0, ch.add(&x0, &y0));
                prop_assert_eq!(s1, ch.add(&x1, &y1));
            }
        }
    }
}
