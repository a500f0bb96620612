//! The in-ring dual of a case-I component over x + 2 in the negacyclic ring
//! of length 30 over F_5. Its generator on the x + 3 side carries the
//! coefficient f(0)^{-1} = 2; the value 3 gives a module that is not
//! orthogonal to the code.

use ccring::decomp::AmbientElem;
use ccring::dual::dual_code_nu;
use ccring::ideals::{CodeSpec, IdealSpec};
use ccring::poly::{self, Poly};
use ccring::{AmbientParams, FactorData, FieldCtx};

fn negacyclic30() -> FactorData {
    let k = FieldCtx::prime(5).unwrap();
    let l = k.from_int(-1);
    FactorData::build(&AmbientParams::new(k, 1, 6, l).unwrap()).unwrap()
}

/// Euclidean inner product over F_5 + uF_5, as (constant part, u part).
fn inner(fd: &FactorData, a: &AmbientElem, b: &AmbientElem) -> (u32, u32) {
    let k = fd.field();
    let (mut s0, mut s1) = (k.zero(), k.zero());
    for i in 0..fd.len() {
        s0 = k.add(s0, k.mul(a.a0.coeff(i), b.a0.coeff(i)));
        s1 = k.add(
            s1,
            k.add(
                k.mul(a.a0.coeff(i), b.a1.coeff(i)),
                k.mul(a.a1.coeff(i), b.a0.coeff(i)),
            ),
        );
    }
    (s0.raw(), s1.raw())
}

/// [x^i c, d] = 0 for every shift i; enough for two ideals of the same ring
/// when λ = λ⁻¹.
fn orthogonal(fd: &FactorData, c: &AmbientElem, d: &AmbientElem) -> bool {
    let x = AmbientElem::new(Poly::x(), Poly::zero());
    let mut c = c.clone();
    for _ in 0..fd.len() {
        if inner(fd, &c, d) != (0, 0) {
            return false;
        }
        c = fd.mul(&c, &x);
    }
    true
}

fn generator_with(fd: &FactorData, coeff: i64, b: &Poly) -> AmbientElem {
    let k = fd.field();
    let n = fd.len();
    // x⁻¹ = λ x^{N-1} with λ = -1
    let xinv = poly::scale(k, &Poly::monomial(k.one(), n - 1), k.from_int(-1));
    let b_inv = b.coeffs().iter().rev().fold(Poly::zero(), |acc, &c| {
        fd.reduce(&poly::add(k, &fd.mul_poly(&acc, &xinv), &Poly::constant(c)))
    });
    let head = fd.mul_poly(&Poly::monomial(k.from_int(coeff), n - 1), &fd.factors[2].f);
    let a0 = fd.mul_poly(&head, &b_inv);
    let eps = AmbientElem::new(fd.factors[2].eps.clone(), Poly::zero());
    fd.mul(&eps, &AmbientElem::new(a0, Poly::one()))
}

/// Case-I parameters over x + 2 with e = 5: b = c₂f² + c₃f³.
fn case_one_parameters(fd: &FactorData) -> Vec<Poly> {
    let k = fd.field();
    let f = &fd.factors[0].f;
    let f2 = poly::mul(k, f, f);
    let f3 = poly::mul(k, &f2, f);
    let mut out = Vec::new();
    for c2 in 0..5 {
        for c3 in 0..5 {
            let b = poly::add(
                k,
                &poly::scale(k, &f2, k.from_int(c2)),
                &poly::scale(k, &f3, k.from_int(c3)),
            );
            out.push(b);
        }
    }
    out
}

#[test]
fn listed_coefficient_breaks_orthogonality() {
    let fd = negacyclic30();
    let k = fd.field().clone();
    assert_eq!(fd.factors[0].f, Poly::from_ints(&k, &[2, 1]));
    assert_eq!(fd.factors[2].f, Poly::from_ints(&k, &[3, 1]));
    let mut broken = 0;
    for b in case_one_parameters(&fd) {
        let gen = AmbientElem::new(fd.mul_poly(&fd.factors[0].f, &b), Poly::one());
        let eps = AmbientElem::new(fd.factors[0].eps.clone(), Poly::zero());
        let c = fd.mul(&eps, &gen);
        assert!(
            orthogonal(&fd, &c, &generator_with(&fd, 2, &b)),
            "b = {b:?}"
        );
        if !orthogonal(&fd, &c, &generator_with(&fd, 3, &b)) {
            broken += 1;
        }
    }
    // b = 0 is the only choice where the coefficient does not matter
    assert_eq!(broken, 24);
}

#[test]
fn in_ring_dual_uses_the_inverse_constant_term() {
    let fd = negacyclic30();
    let k = fd.field().clone();
    let f = &fd.factors[0].f;
    let b = poly::mul(&k, f, f);
    let b_chain = fd.chain(0).reduce(&b);
    let mut comps: Vec<IdealSpec> = (0..fd.r()).map(|_| IdealSpec::III { k: 0 }).collect();
    comps[0] = IdealSpec::I { b: b_chain };
    let code = CodeSpec {
        params: fd.params.clone(),
        components: comps,
    };
    let dual = dual_code_nu(&fd, &code).unwrap();
    // the dual's component at x + 3 must contain the projection of the
    // coefficient-2 generator and not the coefficient-3 one
    let contains = |coeff: i64| {
        let g = generator_with(&fd, coeff, &b);
        let (a, bb) = fd.project(&g, 2).unwrap();
        dual.components[2].contains(fd.chain(2), &a, &bb)
    };
    assert!(contains(2));
    assert!(!contains(3));
}
