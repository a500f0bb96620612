//! JSON encodings of fields, polynomials, parameters and code specs.
//!
//! Field elements are bare integers when m = 1 and little-endian coefficient
//! arrays otherwise; polynomials are little-endian arrays with no trailing zeros.
//! Counts are decimal strings.

use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::chain::{ChainCtx, ChainElem};
use crate::decomp::{AmbientParams, FactorData};
use crate::dual::DualCodeSpec;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::ideals::{code_size, count_codes, count_ideals, CodeSpec, IdealCase, IdealSpec};
use crate::poly::Poly;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| perr(format!("{what}: expected a non-negative integer")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| perr("expected an object"))
}

pub fn elem_to_json(k: &FieldCtx, a: FieldElem) -> Value {
    if k.m() == 1 {
        json!(a.raw())
    } else {
        json!(k.coeffs(a))
    }
}

pub fn elem_from_json(k: &FieldCtx, v: &Value) -> Result<FieldElem> {
    if k.m() == 1 {
        let c = as_u64(v, "field element")?;
        if c >= k.p() as u64 {
            return Err(perr(format!("field element {c} not in [0, {})", k.p())));
        }
        return Ok(FieldElem(c as u32));
    }
    let arr = v
        .as_array()
        .ok_or_else(|| perr("field element: expected an array"))?;
    if arr.len() != k.m() as usize {
        return Err(perr(format!(
            "field element: expected {} coefficients",
            k.m()
        )));
    }
    let c = arr
        .iter()
        .map(|x| as_u64(x, "coefficient").map(|c| c as u32))
        .collect::<Result<Vec<_>>>()?;
    if c.iter().any(|&x| x >= k.p()) {
        return Err(perr("field element: coefficient out of range"));
    }
    k.from_coeffs(&c)
}

pub fn poly_to_json(k: &FieldCtx, a: &Poly) -> Value {
    Value::Array(a.coeffs().iter().map(|&c| elem_to_json(k, c)).collect())
}

pub fn poly_from_json(k: &FieldCtx, v: &Value) -> Result<Poly> {
    let arr = v
        .as_array()
        .ok_or_else(|| perr("polynomial: expected an array"))?;
    let c = arr
        .iter()
        .map(|x| elem_from_json(k, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_coeffs(c))
}

pub fn field_to_json(k: &FieldCtx) -> Value {
    json!({ "p": k.p(), "m": k.m(), "modulus": k.modulus() })
}

pub fn field_from_json(v: &Value) -> Result<Arc<FieldCtx>> {
    let o = object(v)?;
    let p = as_u64(field(o, "p")?, "p")?;
    let m = as_u64(field(o, "m")?, "m")?;
    let m = u32::try_from(m).map_err(|_| perr("m out of range"))?;
    let modulus = match o.get("modulus") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| perr("modulus: expected an array"))?;
            Some(
                arr.iter()
                    .map(|x| as_u64(x, "modulus").map(|c| c as u32))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    FieldCtx::new(p, m, modulus.as_deref())
}

pub fn params_to_json(a: &AmbientParams) -> Value {
    let k = &a.field;
    json!({
        "p": k.p(),
        "m": k.m(),
        "modulus": k.modulus(),
        "s": a.s,
        "n": a.n,
        "lambda": elem_to_json(k, a.lambda),
    })
}

pub fn params_from_json(v: &Value) -> Result<AmbientParams> {
    let k = field_from_json(v)?;
    let o = object(v)?;
    let s = u32::try_from(as_u64(field(o, "s")?, "s")?).map_err(|_| perr("s out of range"))?;
    let n = as_u64(field(o, "n")?, "n")?;
    let lambda = elem_from_json(&k, field(o, "lambda")?)?;
    AmbientParams::new(k, s, n, lambda)
}

pub fn ideal_to_json(k: &FieldCtx, spec: &IdealSpec) -> Value {
    let mut o = Map::new();
    o.insert("case".into(), json!(spec.case().name()));
    if let Some(x) = spec.k() {
        o.insert("k".into(), json!(x));
    }
    if let Some(t) = spec.t() {
        o.insert("t".into(), json!(t));
    }
    if let Some(b) = spec.b() {
        o.insert("b".into(), poly_to_json(k, b.poly()));
    }
    Value::Object(o)
}

/// Parses an ideal spec and validates it against `ctx`.
pub fn ideal_from_json(ctx: &ChainCtx, v: &Value) -> Result<IdealSpec> {
    let o = object(v)?;
    let case = IdealCase::parse(
        field(o, "case")?
            .as_str()
            .ok_or_else(|| perr("case: expected a string"))?,
    )?;
    let int = |key: &str| -> Result<usize> { Ok(as_u64(field(o, key)?, key)? as usize) };
    let b = || -> Result<ChainElem> {
        let b = poly_from_json(ctx.field(), field(o, "b")?)?;
        Ok(ChainElem(b))
    };
    let spec = match case {
        IdealCase::I => IdealSpec::I { b: b()? },
        IdealCase::II => IdealSpec::II {
            k: int("k")?,
            b: b()?,
        },
        IdealCase::III => IdealSpec::III { k: int("k")? },
        IdealCase::IV => IdealSpec::IV {
            t: int("t")?,
            b: b()?,
        },
        IdealCase::V => IdealSpec::V {
            k: int("k")?,
            t: int("t")?,
            b: b()?,
        },
    };
    spec.validate(ctx)?;
    Ok(spec)
}

pub fn code_to_json(fd: &FactorData, code: &CodeSpec) -> Value {
    let k = fd.field();
    json!({
        "params": params_to_json(&code.params),
        "components": code.components.iter().map(|c| ideal_to_json(k, c)).collect::<Vec<_>>(),
        "size": code_size(fd, code).to_string(),
    })
}

/// Reads the ambient parameters of a code document.
pub fn code_params_from_json(v: &Value) -> Result<AmbientParams> {
    params_from_json(field(object(v)?, "params")?)
}

/// Parses a code whose parameters match `fd`. A "size" field, if present,
/// must agree with the components.
pub fn code_from_json(fd: &FactorData, v: &Value) -> Result<CodeSpec> {
    let o = object(v)?;
    let params = params_from_json(field(o, "params")?)?;
    if params != fd.params {
        return Err(Error::ContextMismatch);
    }
    let comps = field(o, "components")?
        .as_array()
        .ok_or_else(|| perr("components: expected an array"))?;
    if comps.len() != fd.r() {
        return Err(Error::LengthMismatch {
            expected: fd.r(),
            got: comps.len(),
        });
    }
    let components = comps
        .iter()
        .enumerate()
        .map(|(j, c)| ideal_from_json(fd.chain(j), c))
        .collect::<Result<Vec<_>>>()?;
    let code = CodeSpec { params, components };
    if let Some(size) = o.get("size") {
        let size = size
            .as_str()
            .ok_or_else(|| perr("size: expected a decimal string"))?;
        if size != code_size(fd, &code).to_string() {
            return Err(Error::InvalidSpec(format!(
                "size {size} does not match the components"
            )));
        }
    }
    Ok(code)
}

pub fn dual_to_json(d: &DualCodeSpec) -> Result<Value> {
    let k = &d.params.field;
    let e = d.params.e();
    let mut size = BigUint::from(1u32);
    for (f, c) in d.factors.iter().zip(&d.components) {
        size *= c.size(&ChainCtx::new(k.clone(), f.clone(), e)?);
    }
    Ok(json!({
        "params": params_to_json(&d.params),
        "factors": d.factors.iter().map(|f| poly_to_json(k, f)).collect::<Vec<_>>(),
        "components": d.components.iter().map(|c| ideal_to_json(k, c)).collect::<Vec<_>>(),
        "size": size.to_string(),
    }))
}

pub fn dual_from_json(v: &Value) -> Result<DualCodeSpec> {
    let o = object(v)?;
    let params = params_from_json(field(o, "params")?)?;
    let k = params.field.clone();
    let e = params.e();
    let factors = field(o, "factors")?
        .as_array()
        .ok_or_else(|| perr("factors: expected an array"))?
        .iter()
        .map(|f| poly_from_json(&k, f))
        .collect::<Result<Vec<_>>>()?;
    let comps = field(o, "components")?
        .as_array()
        .ok_or_else(|| perr("components: expected an array"))?;
    if comps.len() != factors.len() {
        return Err(Error::LengthMismatch {
            expected: factors.len(),
            got: comps.len(),
        });
    }
    let mut components = Vec::with_capacity(comps.len());
    for (f, c) in factors.iter().zip(comps) {
        let ctx = ChainCtx::new(k.clone(), f.clone(), e)?;
        components.push(ideal_from_json(&ctx, c)?);
    }
    Ok(DualCodeSpec {
        params,
        factors,
        components,
    })
}

pub fn factor_data_to_json(fd: &FactorData) -> Value {
    let k = fd.field();
    let p = k.p() as u64;
    let factors: Vec<Value> = fd
        .factors
        .iter()
        .map(|f| {
            json!({
                "poly": poly_to_json(k, &f.f),
                "degree": f.d,
                "ideals": count_ideals(p, k.m(), f.d as u32, fd.params.s).to_string(),
            })
        })
        .collect();
    let mut o = Map::new();
    o.insert("params".into(), params_to_json(&fd.params));
    o.insert("N".into(), json!(fd.len()));
    o.insert("lambda0".into(), elem_to_json(k, fd.lambda0));
    o.insert("factors".into(), Value::Array(factors));
    o.insert("idempotents".into(), idempotents_to_json(fd));
    match &fd.pairing {
        Some(pr) => {
            o.insert(
                "tau".into(),
                json!(pr.tau.iter().map(|t| t + 1).collect::<Vec<_>>()),
            );
            o.insert(
                "delta".into(),
                Value::Array(pr.delta.iter().map(|&d| elem_to_json(k, d)).collect()),
            );
            o.insert("rho".into(), json!(pr.rho));
        }
        None => {
            o.insert("tau".into(), Value::Null);
            o.insert("delta".into(), Value::Null);
            o.insert("rho".into(), Value::Null);
        }
    }
    o.insert("total".into(), json!(count_codes(fd).to_string()));
    Value::Object(o)
}

pub fn idempotents_to_json(fd: &FactorData) -> Value {
    let k = fd.field();
    Value::Array(fd.factors.iter().map(|f| poly_to_json(k, &f.eps)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::enumerate_codes;

    fn fd(p: u64, m: u32, s: u32, n: u64, lambda: i64) -> FactorData {
        let k = FieldCtx::new(p, m, None).unwrap();
        let l = k.from_int(lambda);
        FactorData::build(&AmbientParams::new(k, s, n, l).unwrap()).unwrap()
    }

    #[test]
    fn element_encodings() {
        let k = FieldCtx::prime(5).unwrap();
        assert_eq!(elem_to_json(&k, FieldElem(3)), json!(3));
        assert!(elem_from_json(&k, &json!(5)).is_err());
        let k9 = FieldCtx::new(3, 2, None).unwrap();
        let a = k9.from_coeffs(&[2, 1]).unwrap();
        assert_eq!(elem_to_json(&k9, a), json!([2, 1]));
        assert_eq!(elem_from_json(&k9, &json!([2, 1])).unwrap(), a);
        assert!(elem_from_json(&k9, &json!(2)).is_err());
        let f = Poly::from_ints(&k, &[1, 0, 4]);
        assert_eq!(poly_to_json(&k, &f), json!([1, 0, 4]));
        assert_eq!(poly_to_json(&k, &Poly::zero()), json!([]));
    }

    #[test]
    fn params_round_trip() {
        let k = FieldCtx::new(2, 3, None).unwrap();
        let a = AmbientParams::new(k.clone(), 1, 3, k.generator()).unwrap();
        assert_eq!(params_from_json(&params_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn codes_round_trip() {
        for fd in [fd(3, 1, 1, 2, 1), fd(3, 1, 1, 2, -1), fd(2, 2, 1, 3, 1)] {
            for code in enumerate_codes(&fd, Some(500)) {
                let text = code_to_json(&fd, &code).to_string();
                let back = code_from_json(&fd, &serde_json::from_str(&text).unwrap()).unwrap();
                assert_eq!(back, code);
            }
        }
    }

    #[test]
    fn duals_round_trip() {
        let f = fd(5, 1, 1, 4, 3);
        for code in enumerate_codes(&f, Some(200)) {
            let d = crate::dual::dual_code(&f, &code).unwrap();
            let v = dual_to_json(&d).unwrap();
            assert_eq!(dual_from_json(&v).unwrap(), d);
        }
    }

    #[test]
    fn bad_documents_are_rejected() {
        let f = fd(3, 1, 1, 2, -1);
        let good = code_to_json(&f, &enumerate_codes(&f, Some(1)).next().unwrap());
        let mut bad = good.clone();
        bad["size"] = json!("7");
        assert!(code_from_json(&f, &bad).is_err());
        let mut bad = good.clone();
        bad["components"][0]["case"] = json!("VI");
        assert!(code_from_json(&f, &bad).is_err());
        let other = fd(3, 1, 1, 2, 1);
        assert_eq!(code_from_json(&other, &good), Err(Error::ContextMismatch));
    }

    #[test]
    fn info_document() {
        let f = fd(5, 1, 1, 6, -1);
        let v = factor_data_to_json(&f);
        assert_eq!(v["total"], json!("62190883161"));
        assert_eq!(v["tau"], json!([3, 4, 1, 2]));
        assert_eq!(v["rho"], json!(0));
        assert_eq!(v["factors"][0]["poly"], json!([2, 1]));
        assert_eq!(v["idempotents"].as_array().unwrap().len(), 4);
    }
}
