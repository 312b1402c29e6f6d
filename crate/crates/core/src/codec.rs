//! JSON encodings shared by reports, certificates and instance files.
//!
//! Rationals are strings `"p/q"`; field elements are arrays of rational
//! coordinates (a text form such as `"1 + 1/2*t"` is also accepted on input).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactreal::{Field, FieldElement};
use crate::qtrig::{MvTrigPoly, QTrigPoly};
use crate::splinecore::MaskSpec;

pub use crate::exactreal::parse_rational;

pub fn rat_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat_to_json(q: &BigRational) -> Value {
    Value::String(rat_to_string(q))
}

pub fn rat_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string())
            }
        }
        _ => Err(Error::Parse(format!("expected rational, got {v}"))),
    }
}

pub fn field_to_json(f: Field) -> Value {
    json!({ "n": f.radicand(), "k": f.degree() })
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("field.n missing".into()))?;
    let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| Error::Parse("field.k missing".into()))?;
    Field::new(n, u32::try_from(k).map_err(|_| Error::Parse("field.k too large".into()))?)
}

pub fn fe_to_json(x: &FieldElement) -> Value {
    Value::Array(x.coeffs().iter().map(rat_to_json).collect())
}

pub fn fe_from_json(v: &Value, field: Field) -> Result<FieldElement> {
    match v {
        Value::Array(items) => {
            if items.len() > field.degree() as usize {
                return Err(Error::DescriptorMismatch {
                    left: format!("{} coordinates", items.len()),
                    right: field.to_string(),
                });
            }
            let c = items.iter().map(rat_from_json).collect::<Result<Vec<_>>>()?;
            Ok(FieldElement::from_coeffs(field, c))
        }
        Value::String(s) => FieldElement::parse(s, field),
        Value::Number(_) => Ok(FieldElement::from_rational(field, rat_from_json(v)?)),
        _ => Err(Error::Parse(format!("expected field element, got {v}"))),
    }
}

pub fn fe_vec_to_json(v: &[FieldElement]) -> Value {
    Value::Array(v.iter().map(fe_to_json).collect())
}

/// `{"text": ..., "terms": [{"d": fe, "c": "p/q"}, ...]}` in increasing exponent order.
pub fn qtrig_to_json(p: &QTrigPoly) -> Value {
    let terms: Vec<Value> =
        p.terms().map(|(d, c)| json!({ "d": fe_to_json(d), "d_text": d.to_string(), "c": rat_to_json(c) })).collect();
    json!({ "text": p.to_string(), "terms": terms })
}

/// Accepts the object form of [`qtrig_to_json`] or the bare text form.
pub fn qtrig_from_json(v: &Value, field: Field) -> Result<QTrigPoly> {
    if let Value::String(s) = v {
        return QTrigPoly::parse(s, field);
    }
    let terms = get(v, "terms")?.as_array().ok_or_else(|| Error::Parse("terms must be an array".into()))?;
    let mut out = QTrigPoly::zero(field);
    for t in terms {
        out.add_term(fe_from_json(get(t, "d")?, field)?, rat_from_json(get(t, "c")?)?);
    }
    Ok(out)
}

pub fn mvtrig_to_json(p: &MvTrigPoly) -> Value {
    let terms: Vec<Value> = p.terms().map(|(d, c)| json!({ "d": fe_vec_to_json(d), "c": rat_to_json(c) })).collect();
    json!({ "dim": p.dim(), "terms": terms })
}

pub fn mask_to_json(m: &MaskSpec) -> Value {
    json!({
        "lambda": fe_to_json(m.lambda()),
        "lambda_text": m.lambda().to_string(),
        "mask": qtrig_to_json(m.mask()),
        "coefficients": m.coefficients().iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>(),
    })
}

pub fn mask_from_json(v: &Value, field: Field) -> Result<MaskSpec> {
    let lambda = fe_from_json(get(v, "lambda")?, field)?;
    MaskSpec::new(lambda, qtrig_from_json(get(v, "mask")?, field)?)
}

pub(crate) fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}
