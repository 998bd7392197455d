//! JSON encodings shared by the library and the command-line front-end.
//!
//! Integers are written as decimal strings, rationals as `"a/b"`. A p-adic
//! element is a single string over `Z_p` and an array of basis coefficients
//! over an extension.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::RingContext;
use crate::poly::Poly;
use crate::ring::{format_rational, parse_rational, CoeffRing, Rationals};

/// Coefficient rings with a JSON encoding.
pub trait JsonRing: CoeffRing {
    /// `"exact"` or `"padic"`.
    const MODE: &'static str;
    fn ring_json(&self) -> Option<Value>;
    fn elem_json(&self, x: &Self::Elem) -> Value;
    fn parse_elem(&self, v: &Value) -> Result<Self::Elem>;
}

impl JsonRing for Rationals {
    const MODE: &'static str = "exact";

    fn ring_json(&self) -> Option<Value> {
        None
    }

    fn elem_json(&self, x: &BigRational) -> Value {
        Value::String(format_rational(x))
    }

    fn parse_elem(&self, v: &Value) -> Result<BigRational> {
        parse_rational(&scalar_text(v)?)
    }
}

impl JsonRing for RingContext {
    const MODE: &'static str = "padic";

    fn ring_json(&self) -> Option<Value> {
        Some(json!({
            "p": self.p().to_string(),
            "precision": self.precision(),
            "modulus": ints_json(self.modulus()),
        }))
    }

    fn elem_json(&self, x: &crate::PadicElement) -> Value {
        if self.degree() == 1 {
            Value::String(x.coeffs()[0].to_string())
        } else {
            ints_json(x.coeffs())
        }
    }

    fn parse_elem(&self, v: &Value) -> Result<crate::PadicElement> {
        match v {
            Value::Array(items) => {
                let c = items.iter().map(parse_int).collect::<Result<Vec<_>>>()?;
                self.from_coeffs(&c)
            }
            _ => self.from_rational(&parse_rational(&scalar_text(v)?)?),
        }
    }
}

fn scalar_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => Err(Error::Schema(format!("expected an integer or rational, got {v}"))),
    }
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    let s = scalar_text(v)?.replace('\u{2212}', "-");
    s.trim()
        .parse()
        .map_err(|_| Error::Schema(format!("not an integer: {s:?}")))
}

pub fn ints_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

/// Parses `{"p", "precision", "modulus"?}`; a missing modulus means `Z_p`.
pub fn parse_ring(v: &Value) -> Result<RingContext> {
    let p = field_u64(v, "p")?;
    let m = field_u64(v, "precision")? as u32;
    match v.get("modulus") {
        None | Some(Value::Null) => RingContext::base(p, m),
        Some(Value::Array(items)) => {
            let c = items.iter().map(parse_int).collect::<Result<Vec<_>>>()?;
            RingContext::new(p, m, &c)
        }
        Some(other) => Err(Error::Schema(format!("modulus must be an array, got {other}"))),
    }
}

pub fn field_u64(v: &Value, key: &str) -> Result<u64> {
    let f = v
        .get(key)
        .ok_or_else(|| Error::Schema(format!("missing field {key:?}")))?;
    parse_int(f)?
        .try_into()
        .map_err(|_| Error::Schema(format!("field {key:?} out of range")))
}

pub fn poly_json<R: JsonRing>(f: &Poly<R>) -> Value {
    Value::Array(f.coeffs().iter().map(|c| f.ring().elem_json(c)).collect())
}

/// Parses a coefficient array (constant term first), or a string holding one.
pub fn parse_poly<R: JsonRing>(ring: &R, v: &Value) -> Result<Poly<R>> {
    let arr = match v {
        Value::String(s) => {
            let s = s.replace('\u{2212}', "-");
            serde_json::from_str::<Value>(&s)
                .map_err(|e| Error::Schema(format!("bad polynomial {s:?}: {e}")))?
        }
        other => other.clone(),
    };
    let items = arr
        .as_array()
        .ok_or_else(|| Error::Schema("polynomial must be an array of coefficients".into()))?;
    let c = items
        .iter()
        .map(|x| ring.parse_elem(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(ring.clone(), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_and_elements() {
        let r = parse_ring(&json!({"p": 3, "precision": "8", "modulus": ["-1", "-1", "1"]})).unwrap();
        assert_eq!(r.degree(), 2);
        let w = r.parse_elem(&json!(["0", "1"])).unwrap();
        assert_eq!(w, r.generator());
        assert_eq!(r.elem_json(&w), json!(["0", "1"]));
        let z3 = parse_ring(&json!({"p": "3", "precision": 4})).unwrap();
        let x = z3.parse_elem(&json!("-1/2")).unwrap();
        assert_eq!(z3.elem_json(&x), json!("40"));
        assert!(parse_ring(&json!({"p": 3})).is_err());
    }

    #[test]
    fn polynomials() {
        let f = parse_poly(&Rationals, &json!("[\u{2212}3,9,6,1]")).unwrap();
        assert_eq!(f, Poly::from_ints(Rationals, &[-3, 9, 6, 1]));
        assert_eq!(poly_json(&f), json!(["-3", "9", "6", "1"]));
        assert!(parse_poly(&Rationals, &json!("[1,")).is_err());
        assert!(parse_poly(&Rationals, &json!({"a": 1})).is_err());
    }
}
