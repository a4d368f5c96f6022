//! JSON encoding: a polynomial is an array of `[coeff, e_q, e_T]` with the
//! coefficient as a decimal string, in ascending `(e_T, e_q)` order; a
//! rational function is `{"num": ..., "unit": [sign, e_q, e_T], "den": [[a, b, mult], ...]}`.

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::poly::Poly;
use super::rational::{FactoredRational, SignedMonomial};
use crate::error::{Error, Result};

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.terms().map(|(c, eq, et)| json!([c.to_string(), eq, et])).collect())
}

fn bad(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| bad("polynomial must be an array"))?;
    let mut p = Poly::zero();
    let mut last: Option<(u64, i64)> = None;
    for t in arr {
        let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("term must be [coeff, e_q, e_T]"))?;
        let c: BigInt = t[0]
            .as_str()
            .ok_or_else(|| bad("coefficient must be a string"))?
            .parse()
            .map_err(|_| bad("coefficient is not an integer"))?;
        let eq = t[1].as_i64().ok_or_else(|| bad("e_q must be an integer"))?;
        let et = t[2].as_u64().ok_or_else(|| bad("e_T must be a nonnegative integer"))?;
        if c == BigInt::from(0) {
            return Err(bad("zero coefficient"));
        }
        if last.is_some_and(|l| l >= (et, eq)) {
            return Err(bad("terms out of order or repeated"));
        }
        last = Some((et, eq));
        p.add_term(c, eq, u32::try_from(et).map_err(|_| bad("e_T too large"))?);
    }
    Ok(p)
}

pub fn rational_to_json(f: &FactoredRational) -> Value {
    let u = f.unit();
    json!({
        "num": poly_to_json(f.numerator()),
        "unit": [u.sign, u.e_q, u.e_t],
        "den": f.den_factors().iter().map(|&(a, b, m)| json!([a, b, m])).collect::<Vec<_>>(),
    })
}

pub fn rational_from_json(v: &Value) -> Result<FactoredRational> {
    let num = poly_from_json(v.get("num").ok_or_else(|| bad("missing num"))?)?;
    let u = v
        .get("unit")
        .and_then(Value::as_array)
        .filter(|u| u.len() == 3)
        .ok_or_else(|| bad("unit must be [sign, e_q, e_T]"))?;
    let sign = u[0].as_i64().filter(|s| *s == 1 || *s == -1).ok_or_else(|| bad("sign must be +-1"))?;
    let unit = SignedMonomial::new(
        sign as i8,
        u[1].as_i64().ok_or_else(|| bad("unit e_q"))?,
        u[2].as_i64().ok_or_else(|| bad("unit e_T"))?,
    );
    let mut den = Vec::new();
    for d in v.get("den").and_then(Value::as_array).ok_or_else(|| bad("missing den"))? {
        let d = d.as_array().filter(|d| d.len() == 3).ok_or_else(|| bad("factor must be [a, b, mult]"))?;
        let a = d[0].as_i64().ok_or_else(|| bad("factor a"))?;
        let b = d[1].as_u64().and_then(|b| u32::try_from(b).ok()).ok_or_else(|| bad("factor b"))?;
        let m = d[2]
            .as_u64()
            .and_then(|m| u32::try_from(m).ok())
            .filter(|m| *m > 0)
            .ok_or_else(|| bad("factor multiplicity"))?;
        if a == 0 && b == 0 {
            return Err(bad("factor (1 - 1) is zero"));
        }
        den.push((a, b, m));
    }
    Ok(FactoredRational::new(num, unit, den))
}
