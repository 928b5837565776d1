//! JSON encodings of field elements, matrices and root data.
//!
//! Scalars are polynomial strings (`"(1 + 3/2*e^2)/(e - e^3)"`), integers,
//! or Laurent coefficient lists `[[exp, "p/q"], ...]`. Rationals are `"p/q"`
//! strings or integers. Root functions are objects keyed by the root vector
//! written as a JSON array, e.g. `{"[1,-1,0]": 2}`; missing negatives are
//! filled in by symmetry.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rootval::base_field::{parse_rational, parse_ratfunc, ExtRat, QTuple, RatFunc};
use rootval::linalg::LaurentMatrix;
use rootval::root_system::{CartanType, RootFunction, RootSet, RootSystem};
use serde_json::{Map, Value};

#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<rootval::Error> for InputError {
    fn from(e: rootval::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type In<T> = Result<T, InputError>;

fn bad(at: &str, msg: impl fmt::Display) -> InputError {
    InputError(format!("field `{}`: {}", at, msg))
}

pub fn field<'a>(v: &'a Value, name: &str) -> In<&'a Value> {
    v.get(name).ok_or_else(|| InputError(format!("missing field `{}`", name)))
}

pub fn opt_field<'a>(v: &'a Value, name: &str) -> Option<&'a Value> {
    v.get(name).filter(|x| !x.is_null())
}

pub fn int(v: &Value, at: &str) -> In<i64> {
    v.as_i64().ok_or_else(|| bad(at, "expected an integer"))
}

pub fn ints(v: &Value, at: &str) -> In<Vec<i64>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &format!("{}[{}]", at, i)))
        .collect()
}

pub fn usizes(v: &Value, at: &str) -> In<Vec<usize>> {
    ints(v, at)?
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| bad(at, "expected non-negative integers")))
        .collect()
}

fn array<'a>(v: &'a Value, at: &str) -> In<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(at, "expected an array"))
}

pub fn rational(v: &Value, at: &str) -> In<BigRational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| bad(at, e)),
        Value::Number(_) => Ok(BigRational::from_integer(BigInt::from(int(v, at)?))),
        _ => Err(bad(at, "expected a rational \"p/q\" or an integer")),
    }
}

pub fn rationals(v: &Value, at: &str) -> In<Vec<BigRational>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{}[{}]", at, i)))
        .collect()
}

pub fn scalar(v: &Value, at: &str) -> In<RatFunc> {
    match v {
        Value::String(s) => parse_ratfunc(s).map_err(|e| bad(at, e)),
        Value::Number(_) => Ok(RatFunc::from_int(int(v, at)?)),
        Value::Array(pairs) => {
            let mut terms = Vec::with_capacity(pairs.len());
            for (i, p) in pairs.iter().enumerate() {
                let at = format!("{}[{}]", at, i);
                match p.as_array().map(Vec::as_slice) {
                    Some([e, c]) => terms.push((int(e, &at)?, rational(c, &at)?)),
                    _ => return Err(bad(&at, "expected an [exponent, coefficient] pair")),
                }
            }
            Ok(RatFunc::laurent(&terms))
        }
        _ => Err(bad(at, "expected a field element")),
    }
}

pub fn scalars(v: &Value, at: &str) -> In<Vec<RatFunc>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("{}[{}]", at, i)))
        .collect()
}

/// A matrix given as a list of rows.
pub fn matrix(v: &Value, at: &str) -> In<LaurentMatrix> {
    let rows = array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, r)| scalars(r, &format!("{}[{}]", at, i)))
        .collect::<In<Vec<_>>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad(at, "rows must be non-empty and of equal length"));
    }
    LaurentMatrix::from_rows(rows).map_err(|e| bad(at, e))
}

pub fn square(v: &Value, at: &str) -> In<LaurentMatrix> {
    let m = matrix(v, at)?;
    if !m.is_square() {
        return Err(bad(at, "expected a square matrix"));
    }
    Ok(m)
}

/// A list of column vectors.
pub fn vectors(v: &Value, at: &str) -> In<Vec<Vec<RatFunc>>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, c)| scalars(c, &format!("{}[{}]", at, i)))
        .collect()
}

pub fn root_system(input: &Value, ty: Option<&str>, rank: Option<usize>) -> In<RootSystem> {
    let ty = match ty {
        Some(t) => t.to_string(),
        None => field(input, "type")?
            .as_str()
            .ok_or_else(|| bad("type", "expected a string such as \"B\""))?
            .to_string(),
    };
    let rank = match rank {
        Some(r) => r,
        None => usize::try_from(int(field(input, "rank")?, "rank")?).map_err(|_| bad("rank", "negative"))?,
    };
    let t = CartanType::parse(&ty).map_err(|e| bad("type", e))?;
    RootSystem::build(t, rank).map_err(|e| bad("rank", e))
}

fn root_key(s: &str) -> Option<Vec<i64>> {
    serde_json::from_str::<Vec<i64>>(s).ok().or_else(|| {
        s.split(',').map(|t| t.trim().parse().ok()).collect()
    })
}

pub fn root(rs: &RootSystem, v: &[i64], at: &str) -> In<usize> {
    rs.root_index(v).ok_or_else(|| bad(at, format!("{:?} is not a root of {}", v, rs.name())))
}

pub fn root_function(rs: &RootSystem, v: &Value, at: &str) -> In<RootFunction> {
    let obj = v.as_object().ok_or_else(|| bad(at, "expected an object keyed by root vectors"))?;
    let mut vals: Vec<Option<i64>> = vec![None; rs.num_roots()];
    for (k, x) in obj {
        let key = format!("{}.{}", at, k);
        let vec = root_key(k).ok_or_else(|| bad(&key, "key is not an integer vector"))?;
        vals[root(rs, &vec, &key)?] = Some(int(x, &key)?);
    }
    let mut out = Vec::with_capacity(vals.len());
    for a in 0..rs.num_roots() {
        match (vals[a], vals[rs.neg(a)]) {
            (Some(x), _) | (None, Some(x)) => out.push(x),
            (None, None) => return Err(bad(at, format!("no value for the root {:?}", rs.root(a)))),
        }
    }
    Ok(RootFunction::new(out))
}

/// A list of root vectors; negatives are added.
pub fn root_set(rs: &RootSystem, v: &Value, at: &str) -> In<RootSet> {
    let mut s = RootSet::default();
    for (i, x) in array(v, at)?.iter().enumerate() {
        let key = format!("{}[{}]", at, i);
        let a = root(rs, &ints(x, &key)?, &key)?;
        s.insert(a);
        s.insert(rs.neg(a));
    }
    Ok(s)
}

// ---------------------------------------------------------------- output

pub fn out_scalar(x: &RatFunc) -> Value {
    Value::String(x.to_string())
}

pub fn out_tuple(t: &QTuple) -> Value {
    Value::Array(t.entries().iter().map(|e: &ExtRat| Value::String(e.to_string())).collect())
}

pub fn out_matrix(m: &LaurentMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(out_scalar).collect())).collect())
}

fn key(v: &[i64]) -> String {
    serde_json::to_string(v).expect("integers serialize")
}

pub fn out_root_function(rs: &RootSystem, f: &RootFunction) -> Value {
    let mut m = Map::new();
    for a in 0..rs.num_roots() {
        m.insert(key(rs.root(a)), Value::from(f[a]));
    }
    Value::Object(m)
}

pub fn out_root_set(rs: &RootSystem, s: RootSet) -> Value {
    Value::Array(s.iter().map(|a| Value::String(key(rs.root(a)))).collect())
}
