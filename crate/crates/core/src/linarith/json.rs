use serde_json::{json, Value};

use super::{AffForm, Atom, DefinableSet, Rel};
use crate::error::{Error, Result};
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::parse_q;

fn atom_to_json(a: &Atom) -> Value {
    json!({
        "a": a.form.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "g": a.form.constant.to_json(),
        "rel": if a.rel == Rel::Lt { "lt" } else { "le" },
    })
}

pub(super) fn set_to_json(d: &DefinableSet) -> Value {
    let or: Vec<Value> = d
        .disjuncts
        .iter()
        .map(|c| json!({ "and": c.iter().map(atom_to_json).collect::<Vec<_>>() }))
        .collect();
    json!({ "n": d.n, "or": or, "params": serde_json::to_value(&d.params).unwrap() })
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Coefficients may be strings (`"1/2"`) or integers.
fn parse_coeff(v: &Value) -> Result<crate::rational::Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => n
            .as_i64()
            .map(crate::rational::q)
            .ok_or_else(|| parse_err(format!("non-integer numeric coefficient {n}"))),
        _ => Err(parse_err("coefficient must be a string or an integer")),
    }
}

pub(crate) fn element_from_json(v: &Value) -> Result<GroupElement> {
    match v {
        Value::String(s) => GroupElement::parse(s),
        Value::Number(_) => GroupElement::parse(&v.to_string()),
        Value::Object(_) => {
            serde_json::from_value(v.clone()).map_err(|e| parse_err(e.to_string()))
        }
        _ => Err(parse_err("group element must be a string or {\"exp\": ...}")),
    }
}

fn atom_from_json(v: &Value, n: usize) -> Result<Atom> {
    let a = v
        .get("a")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("atom needs an `a` array"))?;
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    let coeffs = a.iter().map(parse_coeff).collect::<Result<Vec<_>>>()?;
    let g = match v.get("g") {
        Some(g) => element_from_json(g)?,
        None => GroupElement::one(),
    };
    let rel = match v.get("rel").and_then(Value::as_str).unwrap_or("le") {
        "le" | "<=" => Rel::Le,
        "lt" | "<" => Rel::Lt,
        other => return Err(parse_err(format!("unknown relation `{other}`"))),
    };
    Ok(Atom::new(AffForm::new(coeffs, g), rel))
}

pub(super) fn set_from_json(v: &Value) -> Result<DefinableSet> {
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("definable set needs an integer `n`"))? as usize;
    let or = v
        .get("or")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("definable set needs an `or` array"))?;
    let params: ValueGroupDesc = match v.get("params") {
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| parse_err(e.to_string()))?,
        None => ValueGroupDesc::rationals(),
    };
    let mut disjuncts = Vec::with_capacity(or.len());
    for d in or {
        let and = d
            .get("and")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("each disjunct needs an `and` array"))?;
        disjuncts.push(and.iter().map(|a| atom_from_json(a, n)).collect::<Result<Vec<_>>>()?);
    }
    Ok(DefinableSet::new(n, disjuncts, params))
}
