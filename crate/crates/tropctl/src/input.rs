//! Parsing of command-line operands.

use serde_json::Value;
use tropcore::gaussfield::{ValuedFieldDesc, ValuedPolynomial};
use tropcore::linarith::{parse_point, parse_set, DefinableSet};
use tropcore::{Error, GroupElement, Result};

/// Reads `@path` as a file and returns anything else verbatim.
pub fn text_or_file(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

/// `Q-padic:5` style descriptors or a JSON block such as `{"field": "Q-padic", "p": 5}`.
pub fn field(s: &str) -> Result<ValuedFieldDesc> {
    let s = text_or_file(s)?;
    if !s.trim_start().starts_with('{') {
        return ValuedFieldDesc::parse(&s);
    }
    let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse(e.to_string()))?;
    let name = v.get("field").and_then(Value::as_str).ok_or_else(|| Error::Parse("field block needs `field`".into()))?;
    let mut desc = name.to_string();
    for key in ["p", "abs"] {
        match v.get(key) {
            Some(Value::Number(n)) => desc.push_str(&format!(":{n}")),
            Some(Value::String(x)) => desc.push_str(&format!(":{x}")),
            _ => {}
        }
    }
    ValuedFieldDesc::parse(&desc)
}

pub fn poly(s: &str, field: &ValuedFieldDesc) -> Result<ValuedPolynomial> {
    ValuedPolynomial::parse(&text_or_file(s)?, field)
}

/// Comma-separated group elements.
pub fn point(s: &str) -> Result<Vec<GroupElement>> {
    parse_point(s)
}

/// `s:t` with both ends group elements.
pub fn range(s: &str) -> Result<(GroupElement, GroupElement)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("range `{s}` must look like s:t")))?;
    let (a, b) = (GroupElement::parse(a)?, GroupElement::parse(b)?);
    if a > b {
        return Err(Error::InvalidInput(format!("empty range {s}")));
    }
    Ok((a, b))
}

/// Highest `tK` index mentioned in a set written in text syntax.
fn arity(s: &str) -> usize {
    let b = s.as_bytes();
    let mut n = 0;
    for i in 0..b.len() {
        if b[i] == b't' && (i == 0 || !b[i - 1].is_ascii_alphanumeric()) {
            let digits: String = s[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                n = n.max(k);
            }
        }
    }
    n
}

/// A set given in text syntax, as JSON, or as `@file` holding either. JSON artifacts
/// that wrap a set under `set` or `carrier` are accepted too.
pub fn set(s: &str, n: Option<usize>) -> Result<DefinableSet> {
    let s = text_or_file(s)?;
    if s.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse(e.to_string()))?;
        let inner = ["set", "carrier"].iter().find_map(|k| v.get(*k)).unwrap_or(&v);
        let d = DefinableSet::from_json(inner)?;
        if let Some(n) = n.filter(|&n| n != d.n) {
            return Err(Error::DimensionMismatch { expected: n, got: d.n });
        }
        return Ok(d);
    }
    let n = n.unwrap_or_else(|| arity(&s).max(1));
    parse_set(&s, n)
}

/// Rows separated by `;`, entries by `,`.
pub fn matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|r| r.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("`{x}`: {e}")))).collect())
        .collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Parse("matrix rows differ in length".into()));
    }
    Ok(rows)
}

/// 1-based coordinate indices separated by commas.
pub fn coordinates(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            let k: usize = x.trim().trim_start_matches('t').parse().map_err(|_| Error::Parse(format!("bad coordinate `{x}`")))?;
            if k == 0 || k > n {
                return Err(Error::InvalidInput(format!("coordinate {k} outside 1..={n}")));
            }
            Ok(k - 1)
        })
        .collect()
}
