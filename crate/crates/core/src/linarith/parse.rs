//! Text syntax: `t1 <= 2*t2 & t2 < 4 | t1 = t2^(1/2)`.
//!
//! Disjuncts are separated by `|`, atoms by `&`. Each side of a comparison is a product of
//! factors joined by `*` or `/`; a factor is a variable `t<i>` (1-based) or a group element
//! such as `3`, `1/2`, `w1`, each optionally raised to a rational power `^e` or `^(e)`.

use super::{AffForm, Atom, DefinableSet};
use crate::error::{Error, Result};
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::{parse_q, Q};
use num_traits::{One, Zero};

fn split_top(s: &str, seps: &[char]) -> Vec<(char, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut op = '*';
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        // A '/' inside an exponent such as `^1/2` without parentheses is ambiguous; we
        // read it as division.
        if depth == 0 && seps.contains(&ch) {
            out.push((op, std::mem::take(&mut cur)));
            op = ch;
        } else {
            cur.push(ch);
        }
    }
    out.push((op, cur));
    out
}

/// Parses one side of a comparison as a form in `n` variables.
pub fn parse_form(s: &str, n: usize) -> Result<AffForm> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    let mut form = AffForm::constant(n, GroupElement::one());
    // Leading "1/x" style quotients: a numeric literal followed by '/' and a digit is a
    // rational constant.
    let pieces = split_top(&s, &['*', '/']);
    let mut i = 0;
    while i < pieces.len() {
        let (op, mut tok) = pieces[i].clone();
        // Merge `a/b` where both are plain integers into one rational literal.
        if i + 1 < pieces.len()
            && pieces[i + 1].0 == '/'
            && is_int(&tok)
            && is_int(&pieces[i + 1].1)
        {
            tok = format!("{}/{}", tok, pieces[i + 1].1);
            i += 1;
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b.to_string(), parse_q(e.trim_start_matches('(').trim_end_matches(')'))?),
            None => (tok.clone(), Q::one()),
        };
        let exp = if op == '/' { -exp } else { exp };
        let factor = if let Some(idx) = base.strip_prefix('t') {
            let k: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable `{base}`")))?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("variable `{base}` outside 1..{n}")));
            }
            let mut coeffs = vec![Q::zero(); n];
            coeffs[k - 1] = exp;
            AffForm::new(coeffs, GroupElement::one())
        } else {
            let b = base.trim_start_matches('(').trim_end_matches(')');
            AffForm::constant(n, GroupElement::parse(b)?.pow(&exp))
        };
        form = form.mul(&factor);
        i += 1;
    }
    Ok(form)
}

fn is_int(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

fn parse_atom(s: &str, n: usize) -> Result<Vec<Atom>> {
    for op in ["<=", ">=", "<", ">", "="] {
        if let Some((l, r)) = s.split_once(op) {
            let l = parse_form(l, n)?;
            let r = parse_form(r, n)?;
            return Ok(match op {
                "<=" => vec![Atom::le_between(&l, &r)],
                ">=" => vec![Atom::le_between(&r, &l)],
                "<" => vec![Atom::lt_between(&l, &r)],
                ">" => vec![Atom::lt_between(&r, &l)],
                _ => Atom::eq_between(&l, &r).to_vec(),
            });
        }
    }
    Err(Error::Parse(format!("atom `{s}` has no comparison")))
}

/// Parses a set in `n` variables; `true` is the whole space and `false` the empty set.
pub fn parse_set(s: &str, n: usize) -> Result<DefinableSet> {
    let mut disjuncts = Vec::new();
    for d in s.split('|') {
        let d = d.trim();
        if d == "false" {
            continue;
        }
        let mut atoms = Vec::new();
        if d != "true" {
            for a in d.split('&') {
                atoms.extend(parse_atom(a.trim(), n)?);
            }
        }
        disjuncts.push(atoms);
    }
    Ok(DefinableSet::new(n, disjuncts, ValueGroupDesc::rationals()))
}

/// Parses a point `x1,x2,...` of group elements.
pub fn parse_point(s: &str) -> Result<Vec<GroupElement>> {
    s.split(',').map(|x| GroupElement::parse(x.trim())).collect()
}
