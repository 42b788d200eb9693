//! Sparse Laurent polynomials over a valued field, with a small text parser.

use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::field::{FieldElem, FieldKind, ValuedFieldDesc};
use crate::error::{Error, Result};
use crate::ovalgroup::GroupElement;
use crate::rational::{parse_q, q, Q};

/// `Σ a_I T^I` with integer (possibly negative) exponent vectors and nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuedPolynomial {
    pub field: ValuedFieldDesc,
    pub vars: Vec<String>,
    pub terms: BTreeMap<Vec<i64>, FieldElem>,
}

impl ValuedPolynomial {
    pub fn zero(field: &ValuedFieldDesc, vars: &[String]) -> Self {
        Self { field: field.clone(), vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &ValuedFieldDesc, vars: &[String], c: FieldElem) -> Self {
        Self::monomial(field, vars, c, vec![0; vars.len()])
    }

    pub fn monomial(field: &ValuedFieldDesc, vars: &[String], c: FieldElem, exp: Vec<i64>) -> Self {
        let mut p = Self::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable `vars[i]`.
    pub fn var(field: &ValuedFieldDesc, vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(field, vars, FieldElem::one(), e)
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Cached-style access to `|a_I|` for every monomial.
    pub fn coefficient_values(&self) -> Vec<(Vec<i64>, GroupElement)> {
        self.terms.iter().map(|(e, c)| (e.clone(), self.field.abs(c).unwrap())).collect()
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let s = out.terms.get(e).map(|a| a.add(c)).unwrap_or_else(|| c.clone());
            if s.is_zero() {
                out.terms.remove(e);
            } else {
                out.terms.insert(e.clone(), s);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = Self::zero(&self.field, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let term = Self::monomial(&self.field, &self.vars, c1.mul(c2), e);
                out = out.add(&term);
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut out = Self::zero(&self.field, &self.vars);
        for (e, a) in &self.terms {
            let m = a.mul(c);
            if !m.is_zero() {
                out.terms.insert(e.clone(), m);
            }
        }
        out
    }

    /// Power with a nonnegative exponent, or a negative one for a monomial.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            if self.terms.len() != 1 {
                return Err(Error::InvalidInput("negative power of a polynomial with several terms".into()));
            }
            let (e, c) = self.terms.iter().next().unwrap();
            let inv = Self::monomial(&self.field, &self.vars, c.inv()?, e.iter().map(|x| -x).collect());
            return inv.pow(-k);
        }
        let mut out = Self::constant(&self.field, &self.vars, FieldElem::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Coefficients in the variable `vars[i]` (which must occur with nonnegative exponents),
    /// each a polynomial in the remaining variables.
    pub fn coefficients_in(&self, i: usize) -> Result<Vec<ValuedPolynomial>> {
        let rest: Vec<String> = self.vars.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        let mut out: Vec<ValuedPolynomial> = Vec::new();
        for (e, c) in &self.terms {
            let k = usize::try_from(e[i]).map_err(|_| {
                Error::InvalidInput(format!("negative power of {} in a polynomial in {}", self.vars[i], self.vars[i]))
            })?;
            while out.len() <= k {
                out.push(Self::zero(&self.field, &rest));
            }
            let mut r = e.clone();
            r.remove(i);
            out[k].terms.insert(r, c.clone());
        }
        Ok(out)
    }

    /// Inverse of `coefficients_in`: `Σ coeffs[k] * Y^k` with `Y` inserted at position `i`.
    pub fn from_coefficients(coeffs: &[ValuedPolynomial], i: usize, name: &str) -> Self {
        let base = &coeffs[0];
        let mut vars = base.vars.clone();
        vars.insert(i, name.to_string());
        let mut out = Self::zero(&base.field, &vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut full = e.clone();
                full.insert(i, k as i64);
                out.terms.insert(full, a.clone());
            }
        }
        out
    }

    /// Substitutes `T_i -> c_i * T_i` for field elements `c_i`.
    pub fn rescale(&self, c: &[FieldElem]) -> Result<Self> {
        let mut out = Self::zero(&self.field, &self.vars);
        for (e, a) in &self.terms {
            let mut m = a.clone();
            for (ci, &k) in c.iter().zip(e) {
                let f = if k >= 0 { pow_elem(ci, k) } else { pow_elem(&ci.inv()?, -k) };
                m = m.mul(&f);
            }
            out = out.add(&Self::monomial(&self.field, &self.vars, m, e.clone()));
        }
        Ok(out)
    }

    /// Value of every coefficient at `T = z`, with the series parameter at `x = s^l`.
    pub fn eval_point(&self, z: &[Q], s: &Q, l: i64) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.eval_param(s, l);
            for (zi, &k) in z.iter().zip(e) {
                m *= if k >= 0 {
                    num_traits::pow(zi.clone(), k as usize)
                } else {
                    num_traits::pow(zi.recip(), (-k) as usize)
                };
            }
            acc += m;
        }
        acc
    }

    /// Parses with variables ordered automatically (see [`sort_vars`]).
    pub fn parse(s: &str, field: &ValuedFieldDesc) -> Result<Self> {
        let tokens = tokenize(s)?;
        let param = series_param(field);
        let names: BTreeSet<String> = tokens
            .iter()
            .filter_map(|t| match t {
                Tok::Ident(v) if Some(v.as_str()) != param => Some(v.clone()),
                _ => None,
            })
            .collect();
        let vars = sort_vars(names.into_iter().collect());
        Self::parse_with_vars_tokens(&tokens, field, &vars)
    }

    /// Parses over an explicit list of variables.
    pub fn parse_with_vars(s: &str, field: &ValuedFieldDesc, vars: &[String]) -> Result<Self> {
        Self::parse_with_vars_tokens(&tokenize(s)?, field, vars)
    }

    fn parse_with_vars_tokens(tokens: &[Tok], field: &ValuedFieldDesc, vars: &[String]) -> Result<Self> {
        let mut p = Parser { toks: tokens, pos: 0, field, vars };
        let out = p.expr()?;
        if p.pos != tokens.len() {
            return Err(Error::Parse(format!("unexpected token {:?}", tokens[p.pos])));
        }
        Ok(out)
    }
}

fn pow_elem(c: &FieldElem, k: i64) -> FieldElem {
    (0..k).fold(FieldElem::one(), |acc, _| acc.mul(c))
}

fn series_param(field: &ValuedFieldDesc) -> Option<&'static str> {
    matches!(field.kind, FieldKind::Series { .. }).then_some("x")
}

/// Orders variable names by their alphabetic stem, then by numeric suffix, so that
/// `T2 < T10` and `X < Y`.
pub fn sort_vars(mut names: Vec<String>) -> Vec<String> {
    names.sort_by_key(|v| {
        let stem: String = v.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
        let idx: u64 = v[stem.len()..].parse().unwrap_or(0);
        (stem, idx)
    });
    names
}

impl fmt::Display for ValuedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let (negative, coeff) = match c.as_rational() {
                Some(r) => (r.is_negative(), r.abs()),
                None => (false, Q::zero()),
            };
            let coeff = if c.as_rational().is_some() { coeff.to_string() } else { format!("({c})") };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_q(&text)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    field: &'a ValuedFieldDesc,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: FieldElem) -> ValuedPolynomial {
        ValuedPolynomial::constant(self.field, self.vars, c)
    }

    fn expr(&mut self) -> Result<ValuedPolynomial> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ValuedPolynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                if d.terms.len() != 1 {
                    return Err(Error::Parse("division is only allowed by a monomial".into()));
                }
                acc = acc.mul(&d.pow(-1)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<ValuedPolynomial> {
        let (base, is_param) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if is_param {
            let mut out = self.constant(FieldElem::zero());
            for (k, c) in &base.terms[&vec![0; self.vars.len()]].0 {
                out = out.add(&self.constant(FieldElem::monomial(c.clone(), k * &e)));
            }
            return Ok(out);
        }
        if !e.is_integer() {
            return Err(Error::Parse("only the series parameter takes fractional exponents".into()));
        }
        let k: i64 = e.to_integer().try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
        base.pow(k)
    }

    fn exponent(&mut self) -> Result<Q> {
        let neg = self.eat('-');
        let v = if self.eat('(') {
            let neg_inner = self.eat('-');
            let n = self.number()?;
            let v = if self.eat('/') { n / self.number()? } else { n };
            if !self.eat(')') {
                return Err(Error::Parse("missing `)` in exponent".into()));
            }
            if neg_inner { -v } else { v }
        } else {
            self.number()?
        };
        Ok(if neg { -v } else { v })
    }

    fn number(&mut self) -> Result<Q> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            other => Err(Error::Parse(format!("expected a number, found {other:?}"))),
        }
    }

    /// An atom, and whether it is the bare series parameter.
    fn atom(&mut self) -> Result<(ValuedPolynomial, bool)> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok((self.constant(FieldElem::constant(v)), false))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if Some(name.as_str()) == series_param(self.field) {
                    return Ok((self.constant(FieldElem::monomial(Q::one(), q(1))), true));
                }
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok((ValuedPolynomial::var(self.field, self.vars, i), false))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok((e, false))
            }
            Some(tok) => Err(Error::Parse(format!("unexpected token {tok:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn triv() -> ValuedFieldDesc {
        ValuedFieldDesc::trivial()
    }

    #[test]
    fn display_parses_back() {
        let cases = [
            ("Y^2 - X*(X-1)", "Q-trivial"),
            ("-1/2*T1^3 + 7 - T2", "Q-trivial"),
            ("25*X*Y - 1/5", "Q-padic:5"),
            ("(x^(1/2) - 3*x)*Y + x^(-1) - Y^2", "Q-series"),
        ];
        for (text, field) in cases {
            let f = ValuedFieldDesc::parse(field).unwrap();
            let p = ValuedPolynomial::parse(text, &f).unwrap();
            let again = ValuedPolynomial::parse_with_vars(&p.to_string(), &f, &p.vars).unwrap();
            assert_eq!(again, p, "{text} printed as {p}");
        }
        let p = ValuedPolynomial::parse("Y^2 - X*(X-1)", &triv()).unwrap();
        assert_eq!(p.to_string(), "-X^2 + X + Y^2");
    }

    #[test]
    fn parses_polynomials() {
        let p = ValuedPolynomial::parse("Y^2 - X*(X-1)", &triv()).unwrap();
        assert_eq!(p.vars, vec!["X", "Y"]);
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.terms[&vec![1, 0]], FieldElem::from_int(1));
        assert_eq!(p.terms[&vec![2, 0]], FieldElem::from_int(-1));
        let q2 = ValuedPolynomial::parse("1 + T2 + T10/2", &triv()).unwrap();
        assert_eq!(q2.vars, vec!["T2", "T10"]);
        assert_eq!(q2.terms[&vec![0, 1]], FieldElem::constant(qf(1, 2)));
        let l = ValuedPolynomial::parse("T^-2 + 3", &triv()).unwrap();
        assert!(l.terms.contains_key(&vec![-2]));
        let s = ValuedFieldDesc::series(qf(1, 2)).unwrap();
        let ps = ValuedPolynomial::parse("1 + x^(1/2)*T", &s).unwrap();
        assert_eq!(ps.vars, vec!["T"]);
        assert_eq!(ps.terms[&vec![1]], FieldElem::monomial(Q::one(), qf(1, 2)));
        assert!(ValuedPolynomial::parse("1 + (T", &triv()).is_err());
        assert!(ValuedPolynomial::parse("T^(1/2)", &triv()).is_err());
    }

    #[test]
    fn coefficients_round_trip() {
        let p = ValuedPolynomial::parse("Y^2 - X*(X-1) + 3*X*Y", &triv()).unwrap();
        let c = p.coefficients_in(1).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(ValuedPolynomial::from_coefficients(&c, 1, "Y"), p);
    }
}
