//! Valued fields: ℚ with the trivial or a p-adic absolute value, and truncated
//! generalized power series `Σ c_e x^e` (rational exponents, finitely many terms).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use super::resfield::PrimeField;
use crate::error::{Error, Result};
use crate::ovalgroup::{GroupElement, ValueGroupDesc};
use crate::rational::{padic_valuation, parse_q, q, to_i64, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field")]
pub enum FieldKind {
    #[serde(rename = "Q-trivial")]
    Trivial,
    /// `|p| = abs_p`, a rational in `(0, 1)`.
    #[serde(rename = "Q-padic")]
    Padic {
        p: u64,
        #[serde(with = "crate::rational::serde_q")]
        abs_p: Q,
    },
    /// `|x| = abs_x`, a rational in `(0, 1)`; the value group is `abs_x^ℚ`.
    #[serde(rename = "Q-series")]
    Series {
        #[serde(with = "crate::rational::serde_q")]
        abs_x: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuedFieldDesc {
    pub kind: FieldKind,
    pub value_group: ValueGroupDesc,
}

impl ValuedFieldDesc {
    pub fn trivial() -> Self {
        Self { kind: FieldKind::Trivial, value_group: ValueGroupDesc::trivial() }
    }

    /// ℚ with `|p| = 1/p`.
    pub fn padic(p: u64) -> Result<Self> {
        Self::padic_with(p, Q::new(1.into(), p.into()))
    }

    pub fn padic_with(p: u64, abs_p: Q) -> Result<Self> {
        if !crate::rational::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        check_unit_interval(&abs_p)?;
        let value_group = ValueGroupDesc::generated_by(std::slice::from_ref(&abs_p))?;
        Ok(Self { kind: FieldKind::Padic { p, abs_p }, value_group })
    }

    pub fn series(abs_x: Q) -> Result<Self> {
        check_unit_interval(&abs_x)?;
        let value_group = ValueGroupDesc::generated_by(std::slice::from_ref(&abs_x))?;
        Ok(Self { kind: FieldKind::Series { abs_x }, value_group })
    }

    /// Parses `Q-trivial`, `Q-padic:5`, `Q-padic:5:1/2` or `Q-series` / `Q-series:1/3`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["Q-trivial"] => Ok(Self::trivial()),
            ["Q-padic", p] => Self::padic(parse_prime(p)?),
            ["Q-padic", p, a] => Self::padic_with(parse_prime(p)?, parse_q(a)?),
            ["Q-series"] => Self::series(Q::new(1.into(), 2.into())),
            ["Q-series", a] => Self::series(parse_q(a)?),
            _ => Err(Error::Parse(format!("unknown field descriptor `{s}`"))),
        }
    }

    pub fn residue_field(&self) -> PrimeField {
        match self.kind {
            FieldKind::Padic { p, .. } => PrimeField::fp(p),
            _ => PrimeField::rationals(),
        }
    }

    /// Generator of the value group of the field (none when trivially valued).
    pub fn uniformizer_abs(&self) -> Option<GroupElement> {
        match &self.kind {
            FieldKind::Trivial => None,
            FieldKind::Padic { abs_p, .. } => Some(GroupElement::from_rational(abs_p).unwrap()),
            FieldKind::Series { abs_x } => Some(GroupElement::from_rational(abs_x).unwrap()),
        }
    }

    /// Whether the value group of the field is divisible (then any exponent of the
    /// uniformizer is allowed).
    pub fn divisible_values(&self) -> bool {
        matches!(self.kind, FieldKind::Series { .. })
    }

    pub fn is_trivially_valued(&self) -> bool {
        matches!(self.kind, FieldKind::Trivial)
    }

    pub fn abs(&self, a: &FieldElem) -> Option<GroupElement> {
        let (e, c) = a.leading()?;
        Some(match &self.kind {
            FieldKind::Trivial => GroupElement::one(),
            FieldKind::Padic { p, .. } => {
                self.uniformizer_abs().unwrap().pow_int(padic_valuation(c, *p))
            }
            FieldKind::Series { .. } => self.uniformizer_abs().unwrap().pow(e),
        })
    }

    /// Exponent of the uniformizer in `a`: the p-adic valuation or the series order.
    pub fn order(&self, a: &FieldElem) -> Option<Q> {
        let (e, c) = a.leading()?;
        Some(match &self.kind {
            FieldKind::Trivial => Q::zero(),
            FieldKind::Padic { p, .. } => q(padic_valuation(c, *p)),
            FieldKind::Series { .. } => e.clone(),
        })
    }

    /// Residue of `a / π^order(a)` in the residue prime field.
    pub fn unit_residue(&self, a: &FieldElem) -> Option<Q> {
        let (_, c) = a.leading()?;
        Some(match &self.kind {
            FieldKind::Padic { p, .. } => {
                let v = padic_valuation(c, *p);
                let unit = c / uniformizer_power_q(*p, v);
                PrimeField::fp(*p).reduce(&unit)
            }
            _ => c.clone(),
        })
    }

    /// The element `w * π^k`, whose unit residue is `w` and order is `k`.
    pub fn lift(&self, w: &Q, k: &Q) -> Result<FieldElem> {
        match &self.kind {
            FieldKind::Trivial => {
                if !k.is_zero() {
                    return Err(Error::InvalidInput("trivially valued field has no uniformizer".into()));
                }
                Ok(FieldElem::constant(w.clone()))
            }
            FieldKind::Padic { p, .. } => {
                let k = to_i64(k).ok_or_else(|| {
                    Error::Unsupported("fractional power of p in a p-adic lift".into())
                })?;
                Ok(FieldElem::constant(w * uniformizer_power_q(*p, k)))
            }
            FieldKind::Series { .. } => Ok(FieldElem::monomial(w.clone(), k.clone())),
        }
    }

    /// Exponent `k` with `|π|^k = g`, if `g` is a value of the field.
    pub fn order_of_value(&self, g: &GroupElement) -> Option<Q> {
        match self.uniformizer_abs() {
            None => g.is_one().then(Q::zero),
            Some(u) => {
                let k = crate::linalg::coordinates_in_span(&[u], g)?.remove(0);
                (self.divisible_values() || k.is_integer()).then_some(k)
            }
        }
    }
}

fn check_unit_interval(a: &Q) -> Result<()> {
    if !a.is_positive() || a >= &Q::one() {
        return Err(Error::InvalidInput(format!("absolute value {a} must lie in (0, 1)")));
    }
    Ok(())
}

fn parse_prime(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad prime `{s}`")))
}

fn uniformizer_power_q(p: u64, k: i64) -> Q {
    let base = q(p as i64);
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// Element of one of the supported fields: a finite sum `Σ c_e x^e`. Elements of ℚ use
/// only the exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem(pub BTreeMap<Q, Q>);

impl FieldElem {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Q::zero())
    }

    pub fn monomial(c: Q, e: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Self(m)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Lowest-order term.
    pub fn leading(&self) -> Option<(&Q, &Q)> {
        self.0.iter().next()
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => self.0.get(&Q::zero()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (e, c) in &other.0 {
            let s = m.get(e).cloned().unwrap_or_else(Q::zero) + c;
            if s.is_zero() {
                m.remove(e);
            } else {
                m.insert(e.clone(), s);
            }
        }
        Self(m)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                out = out.add(&Self::monomial(c1 * c2, e1 + e2));
            }
        }
        out
    }

    /// Inverse of a single-term element.
    pub fn inv(&self) -> Result<Self> {
        match self.0.len() {
            1 => {
                let (e, c) = self.0.iter().next().unwrap();
                Ok(Self::monomial(c.recip(), -e))
            }
            0 => Err(Error::InvalidInput("division by zero".into())),
            _ => Err(Error::Unsupported("division by a series with several terms".into())),
        }
    }

    /// Value at `x = z` where every exponent times `l` is an integer.
    pub fn eval_param(&self, z: &Q, l: i64) -> Q {
        self.0
            .iter()
            .map(|(e, c)| {
                let k = to_i64(&(e * q(l))).expect("exponent denominators divide l");
                c * pow_q(z, k)
            })
            .fold(Q::zero(), |a, b| a + b)
    }
}

fn pow_q(z: &Q, k: i64) -> Q {
    if k >= 0 {
        num_traits::pow(z.clone(), k as usize)
    } else {
        num_traits::pow(z.recip(), (-k) as usize)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.0 {
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let c = c.abs();
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "x^({e})")?;
            } else {
                write!(f, "{c}*x^({e})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn absolute_values() {
        let k = ValuedFieldDesc::padic(5).unwrap();
        assert_eq!(k.abs(&FieldElem::constant(qf(50, 3))), Some(GroupElement::ratio(1, 25)));
        assert_eq!(k.unit_residue(&FieldElem::constant(q(10))), Some(q(2)));
        let s = ValuedFieldDesc::series(qf(1, 2)).unwrap();
        let a = FieldElem::monomial(q(3), qf(1, 2)).add(&FieldElem::one());
        assert_eq!(s.abs(&a), Some(GroupElement::one()));
        assert_eq!(s.abs(&FieldElem::monomial(q(3), qf(1, 2))), Some(GroupElement::ratio(1, 2).pow(&qf(1, 2))));
        assert_eq!(ValuedFieldDesc::trivial().abs(&FieldElem::from_int(7)), Some(GroupElement::one()));
        assert_eq!(k.abs(&FieldElem::zero()), None);
    }

    #[test]
    fn parse_descriptors() {
        assert_eq!(ValuedFieldDesc::parse("Q-trivial").unwrap(), ValuedFieldDesc::trivial());
        assert!(matches!(ValuedFieldDesc::parse("Q-padic:2:1/2").unwrap().kind, FieldKind::Padic { p: 2, .. }));
        assert!(ValuedFieldDesc::parse("Q-padic:4").is_err());
        assert!(ValuedFieldDesc::parse("Q-series:2").is_err());
    }
}
