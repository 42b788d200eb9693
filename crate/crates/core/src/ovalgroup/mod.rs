//! Divisible ordered abelian groups in multiplicative notation.
//!
//! A [`GroupElement`] is a formal product of generators with rational exponents. The
//! generators are primes (the archimedean part, a subgroup of the positive rationals made
//! divisible) and infinitesimals `w1, w2, ...`. Each `wk` is infinitely close to 1 from above
//! relative to the group generated by the rationals and `w1 .. w(k-1)`, so the order is
//! lexicographic: the rational part decides first, then `w1`, then `w2`, and so on.

mod logsign;

pub use logsign::{initial_precision, log_sign, set_initial_precision, DEFAULT_PRECISION};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{factor_positive_rational, parse_q, Q};

/// A generator of the ambient group. Primes sort before infinitesimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Prime(u64),
    Infinitesimal(u32),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Prime(p) => write!(f, "{p}"),
            Generator::Infinitesimal(k) => write!(f, "w{k}"),
        }
    }
}

impl Generator {
    fn parse(s: &str) -> Result<GroupElement> {
        if let Some(level) = s.strip_prefix('w') {
            let k: u32 = level
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator `{s}`")))?;
            if k == 0 {
                return Err(Error::Parse("infinitesimal levels start at 1".into()));
            }
            return Ok(GroupElement::infinitesimal(k));
        }
        GroupElement::from_rational(&parse_q(s)?)
    }
}

/// Element of a divisible ordered abelian group, stored as a canonical exponent map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupElement {
    exps: BTreeMap<Generator, Q>,
}

impl GroupElement {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn from_rational(x: &Q) -> Result<Self> {
        let mut exps = BTreeMap::new();
        for (p, e) in factor_positive_rational(x)? {
            exps.insert(Generator::Prime(p), BigRational::from_integer(BigInt::from(e)));
        }
        Ok(Self { exps })
    }

    pub fn from_int(n: u64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n))).expect("positive integer")
    }

    /// `n / d` for small positive integers.
    pub fn ratio(n: u64, d: u64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
            .expect("positive ratio")
    }

    /// The canonical infinitesimal of the given level, above 1.
    pub fn infinitesimal(level: u32) -> Self {
        assert!(level >= 1, "infinitesimal levels start at 1");
        let mut exps = BTreeMap::new();
        exps.insert(Generator::Infinitesimal(level), Q::one());
        Self { exps }
    }

    pub fn generator_power(g: Generator, e: Q) -> Self {
        let mut exps = BTreeMap::new();
        if !e.is_zero() {
            exps.insert(g, e);
        }
        Self { exps }
    }

    pub fn exponent(&self, g: Generator) -> Q {
        self.exps.get(&g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&Generator, &Q)> {
        self.exps.iter()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (g, e) in &other.exps {
            let entry = exps.entry(*g).or_insert_with(Q::zero);
            *entry += e;
            if entry.is_zero() {
                exps.remove(g);
            }
        }
        Self { exps }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Self {
        Self { exps: self.exps.iter().map(|(g, e)| (*g, -e)).collect() }
    }

    /// `self^q` for rational `q`; always defined since the group is divisible.
    pub fn pow(&self, q: &Q) -> Self {
        if q.is_zero() {
            return Self::one();
        }
        Self { exps: self.exps.iter().map(|(g, e)| (*g, e * q)).collect() }
    }

    pub fn pow_int(&self, n: i64) -> Self {
        self.pow(&BigRational::from_integer(BigInt::from(n)))
    }

    /// The `n`-th root.
    pub fn root(&self, n: u64) -> Self {
        assert!(n >= 1);
        self.pow(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    /// Quotient by the convex subgroup of infinitesimals.
    pub fn coarsen(&self) -> Self {
        Self {
            exps: self
                .exps
                .iter()
                .filter(|(g, _)| matches!(g, Generator::Prime(_)))
                .map(|(g, e)| (*g, e.clone()))
                .collect(),
        }
    }

    /// Highest infinitesimal level with a nonzero exponent (0 if none).
    pub fn max_level(&self) -> u32 {
        self.exps
            .keys()
            .filter_map(|g| match g {
                Generator::Infinitesimal(k) => Some(*k),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_archimedean(&self) -> bool {
        self.max_level() == 0
    }

    /// Prime-exponent vector of the archimedean part.
    pub fn prime_exponents(&self) -> BTreeMap<u64, Q> {
        self.exps
            .iter()
            .filter_map(|(g, e)| match g {
                Generator::Prime(p) => Some((*p, e.clone())),
                _ => None,
            })
            .collect()
    }

    /// Order relative to the identity.
    pub fn cmp_one(&self) -> Ordering {
        let primes: Vec<(u64, &Q)> = self
            .exps
            .iter()
            .filter_map(|(g, e)| match g {
                Generator::Prime(p) => Some((*p, e)),
                _ => None,
            })
            .collect();
        let s = log_sign(&primes);
        if s != Ordering::Equal {
            return s;
        }
        // Lowest level dominates; the map is sorted by level.
        for (g, e) in &self.exps {
            if let Generator::Infinitesimal(_) = g {
                return e.cmp(&Q::zero());
            }
        }
        Ordering::Equal
    }

    /// Approximate natural logarithm of the archimedean part, for rendering only.
    pub fn ln_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.exps
            .iter()
            .filter_map(|(g, e)| match g {
                Generator::Prime(p) => Some(e.to_f64().unwrap_or(0.0) * (*p as f64).ln()),
                _ => None,
            })
            .sum()
    }

    /// Parses `"2"`, `"1/4"`, `"2^(1/2)*3^-1"`, `"w1"`, `"2*w1^(-1/2)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty group element".into()));
        }
        let mut acc = Self::one();
        for factor in t.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e = e.trim_start_matches('(').trim_end_matches(')');
                    (b, parse_q(e)?)
                }
                None => (factor, Q::one()),
            };
            acc = acc.mul(&Generator::parse(base)?.pow(&exp));
        }
        Ok(acc)
    }

    /// The element as a positive rational, when it is one.
    pub fn as_rational(&self) -> Option<Q> {
        let mut acc = Q::one();
        for (g, e) in &self.exps {
            let Generator::Prime(p) = g else { return None };
            if !e.is_integer() {
                return None;
            }
            let k: i64 = e.to_integer().try_into().ok()?;
            let base = BigRational::from_integer(BigInt::from(*p));
            acc *= if k >= 0 {
                num_traits::pow(base, k as usize)
            } else {
                num_traits::pow(base.recip(), (-k) as usize)
            };
        }
        Some(acc)
    }

    /// `"1/4"` for rationals, the exponent-map syntax otherwise.
    pub fn pretty(&self) -> String {
        match self.as_rational() {
            Some(x) => x.to_string(),
            None => self.to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.div(other).cmp_one()
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (g, e) in &self.exps {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{g}")?;
            } else if e.is_integer() && e.is_positive() {
                write!(f, "{g}^{e}")?;
            } else {
                write!(f, "{g}^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exp: BTreeMap<String, String> =
            self.exps.iter().map(|(g, e)| (g.to_string(), e.to_string())).collect();
        let mut m = BTreeMap::new();
        m.insert("exp", exp);
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            exp: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(d)?;
        let mut acc = GroupElement::one();
        for (k, v) in raw.exp {
            let g = Generator::parse(&k).map_err(serde::de::Error::custom)?;
            let e = parse_q(&v).map_err(serde::de::Error::custom)?;
            acc = acc.mul(&g.pow(&e));
        }
        Ok(acc)
    }
}

/// Which side of 1 a named infinitesimal sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfinitesimalSide {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingMode {
    Archimedean,
    LexicographicTower,
}

/// The archimedean part of a value group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseGroup {
    /// The divisible hull of all positive rationals.
    AllRationals,
    /// The divisible hull of the listed, multiplicatively independent, rationals.
    Generated {
        #[serde(with = "rational_list")]
        generators: Vec<Q>,
    },
}

mod rational_list {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| crate::rational::parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinitesimalGen {
    pub name: String,
    pub side: InfinitesimalSide,
}

/// Descriptor of a divisible ordered abelian group: a base subgroup of the positive
/// rationals (divisible hull) followed by a tower of infinitesimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueGroupDesc {
    pub base: BaseGroup,
    #[serde(default)]
    pub infinitesimals: Vec<InfinitesimalGen>,
}

impl ValueGroupDesc {
    pub fn rationals() -> Self {
        Self { base: BaseGroup::AllRationals, infinitesimals: vec![] }
    }

    /// The trivial group `{1}`.
    pub fn trivial() -> Self {
        Self { base: BaseGroup::Generated { generators: vec![] }, infinitesimals: vec![] }
    }

    /// Divisible hull of the given positive rationals, which must be multiplicatively
    /// independent.
    pub fn generated_by(generators: &[Q]) -> Result<Self> {
        let vectors = generators
            .iter()
            .map(GroupElement::from_rational)
            .collect::<Result<Vec<_>>>()?;
        if linalg::rank_of_elements(&vectors) != generators.len() {
            return Err(Error::InvalidInput(
                "rational generators are not multiplicatively independent".into(),
            ));
        }
        Ok(Self {
            base: BaseGroup::Generated { generators: generators.to_vec() },
            infinitesimals: vec![],
        })
    }

    pub fn ordering(&self) -> OrderingMode {
        if self.infinitesimals.is_empty() {
            OrderingMode::Archimedean
        } else {
            OrderingMode::LexicographicTower
        }
    }

    pub fn infinitesimal_count(&self) -> u32 {
        self.infinitesimals.len() as u32
    }

    /// Extends the tower by `d` infinitesimals; new generators are infinitesimal relative
    /// to everything before them.
    pub fn adjoin_infinitesimals(&self, d: usize, sides: &[InfinitesimalSide]) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("must adjoin at least one infinitesimal".into()));
        }
        if !sides.is_empty() && sides.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: sides.len() });
        }
        let mut out = self.clone();
        for i in 0..d {
            let level = out.infinitesimals.len() + 1;
            out.infinitesimals.push(InfinitesimalGen {
                name: format!("w{level}"),
                side: sides.get(i).copied().unwrap_or(InfinitesimalSide::Above),
            });
        }
        Ok(out)
    }

    /// The element denoted by a named infinitesimal, honoring its declared side.
    pub fn named(&self, name: &str) -> Option<GroupElement> {
        self.infinitesimals.iter().enumerate().find(|(_, g)| g.name == name).map(|(i, g)| {
            let w = GroupElement::infinitesimal(i as u32 + 1);
            match g.side {
                InfinitesimalSide::Above => w,
                InfinitesimalSide::Below => w.inv(),
            }
        })
    }

    /// Whether the archimedean part lies in the divisible hull of the base.
    pub fn base_contains(&self, x: &GroupElement) -> bool {
        match &self.base {
            BaseGroup::AllRationals => true,
            BaseGroup::Generated { generators } => {
                let gens: Vec<GroupElement> = generators
                    .iter()
                    .map(|g| GroupElement::from_rational(g).expect("validated"))
                    .collect();
                linalg::in_rational_span(&gens, &x.coarsen())
            }
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.max_level() <= self.infinitesimal_count() && self.base_contains(x)
    }

    pub fn embed(&self, x: &GroupElement) -> Result<GroupElement> {
        if self.contains(x) {
            Ok(x.clone())
        } else {
            Err(Error::MixedGroups(x.to_string()))
        }
    }

    pub fn compare(&self, a: &GroupElement, b: &GroupElement) -> Result<Ordering> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(Error::MixedGroups(x.to_string()));
            }
        }
        Ok(a.cmp(b))
    }

    /// Smallest descriptor containing `self` and the given elements.
    pub fn extended_with(&self, elems: &[GroupElement]) -> Self {
        let mut out = self.clone();
        if let BaseGroup::Generated { generators } = &mut out.base {
            let mut basis: Vec<GroupElement> = generators
                .iter()
                .map(|g| GroupElement::from_rational(g).expect("validated"))
                .collect();
            for e in elems {
                for (p, _) in e.prime_exponents() {
                    let pe = GroupElement::from_int(p);
                    if !linalg::in_rational_span(&basis, &pe) {
                        basis.push(pe);
                        generators.push(BigRational::from_integer(BigInt::from(p)));
                    }
                }
            }
        }
        let need = elems.iter().map(|e| e.max_level()).max().unwrap_or(0);
        while out.infinitesimal_count() < need {
            let level = out.infinitesimals.len() + 1;
            out.infinitesimals
                .push(InfinitesimalGen { name: format!("w{level}"), side: InfinitesimalSide::Above });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    fn ge(s: &str) -> GroupElement {
        GroupElement::parse(s).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ge("2^(1/2)").cmp(&ge("2^(1/2)")), Ordering::Equal);
        assert_eq!(ge("2").cmp(&ge("3^(1/2)")), Ordering::Greater);
        let g = ValueGroupDesc::rationals().adjoin_infinitesimals(1, &[]).unwrap();
        assert_eq!(g.compare(&ge("w1"), &ge("2")).unwrap(), Ordering::Less);
        assert_eq!(g.compare(&ge("w1"), &ge("1")).unwrap(), Ordering::Greater);
    }

    #[test]
    fn mixed_descriptors_rejected() {
        let g = ValueGroupDesc::generated_by(&[q(2)]).unwrap();
        assert!(g.compare(&ge("2"), &ge("3")).is_err());
        assert!(g.compare(&ge("2"), &ge("w1")).is_err());
        assert!(g.compare(&ge("2^(1/3)"), &ge("1/2")).is_ok());
    }

    #[test]
    fn dependent_generators_rejected() {
        assert!(ValueGroupDesc::generated_by(&[q(2), q(4)]).is_err());
        assert!(ValueGroupDesc::generated_by(&[q(2), qf(3, 2)]).is_ok());
    }

    #[test]
    fn adjoin_to_trivial_group() {
        let g = ValueGroupDesc::trivial().adjoin_infinitesimals(1, &[]).unwrap();
        let w = g.named("w1").unwrap();
        for (n, d) in [(1i64, 2i64), (3, 1), (-5, 7)] {
            let x = w.pow(&qf(n, d));
            assert_eq!(x.cmp_one(), if n > 0 { Ordering::Greater } else { Ordering::Less });
        }
        assert_eq!(w.pow(&q(0)).cmp_one(), Ordering::Equal);
    }

    #[test]
    fn tower_of_two() {
        let g = ValueGroupDesc::rationals()
            .adjoin_infinitesimals(2, &[InfinitesimalSide::Above, InfinitesimalSide::Above])
            .unwrap();
        let w1 = g.named("w1").unwrap();
        let w2 = g.named("w2").unwrap();
        for (n, d) in [(1i64, 1000i64), (1, 1), (7, 3)] {
            assert!(w2 < w1.pow(&qf(n, d)));
        }
        assert!(w2 > GroupElement::one());
    }

    #[test]
    fn below_one() {
        let g = ValueGroupDesc::rationals()
            .adjoin_infinitesimals(1, &[InfinitesimalSide::Below])
            .unwrap();
        let w = g.named("w1").unwrap();
        assert!(w < GroupElement::one());
        assert!(GroupElement::one() < w.inv());
    }

    #[test]
    fn coarsen_examples() {
        assert_eq!(ge("2*w1^3").coarsen(), ge("2"));
        assert_eq!(ge("w1^(1/2)*w2^(-1)").coarsen(), GroupElement::one());
    }

    #[test]
    fn json_round_trip() {
        let x = ge("2^(1/2)*w1^(-1)");
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"exp":{"2":"1/2","w1":"-1"}}"#);
        let y: GroupElement = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
        let z: GroupElement = serde_json::from_str(r#"{"exp":{"6":"1"}}"#).unwrap();
        assert_eq!(z, ge("2*3"));
    }

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        (
            prop::collection::vec((0usize..4, -6i64..=6, 1i64..=4), 0..4),
            prop::collection::vec((1u32..=2, -3i64..=3), 0..2),
        )
            .prop_map(|(primes, infs)| {
                let ps = [2u64, 3, 5, 7];
                let mut x = GroupElement::one();
                for (i, n, d) in primes {
                    x = x.mul(&GroupElement::from_int(ps[i]).pow(&qf(n, d)));
                }
                for (lvl, n) in infs {
                    x = x.mul(&GroupElement::infinitesimal(lvl).pow_int(n));
                }
                x
            })
    }

    proptest! {
        #[test]
        fn ordered_group_laws(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            if a <= b {
                prop_assert!(a.mul(&c) <= b.mul(&c));
            }
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        }

        #[test]
        fn roots_preserve_order(a in arb_element(), b in arb_element(), n in 1u64..6) {
            if a < b {
                prop_assert!(a.root(n) < b.root(n));
            }
        }

        #[test]
        fn coarsen_is_monotone(a in arb_element(), b in arb_element()) {
            if a <= b {
                prop_assert!(a.coarsen() <= b.coarsen());
            }
            prop_assert_eq!(a.coarsen().coarsen(), a.coarsen());
        }
    }
}
