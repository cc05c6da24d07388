use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::rational::{parse_list, Rational};
use crate::setalg::monoid::Monoid;

/// A finite set of nonnegative rationals, kept sorted and duplicate-free.
///
/// Used both for generator sets (the `I`, `J` of the coefficient calculus) and
/// for enumeration results. The additive monoid the elements generate is built
/// lazily on the first membership query and cached.
#[derive(Clone)]
pub struct CoeffSet {
    elements: Vec<Rational>,
    monoid: OnceLock<Monoid>,
}

impl CoeffSet {
    pub fn new(elements: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut elements: Vec<Rational> = elements.into_iter().collect();
        if let Some(neg) = elements.iter().find(|e| e.is_negative()) {
            return Err(domain(format!("coefficient sets are nonnegative, got {neg}")));
        }
        elements.sort();
        elements.dedup();
        Ok(CoeffSet { elements, monoid: OnceLock::new() })
    }

    pub fn empty() -> Self {
        CoeffSet { elements: Vec::new(), monoid: OnceLock::new() }
    }

    /// Builds from values already known to be nonnegative.
    pub(crate) fn from_nonnegative(elements: impl IntoIterator<Item = Rational>) -> Self {
        Self::new(elements).expect("nonnegative by construction")
    }

    pub fn from_fracs(fracs: &[(i64, i64)]) -> Result<Self> {
        Self::new(fracs.iter().map(|&(p, q)| Rational::frac(p, q)))
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    /// The strictly positive elements, ascending.
    pub fn positive(&self) -> &[Rational] {
        let start = self.elements.partition_point(|e| e.is_zero());
        &self.elements[start..]
    }

    pub fn min_positive(&self) -> Option<&Rational> {
        self.positive().first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.elements.last()
    }

    pub fn contains(&self, a: &Rational) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elements.iter()
    }

    pub fn union(&self, other: &CoeffSet) -> CoeffSet {
        CoeffSet::from_nonnegative(self.elements.iter().chain(other.elements.iter()).cloned())
    }

    pub fn is_subset(&self, other: &CoeffSet) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Additive monoid generated by the positive elements.
    pub(crate) fn monoid(&self) -> &Monoid {
        self.monoid.get_or_init(|| Monoid::new(self.positive()))
    }
}

impl PartialEq for CoeffSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for CoeffSet {}

impl fmt::Debug for CoeffSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CoeffSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for CoeffSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CoeffSet::new(parse_list(s)?)
    }
}

impl<'a> IntoIterator for &'a CoeffSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Truncation parameters for the enumerations of infinite sets.
///
/// Enumerations are complete relative to these parameter bounds, not relative
/// to the size of the output denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBounds {
    /// Number of summands in a sum of generators.
    pub max_terms: u32,
    /// Bound on the integer parameters `m`, `k`, `N`, `p`, `q`, `r`.
    pub max_index: u32,
    /// Cap on the value of unbounded positive combinations.
    pub max_value: Option<Rational>,
}

impl EnumBounds {
    pub fn new(max_terms: u32, max_index: u32, max_value: Option<Rational>) -> Result<Self> {
        if max_terms == 0 || max_index == 0 {
            return Err(domain("enumeration bounds must be at least 1"));
        }
        if let Some(v) = &max_value {
            if !v.is_positive() {
                return Err(domain(format!("value bound must be positive, got {v}")));
            }
        }
        Ok(EnumBounds { max_terms, max_index, max_value })
    }

    pub fn with_value(mut self, v: Rational) -> Self {
        self.max_value = Some(v);
        self
    }

    pub fn with_terms(mut self, t: u32) -> Self {
        self.max_terms = t.max(1);
        self
    }

    pub fn with_index(mut self, m: u32) -> Self {
        self.max_index = m.max(1);
        self
    }

    pub(crate) fn value(&self) -> Result<&Rational> {
        self.max_value.as_ref().ok_or(Error::MissingBound("value=V is required for this enumeration"))
    }
}

impl Default for EnumBounds {
    fn default() -> Self {
        EnumBounds { max_terms: 4, max_index: 6, max_value: None }
    }
}

impl FromStr for EnumBounds {
    type Err = Error;

    /// `terms=T,index=M,value=V`; omitted keys keep their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut b = EnumBounds::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bound `{part}` is not key=value")))?;
            let int = || {
                val.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bound `{key}` needs a positive integer, got `{val}`")))
            };
            match key.trim() {
                "terms" => b.max_terms = int()?,
                "index" => b.max_index = int()?,
                "value" => b.max_value = Some(val.parse()?),
                other => return Err(Error::Parse(format!("unknown bound `{other}`"))),
            }
        }
        EnumBounds::new(b.max_terms, b.max_index, b.max_value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_deduplicated() {
        let s: CoeffSet = "2/5,1/3,0,2/5".parse().unwrap();
        assert_eq!(s.to_string(), "{0, 1/3, 2/5}");
        assert_eq!(s.min_positive(), Some(&Rational::frac(1, 3)));
        assert_eq!(s.positive().len(), 2);
    }

    #[test]
    fn rejects_negative() {
        assert!("1/2,-1/3".parse::<CoeffSet>().is_err());
    }

    #[test]
    fn min_positive_absent() {
        assert_eq!(CoeffSet::empty().min_positive(), None);
        assert_eq!("0".parse::<CoeffSet>().unwrap().min_positive(), None);
    }

    #[test]
    fn bounds_parse() {
        let b: EnumBounds = "terms=3,value=5/2".parse().unwrap();
        assert_eq!(b, EnumBounds { max_terms: 3, max_index: 6, max_value: Some(Rational::frac(5, 2)) });
        assert!("terms=0".parse::<EnumBounds>().is_err());
        assert!("depth=3".parse::<EnumBounds>().is_err());
        assert!("value=0".parse::<EnumBounds>().is_err());
        assert!("index".parse::<EnumBounds>().is_err());
    }
}
