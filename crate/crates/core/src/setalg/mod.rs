//! Exact calculus of coefficient sets.
//!
//! For a finite generator set `I` of nonnegative rationals:
//!
//! * `I⁺` is `{0}` together with every finite sum of elements of `I` lying in `[0, 1]`;
//! * `D(I)` is the set of `(m - 1 + f) / m <= 1` with `m >= 1` and `f ∈ I⁺`;
//! * `D_d(I)` is the set of `(m - 1 + f + k d) / m <= 1` with `k, m >= 1` and `f ∈ I⁺`.
//!
//! Each set has a bounded enumeration (complete relative to [`EnumBounds`]) and
//! an exact membership decider that needs no bounds at all.

mod coeffset;
mod lemmas;
pub(crate) mod monoid;

use std::collections::BTreeSet;
use std::fmt;

pub use coeffset::{CoeffSet, EnumBounds};
pub use lemmas::{check_dd_monotone, check_ddi_lemma, finite_trace, mem_dd_of_d_set, Discrepancy, LemmaReport, TraceEntry};

use crate::error::{domain, Result};
use crate::rational::Rational;

fn check_unit_interval(a: &Rational, what: &str) -> Result<()> {
    if a.is_negative() || a > &Rational::one() {
        return Err(domain(format!("{what} must lie in [0, 1], got {a}")));
    }
    Ok(())
}

/// Bounded enumeration of `I⁺`: all sums of at most `b.max_terms` elements of
/// `I` (with repetition) that lie in `[0, 1]`, together with `0`.
pub fn plus_closure(gens: &CoeffSet, b: &EnumBounds) -> CoeffSet {
    let one = Rational::one();
    let positive: Vec<&Rational> = gens.positive().iter().take_while(|g| *g <= &one).collect();
    let mut all: BTreeSet<Rational> = BTreeSet::from([Rational::zero()]);
    let mut level: BTreeSet<Rational> = all.clone();
    for _ in 0..b.max_terms {
        let next: BTreeSet<Rational> = level
            .iter()
            .flat_map(|s| positive.iter().map(move |g| s + *g))
            .filter(|s| s <= &one)
            .collect();
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    CoeffSet::from_nonnegative(all)
}

/// All of `I⁺`. Finite because every positive summand is at least the least
/// positive generator, so no sum in `[0, 1]` has more than `1 / min` terms.
pub fn plus_closure_exact(gens: &CoeffSet) -> CoeffSet {
    CoeffSet::from_nonnegative(gens.monoid().elements_up_to(&Rational::one()).into_iter().map(|(v, _)| v))
}

/// Exact decision of `a ∈ I⁺`.
pub fn mem_plus_closure(a: &Rational, gens: &CoeffSet) -> Result<bool> {
    Ok(plus_witness(a, gens)?.is_some())
}

/// A decomposition of `a` as a sum of generators, if `a ∈ I⁺`.
pub fn plus_witness(a: &Rational, gens: &CoeffSet) -> Result<Option<PlusWitness>> {
    check_unit_interval(a, "I⁺ membership argument")?;
    Ok(gens.monoid().decompose(a).map(|counts| PlusWitness {
        parts: gens.monoid().generators().iter().cloned().zip(counts).filter(|(_, c)| *c > 0).collect(),
    }))
}

/// `a ∈ I⁺` for `a` already known to lie in `[0, 1]`.
pub(crate) fn in_plus(a: &Rational, gens: &CoeffSet) -> bool {
    !a.is_negative() && a <= &Rational::one() && gens.monoid().contains(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusWitness {
    /// (generator, multiplicity) pairs with positive multiplicity.
    pub parts: Vec<(Rational, u64)>,
}

impl PlusWitness {
    pub fn value(&self) -> Rational {
        self.parts.iter().map(|(g, c)| g * *c).sum()
    }
}

impl fmt::Display for PlusWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "plus(0)");
        }
        write!(f, "plus(")?;
        let mut first = true;
        for (g, c) in &self.parts {
            for _ in 0..*c {
                if !first {
                    write!(f, "+")?;
                }
                write!(f, "{g}")?;
                first = false;
            }
        }
        write!(f, ")")
    }
}

/// All sums `Σ m_k j_k` with positive integers `m_k`, value at most
/// `b.max_value`, over at most `b.max_terms` distinct generators `j_k`.
/// Not capped at 1. Zeros in `J` are discarded.
pub fn pos_combinations(gens: &CoeffSet, b: &EnumBounds) -> Result<CoeffSet> {
    let cap = b.value()?;
    let positive = gens.positive();
    if positive.is_empty() {
        return Err(domain("positive combinations need a positive generator"));
    }
    let width = (b.max_terms as usize).min(positive.len());
    let mut out = BTreeSet::new();
    for subset in subsets_of_size(positive.len(), width) {
        let chosen: Vec<Rational> = subset.iter().map(|&i| positive[i].clone()).collect();
        let m = monoid::Monoid::new(&chosen);
        out.extend(m.elements_up_to(cap).into_iter().map(|(v, _)| v).filter(|v| v.is_positive()));
    }
    Ok(CoeffSet::from_nonnegative(out))
}

/// Positive elements of the monoid generated by `J`, up to `cap`, with no
/// bound on the number of summands.
pub(crate) fn monoid_elements(gens: &CoeffSet, cap: &Rational) -> Vec<Rational> {
    gens.monoid().elements_up_to(cap).into_iter().map(|(v, _)| v).filter(|v| v.is_positive()).collect()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `(m - 1 + f) / m`.
pub fn standard_value(m: u64, f: &Rational) -> Rational {
    let m = Rational::from(m);
    (&m - Rational::one() + f) / m
}

/// `(m - 1 + f + k d) / m`.
pub fn shifted_value(m: u64, k: u64, f: &Rational, d: &Rational) -> Rational {
    let m = Rational::from(m);
    (&m - Rational::one() + f + d * k) / m
}

/// Bounded enumeration of `D(I)`: `m <= b.max_index`, `f ∈ plus_closure(I, b)`.
pub fn d_set(gens: &CoeffSet, b: &EnumBounds) -> CoeffSet {
    let plus = plus_closure(gens, b);
    let one = Rational::one();
    CoeffSet::from_nonnegative(
        (1..=b.max_index as u64)
            .flat_map(|m| plus.iter().map(move |f| standard_value(m, f)))
            .filter(|a| a <= &one),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DWitness {
    pub m: u64,
    pub f: Rational,
}

impl DWitness {
    pub fn value(&self) -> Rational {
        standard_value(self.m, &self.f)
    }
}

impl fmt::Display for DWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d(m={},f={})", self.m, self.f)
    }
}

/// Exact decision of `a ∈ D(I)`.
pub fn mem_d_set(a: &Rational, gens: &CoeffSet) -> Result<bool> {
    Ok(d_witness(a, gens)?.is_some())
}

/// For `a < 1`, `f >= 0` forces `m <= 1 / (1 - a)` and then `f = 1 - m (1 - a)`
/// is determined. For `a = 1` the only option is `f = 1`, the same for every `m`.
pub fn d_witness(a: &Rational, gens: &CoeffSet) -> Result<Option<DWitness>> {
    check_unit_interval(a, "D(I) membership argument")?;
    let one = Rational::one();
    if a == &one {
        return Ok(in_plus(&one, gens).then_some(DWitness { m: 1, f: one }));
    }
    let gap = &one - a;
    let max_m = (&one / &gap).floor_u64();
    for m in 1..=max_m {
        let f = &one - &gap * m;
        if in_plus(&f, gens) {
            return Ok(Some(DWitness { m, f }));
        }
    }
    Ok(None)
}

/// Bounded enumeration of `D_d(I)`: `m, k <= b.max_index`, `f ∈ plus_closure(I, b)`.
pub fn d_d_set(gens: &CoeffSet, d: &Rational, b: &EnumBounds) -> Result<CoeffSet> {
    check_unit_interval(d, "shift d")?;
    let plus = plus_closure(gens, b);
    let one = Rational::one();
    let n = b.max_index as u64;
    let mut out = BTreeSet::new();
    for m in 1..=n {
        for k in 1..=n {
            for f in plus.iter() {
                let a = shifted_value(m, k, f, d);
                if a <= one {
                    out.insert(a);
                }
            }
        }
    }
    Ok(CoeffSet::from_nonnegative(out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdWitness {
    pub m: u64,
    pub k: u64,
    pub f: Rational,
}

impl DdWitness {
    pub fn value(&self, d: &Rational) -> Rational {
        shifted_value(self.m, self.k, &self.f, d)
    }
}

impl fmt::Display for DdWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dd(m={},k={},f={})", self.m, self.k, self.f)
    }
}

/// Exact decision of `a ∈ D_d(I)`.
pub fn mem_d_d_set(a: &Rational, gens: &CoeffSet, d: &Rational) -> Result<bool> {
    Ok(d_d_witness(a, gens, d)?.is_some())
}

/// Writing `R = m a - m + 1 = f + k d`: for `a < 1` we need `R >= 0`, hence
/// `m <= 1 / (1 - a)`, and `k <= R / d`. For `a = 1`, `R = 1` for every `m`, so
/// the search reduces to `1 - k d ∈ I⁺` with `k <= 1 / d` and `m = 1`.
pub fn d_d_witness(a: &Rational, gens: &CoeffSet, d: &Rational) -> Result<Option<DdWitness>> {
    check_unit_interval(a, "D_d(I) membership argument")?;
    if !d.is_positive() {
        return Err(domain(format!("shift d must be positive, got {d}")));
    }
    let one = Rational::one();
    let gap = &one - a;
    let max_m = if gap.is_zero() { 1 } else { (&one / &gap).floor_u64() };
    for m in 1..=max_m {
        let rest = &one - &gap * m;
        let max_k = (&rest / d).floor_u64();
        for k in 1..=max_k {
            let f = &rest - d * k;
            if in_plus(&f, gens) {
                return Ok(Some(DdWitness { m, k, f }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> CoeffSet {
        s.parse().unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn bounds(terms: u32, index: u32) -> EnumBounds {
        EnumBounds::new(terms, index, None).unwrap()
    }

    /// Sums of exactly `n` generators, by explicit index tuples.
    fn brute_sums(gens: &[Rational], max_terms: usize) -> BTreeSet<Rational> {
        let mut out = BTreeSet::from([Rational::zero()]);
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max_terms {
            tuples = tuples
                .iter()
                .flat_map(|t| (0..gens.len()).map(move |i| [t.clone(), vec![i]].concat()))
                .collect();
            for t in &tuples {
                let s: Rational = t.iter().map(|&i| gens[i].clone()).sum();
                if s <= Rational::one() {
                    out.insert(s);
                }
            }
        }
        out
    }

    #[test]
    fn plus_closure_examples() {
        assert_eq!(plus_closure(&set("1/2"), &bounds(4, 1)).to_string(), "{0, 1/2, 1}");
        assert_eq!(plus_closure(&CoeffSet::empty(), &bounds(4, 1)).to_string(), "{0}");
        let oracle = brute_sums(&[r("1/3"), r("2/5")], 4);
        let got = plus_closure(&set("1/3,2/5"), &bounds(4, 1));
        assert_eq!(got.elements(), oracle.iter().cloned().collect::<Vec<_>>().as_slice());
        assert_eq!(got.to_string(), "{0, 1/3, 2/5, 2/3, 11/15, 4/5, 1}");
    }

    #[test]
    fn plus_closure_respects_term_bound() {
        assert_eq!(plus_closure(&set("1/5"), &bounds(2, 1)).to_string(), "{0, 1/5, 2/5}");
        assert_eq!(plus_closure(&set("1/5"), &bounds(9, 1)), plus_closure_exact(&set("1/5")));
    }

    #[test]
    fn plus_membership() {
        let i = set("1/3,2/5");
        assert!(mem_plus_closure(&r("11/15"), &i).unwrap());
        assert!(mem_plus_closure(&r("0"), &i).unwrap());
        assert!(mem_plus_closure(&r("0"), &CoeffSet::empty()).unwrap());
        assert!(!mem_plus_closure(&r("7/15"), &i).unwrap());
        assert!(mem_plus_closure(&r("-1/2"), &i).is_err());
        assert!(mem_plus_closure(&r("4/3"), &i).is_err());
        let w = plus_witness(&r("11/15"), &i).unwrap().unwrap();
        assert_eq!(w.value(), r("11/15"));
        assert_eq!(w.to_string(), "plus(1/3+2/5)");
    }

    #[test]
    fn zeros_are_ignored() {
        let i = set("0,1/2");
        assert_eq!(plus_closure(&i, &bounds(4, 1)).to_string(), "{0, 1/2, 1}");
        assert!(!mem_plus_closure(&r("1/4"), &i).unwrap());
    }

    #[test]
    fn pos_combination_examples() {
        let b = EnumBounds::default();
        assert_eq!(pos_combinations(&set("1"), &b.clone().with_value(r("5"))).unwrap().to_string(), "{1, 2, 3, 4, 5}");
        assert_eq!(
            pos_combinations(&set("1/2,1/3"), &b.clone().with_value(r("1"))).unwrap().to_string(),
            "{1/3, 1/2, 2/3, 5/6, 1}"
        );
        assert_eq!(pos_combinations(&set("2"), &b.clone().with_value(r("5"))).unwrap().to_string(), "{2, 4}");
    }

    #[test]
    fn pos_combination_errors() {
        let b = EnumBounds::default();
        assert!(matches!(pos_combinations(&set("1"), &b), Err(crate::Error::MissingBound(_))));
        assert!(pos_combinations(&set("0"), &b.clone().with_value(r("1"))).is_err());
    }

    #[test]
    fn pos_combinations_distinct_generator_bound() {
        let b = EnumBounds::default().with_value(r("1")).with_terms(1);
        assert_eq!(pos_combinations(&set("1/2,1/3"), &b).unwrap().to_string(), "{1/3, 1/2, 2/3, 1}");
    }

    #[test]
    fn d_set_examples() {
        assert_eq!(d_set(&set("0"), &bounds(4, 4)).to_string(), "{0, 1/2, 2/3, 3/4}");
        assert_eq!(d_set(&set("1/2"), &bounds(4, 2)).to_string(), "{0, 1/2, 3/4, 1}");
        assert_eq!(d_set(&set("1"), &bounds(4, 1)).to_string(), "{0, 1}");
    }

    #[test]
    fn d_set_membership() {
        let w = d_witness(&r("5/6"), &set("1/2")).unwrap().unwrap();
        assert_eq!(w, DWitness { m: 3, f: r("1/2") });
        assert!(mem_d_set(&r("3/4"), &set("0")).unwrap());
        // m = 5 with f = 0 gives 4/5.
        assert_eq!(d_witness(&r("4/5"), &set("1/2")).unwrap(), Some(DWitness { m: 5, f: r("0") }));
        assert!(!mem_d_set(&r("1"), &set("1/3,2/5")).unwrap() || mem_plus_closure(&r("1"), &set("1/3,2/5")).unwrap());
        assert!(!mem_d_set(&r("1"), &set("2/5")).unwrap());
        assert!(!mem_d_set(&r("1/3"), &set("0")).unwrap());
        assert!(mem_d_set(&r("3/2"), &set("0")).is_err());
    }

    #[test]
    fn d_d_set_examples() {
        assert_eq!(d_d_set(&set("0"), &r("1/2"), &bounds(4, 2)).unwrap().to_string(), "{1/2, 3/4, 1}");
        for n in 1..5 {
            assert_eq!(d_d_set(&set("0"), &r("1"), &bounds(4, n)).unwrap().to_string(), "{1}");
        }
        let s = d_d_set(&set("1/2"), &r("1/4"), &bounds(4, 2)).unwrap();
        assert!(s.contains(&r("7/8")));
        assert_eq!(shifted_value(2, 1, &r("1/2"), &r("1/4")), r("7/8"));
        assert!(d_d_set(&set("0"), &r("3/2"), &bounds(4, 2)).is_err());
    }

    #[test]
    fn d_d_set_membership() {
        let d = r("1/2");
        assert_eq!(d_d_witness(&r("3/4"), &set("0"), &d).unwrap(), Some(DdWitness { m: 2, k: 1, f: r("0") }));
        assert!(!mem_d_d_set(&r("1/4"), &set("0"), &d).unwrap());
        assert_eq!(d_d_witness(&r("1"), &set("0"), &d).unwrap(), Some(DdWitness { m: 1, k: 2, f: r("0") }));
        assert!(mem_d_d_set(&r("1/2"), &set("0"), &r("0")).is_err());
        assert!(mem_d_d_set(&r("1/2"), &set("0"), &r("-1")).is_err());
    }

    #[test]
    fn deciders_agree_with_enumerations() {
        let b = bounds(4, 6);
        for g in ["0", "1/2", "1/3,2/5", "1/4,1/3"] {
            let i = set(g);
            for a in d_set(&i, &b).iter() {
                let w = d_witness(a, &i).unwrap().unwrap();
                assert_eq!(&w.value(), a);
            }
            for d in ["1/2", "1/3", "1"] {
                let d = r(d);
                for a in d_d_set(&i, &d, &b).unwrap().iter() {
                    let w = d_d_witness(a, &i, &d).unwrap().unwrap();
                    assert_eq!(&w.value(&d), a);
                }
            }
        }
    }

    #[test]
    fn min_positive_of_standard_set() {
        for m in 2..8 {
            assert_eq!(d_set(&set("0"), &bounds(1, m)).min_positive(), Some(&r("1/2")));
        }
    }
}
