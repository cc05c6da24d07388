//! Threshold sets of coregularity zero and one.
//!
//! Every enumerated value carries a [`Witness`] recording the parameters that
//! produced it; recomputing the defining formula from the witness reproduces
//! the value exactly.

mod acc;
mod lct0;
mod lct1;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

pub use acc::{
    accumulation_candidates, coreg_unbounded_counterexample, tsingularity_coreg1_set, verify_acc_above, AccProof,
    AccWitness, AccumulationReport, Candidate, Family, Hypothesis, TailShape,
};
pub use lct0::{lct0_enumerate, lct0_enumerate_untruncated, mem_lct0};
pub use lct1::{lct1_enumerate, lct1_weighted, mem_lct1, platonic_triples, Lct1Membership, PlatonicTriple, TripleKind};
pub use oracle::p1_oracle;

use crate::rational::Rational;

/// Switches between the readings of the coregularity-one sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lct1Options {
    /// Include the `pqr`-weighted tail terms `k >= 4`; off gives the three-term form.
    pub extra_terms: bool,
    /// Require every term coefficient `i_k + t j_k` to be at most 1.
    pub cap_unit: bool,
}

impl Default for Lct1Options {
    fn default() -> Self {
        Lct1Options { extra_terms: true, cap_unit: false }
    }
}

/// One term `(i, j)` of a weighted configuration; its coefficient is `i + t j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub i: Rational,
    pub j: Rational,
}

impl Slot {
    pub fn new(i: Rational, j: Rational) -> Self {
        Slot { i, j }
    }

    pub fn zero() -> Self {
        Slot { i: Rational::zero(), j: Rational::zero() }
    }

    pub fn coefficient(&self, t: &Rational) -> Rational {
        &self.i + t * &self.j
    }
}

/// One term of a degree equation on the projective line:
/// `(n - 1 + i + t j) / n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OracleTerm {
    pub n: u64,
    pub i: Rational,
    pub j: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Witness {
    /// `t = (1 - i) / j`.
    Coreg0 { j: Rational, i: Rational },
    /// `t = (qr + pr + pq - pqr - i) / j` with `i`, `j` the weighted slot totals.
    Coreg1 { triple: PlatonicTriple, slots: [Slot; 3], extras: Vec<Slot> },
    /// A solution of `Σ (n_k - 1 + i_k + t j_k) / n_k = degree`.
    Oracle { degree: u8, terms: Vec<OracleTerm> },
    /// `1/p + 1/q + 1/r - 1` (family 1) or `p (1/p + 1/q + 1/r - 1)` (family 2).
    Complexity1 { family: u8, p: u64, q: u64, r: u64 },
}

impl Witness {
    /// Number of terms in the configuration; smaller witnesses are preferred.
    pub fn size(&self) -> usize {
        match self {
            Witness::Coreg0 { .. } | Witness::Complexity1 { .. } => 1,
            Witness::Coreg1 { extras, .. } => 3 + extras.len(),
            Witness::Oracle { terms, .. } => terms.len(),
        }
    }

    /// The threshold this witness defines, or `None` if it is degenerate
    /// (zero denominator).
    pub fn evaluate(&self) -> Option<Rational> {
        match self {
            Witness::Coreg0 { i, j } => (Rational::one() - i).checked_div(j),
            Witness::Coreg1 { triple, slots, extras } => {
                let (i, j) = lct1::weighted_totals(triple, slots, extras);
                triple.numerator().checked_sub_div(&i, &j)
            }
            Witness::Oracle { degree, terms } => {
                let mut base = Rational::zero();
                let mut slope = Rational::zero();
                for term in terms {
                    let n = Rational::from(term.n);
                    base = base + (&n - Rational::one() + &term.i) / &n;
                    slope = slope + &term.j / &n;
                }
                (Rational::from(*degree as u64) - base).checked_div(&slope)
            }
            Witness::Complexity1 { family, p, q, r } => {
                let s = Rational::frac(1, *p as i64) + Rational::frac(1, *q as i64) + Rational::frac(1, *r as i64)
                    - Rational::one();
                Some(if *family == 1 { s } else { &s * *p })
            }
        }
    }
}

trait CheckedDiv {
    fn checked_div(self, d: &Rational) -> Option<Rational>;
    fn checked_sub_div(self, s: &Rational, d: &Rational) -> Option<Rational>;
}

impl CheckedDiv for Rational {
    fn checked_div(self, d: &Rational) -> Option<Rational> {
        (!d.is_zero()).then(|| self / d)
    }
    fn checked_sub_div(self, s: &Rational, d: &Rational) -> Option<Rational> {
        (self - s).checked_div(d)
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl IntoIterator<Item = T>) -> fmt::Result {
    write!(f, "[")?;
    for (k, x) in items.into_iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

/// `i + j t` in the compact form used by oracle witnesses.
struct Affine<'a>(&'a Rational, &'a Rational);

impl fmt::Display for Affine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = (self.0, self.1);
        let slope = |f: &mut fmt::Formatter<'_>| if j.is_one() { write!(f, "t") } else { write!(f, "{j}*t") };
        match (i.is_zero(), j.is_zero()) {
            (_, true) => write!(f, "{i}"),
            (true, false) => slope(f),
            (false, false) => {
                write!(f, "{i}+")?;
                slope(f)
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Coreg0 { i, j } => write!(f, "c0(i={i},j={j})"),
            Witness::Coreg1 { triple, slots, extras } => {
                let (i, j) = lct1::weighted_totals(triple, slots, extras);
                write!(f, "c1(p={},q={},r={},i={i},j={j})", triple.p, triple.q, triple.r)
            }
            Witness::Oracle { terms, .. } => {
                write!(f, "p1(N=")?;
                write_list(f, terms.iter().map(|t| t.n))?;
                write!(f, ",d=")?;
                write_list(f, terms.iter().map(|t| Affine(&t.i, &t.j)))?;
                write!(f, ")")
            }
            Witness::Complexity1 { family, p, q, r } => write!(f, "ts{family}(p={p},q={q},r={r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LctValue {
    pub value: Rational,
    pub witness: Witness,
}

impl LctValue {
    pub fn new(value: Rational, witness: Witness) -> Self {
        LctValue { value, witness }
    }

    /// True when the witness reproduces the stored value.
    pub fn is_consistent(&self) -> bool {
        self.witness.evaluate().as_ref() == Some(&self.value)
    }
}

impl fmt::Display for LctValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.value, self.witness)
    }
}

/// Strictly ascending thresholds, each with the least witness among those
/// that produced it, ordered by size and then structurally.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LctSet {
    values: Vec<LctValue>,
}

impl LctSet {
    pub fn from_candidates(mut candidates: Vec<LctValue>) -> Self {
        candidates.sort_by(|a, b| {
            a.value
                .cmp(&b.value)
                .then_with(|| a.witness.size().cmp(&b.witness.size()))
                .then_with(|| a.witness.cmp(&b.witness))
        });
        candidates.dedup_by(|later, earlier| later.value == earlier.value);
        LctSet { values: candidates }
    }

    pub fn values(&self) -> &[LctValue] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LctValue> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, t: &Rational) -> Option<&LctValue> {
        self.values.binary_search_by(|v| v.value.cmp(t)).ok().map(|k| &self.values[k])
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.get(t).is_some()
    }

    pub fn rationals(&self) -> Vec<Rational> {
        self.values.iter().map(|v| v.value.clone()).collect()
    }

    pub fn value_set(&self) -> BTreeSet<Rational> {
        self.values.iter().map(|v| v.value.clone()).collect()
    }

    /// Elements `>= floor`, plus `0` when present.
    pub fn restrict_to_region(&self, floor: &Rational) -> LctSet {
        LctSet { values: self.values.iter().filter(|v| v.value.is_zero() || &v.value >= floor).cloned().collect() }
    }

    pub fn at_least(&self, t: &Rational) -> LctSet {
        LctSet { values: self.values.iter().filter(|v| &v.value >= t).cloned().collect() }
    }

    pub fn merge(sets: impl IntoIterator<Item = LctSet>) -> LctSet {
        LctSet::from_candidates(sets.into_iter().flat_map(|s| s.values).collect())
    }

    /// One line per value, optionally followed by a tab and the witness.
    pub fn render(&self, with_witness: bool) -> String {
        let mut out = String::new();
        for v in &self.values {
            if with_witness {
                out.push_str(&v.to_string());
            } else {
                out.push_str(&v.value.to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a LctSet {
    type Item = &'a LctValue;
    type IntoIter = std::slice::Iter<'a, LctValue>;
    fn into_iter(self) -> Self::IntoIter {
        self.values.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn witness_grammar() {
        let c0 = Witness::Coreg0 { i: r("1/2"), j: r("1") };
        assert_eq!(c0.to_string(), "c0(i=1/2,j=1)");
        let tr = PlatonicTriple::new(2, 3, 5).unwrap();
        let c1 = Witness::Coreg1 { triple: tr, slots: [Slot::zero(), Slot::zero(), Slot::zero()], extras: vec![Slot::new(r("0"), r("1"))] };
        assert_eq!(c1.to_string(), "c1(p=2,q=3,r=5,i=0,j=30)");
        assert_eq!(c1.evaluate(), Some(r("1/30")));
        let p1 = Witness::Oracle {
            degree: 2,
            terms: vec![
                OracleTerm { n: 2, i: r("0"), j: r("0") },
                OracleTerm { n: 2, i: r("0"), j: r("0") },
                OracleTerm { n: 2, i: r("0"), j: r("0") },
                OracleTerm { n: 1, i: r("0"), j: r("1") },
            ],
        };
        assert_eq!(p1.to_string(), "p1(N=[2,2,2,1],d=[0,0,0,t])");
        assert_eq!(p1.evaluate(), Some(r("1/2")));
        let mixed = Witness::Oracle { degree: 1, terms: vec![OracleTerm { n: 1, i: r("1/3"), j: r("2") }] };
        assert_eq!(mixed.to_string(), "p1(N=[1],d=[1/3+2*t])");
    }

    #[test]
    fn first_witness_wins() {
        let a = LctValue::new(r("1/2"), Witness::Coreg0 { i: r("0"), j: r("2") });
        let b = LctValue::new(r("1/2"), Witness::Coreg0 { i: r("1/2"), j: r("1") });
        let s = LctSet::from_candidates(vec![a, b.clone()]);
        assert_eq!(s.values(), &[b]);
    }

    #[test]
    fn degenerate_witness() {
        assert_eq!(Witness::Coreg0 { i: r("0"), j: r("0") }.evaluate(), None);
    }
}
