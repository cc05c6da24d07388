//! Checkers for the identities of the coefficient calculus.
//!
//! Each checker enumerates one side within bounds and decides membership in the
//! other side exactly, so truncation never shows up as a false discrepancy.

use std::fmt;

use crate::error::{domain, Result};
use crate::par;
use crate::rational::Rational;
use crate::setalg::monoid::Monoid;
use crate::setalg::{d_d_set, d_set, in_plus, mem_d_d_set, mem_d_set, plus_closure_exact, standard_value, CoeffSet, EnumBounds};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub value: Rational,
    pub detail: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.value, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub holds: bool,
    pub checked: usize,
    pub counterexamples: Vec<Discrepancy>,
}

impl LemmaReport {
    fn from_discrepancies(checked: usize, mut counterexamples: Vec<Discrepancy>) -> Self {
        counterexamples.sort_by(|a, b| a.value.cmp(&b.value).then_with(|| a.detail.cmp(&b.detail)));
        counterexamples.dedup();
        LemmaReport { holds: counterexamples.is_empty(), checked, counterexamples }
    }
}

/// Exact decision of `x ∈ D(D(I))`.
///
/// `1` always belongs (`1/2 ∈ D(I)`, so `1 ∈ D(I)⁺`). For `x < 1` each candidate
/// `m <= 1 / (1 - x)` fixes `f = 1 - m (1 - x) < 1`, and `f ∈ D(I)⁺` only involves
/// the finitely many elements of `D(I)` in `(0, f]`.
pub fn mem_dd_of_d_set(x: &Rational, gens: &CoeffSet) -> Result<bool> {
    if x.is_negative() || x > &Rational::one() {
        return Err(domain(format!("D(D(I)) membership argument must lie in [0, 1], got {x}")));
    }
    let one = Rational::one();
    if x == &one {
        return Ok(true);
    }
    let plus = plus_closure_exact(gens);
    let gap = &one - x;
    let max_m = (&one / &gap).floor_u64();
    for m in 1..=max_m {
        let f = &one - &gap * m;
        if f.is_zero() {
            return Ok(true);
        }
        let small = d_set_up_to(&plus, &f);
        if Monoid::new(&small).contains(&f) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Positive elements of `D(I)` that are `<= cap < 1`, given the full `I⁺`.
fn d_set_up_to(plus: &CoeffSet, cap: &Rational) -> Vec<Rational> {
    let one = Rational::one();
    // (m - 1) / m <= cap  <=>  m <= 1 / (1 - cap)
    let max_m = (&one / (&one - cap)).floor_u64();
    let mut out = Vec::new();
    for m in 1..=max_m {
        for f in plus.iter() {
            let a = standard_value(m, f);
            if &a > cap {
                break;
            }
            if a.is_positive() {
                out.push(a);
            }
        }
    }
    out
}

/// Checks `D(D(I)) = D(I) ∪ {1}` on the bounded enumerations of both sides.
pub fn check_ddi_lemma(gens: &CoeffSet, b: &EnumBounds) -> LemmaReport {
    let di = d_set(gens, b);
    let ddi = d_set(&di, b);
    let mut problems = Vec::new();
    for x in ddi.iter() {
        let ok = x.is_one() || mem_d_set(x, gens).expect("enumerated values lie in [0, 1]");
        if !ok {
            problems.push(Discrepancy { value: x.clone(), detail: "in D(D(I)) but not in D(I) ∪ {1}".into() });
        }
    }
    let rhs = di.union(&CoeffSet::from_nonnegative([Rational::one()]));
    let missing = par::flat_map(rhs.elements(), |x| {
        if mem_dd_of_d_set(x, gens).expect("enumerated values lie in [0, 1]") {
            vec![]
        } else {
            vec![Discrepancy { value: x.clone(), detail: "in D(I) ∪ {1} but not in D(D(I))".into() }]
        }
    });
    problems.extend(missing);
    LemmaReport::from_discrepancies(ddi.len() + rhs.len(), problems)
}

/// Checks `D_{d₁}(I) ⊆ D_d(I)` for every enumerated `d₁ ∈ D_d(I)`.
pub fn check_dd_monotone(gens: &CoeffSet, d: &Rational, b: &EnumBounds) -> Result<LemmaReport> {
    if !d.is_positive() || d > &Rational::one() {
        return Err(domain(format!("shift d must lie in (0, 1], got {d}")));
    }
    let shifts = d_d_set(gens, d, b)?;
    let results = par::map(shifts.elements(), |d1| -> Result<(usize, Vec<Discrepancy>)> {
        let inner = d_d_set(gens, d1, b)?;
        let mut bad = Vec::new();
        for a in inner.iter() {
            if !mem_d_d_set(a, gens, d)? {
                bad.push(Discrepancy { value: a.clone(), detail: format!("in D_{d1}(I) but not in D_{d}(I)") });
            }
        }
        Ok((inner.len(), bad))
    });
    let mut checked = 0;
    let mut problems = Vec::new();
    for r in results {
        let (n, bad) = r?;
        checked += n;
        problems.extend(bad);
    }
    Ok(LemmaReport::from_discrepancies(checked, problems))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub i: Rational,
    pub m: u64,
    pub k: u64,
    pub f: Rational,
    pub target: Rational,
}

impl TraceEntry {
    /// `(m - 1 + k i + f) / m`, which equals `target`.
    pub fn value(&self) -> Rational {
        let m = Rational::from(self.m);
        (&m - Rational::one() + &self.i * self.k + &self.f) / m
    }
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\ttrace(m={},k={},f={},target={})", self.i, self.m, self.k, self.f, self.target)
    }
}

/// The elements `i ∈ I` with `(m - 1 + k i + f) / m ∈ J ∩ [0, 1]` for some
/// `m, k <= b.max_index` and `f ∈ I⁺`, each with the first witness in
/// `(m, k, target)` order. `f` is decided exactly, not enumerated.
pub fn finite_trace(gens: &CoeffSet, targets: &CoeffSet, b: &EnumBounds) -> Vec<TraceEntry> {
    let one = Rational::one();
    let targets: Vec<&Rational> = targets.iter().filter(|t| *t <= &one).collect();
    let n = b.max_index as u64;
    par::flat_map(gens.elements(), |i| {
        for m in 1..=n {
            let mr = Rational::from(m);
            for k in 1..=n {
                for &target in &targets {
                    let f = &mr * target - &mr + &one - i * k;
                    if in_plus(&f, gens) {
                        return vec![TraceEntry { i: i.clone(), m, k, f, target: target.clone() }];
                    }
                }
            }
        }
        vec![]
    })
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

    #[test]
    fn ddi_lemma_holds() {
        for (g, idx) in [("0", 6), ("1/2", 6), ("1/3,2/5", 5)] {
            let rep = check_ddi_lemma(&set(g), &EnumBounds::new(4, idx, None).unwrap());
            assert!(rep.holds, "{g}: {:?}", rep.counterexamples);
            assert!(rep.counterexamples.is_empty());
        }
    }

    #[test]
    fn dd_membership() {
        assert!(mem_dd_of_d_set(&r("1"), &set("2/5")).unwrap());
        assert!(mem_dd_of_d_set(&r("0"), &set("2/5")).unwrap());
        // 4/5 = (m - 1 + f)/m needs f ∈ D(I)⁺ with f = 1 - m/5: m = 5, f = 0.
        assert!(mem_dd_of_d_set(&r("4/5"), &set("2/5")).unwrap());
        assert!(mem_dd_of_d_set(&r("3/2"), &set("0")).is_err());
    }

    #[test]
    fn dd_monotone_holds() {
        let b = |n| EnumBounds::new(4, n, None).unwrap();
        for (g, d, n) in [("0", "1/2", 3), ("1/2", "1/3", 3), ("0", "1", 2)] {
            let rep = check_dd_monotone(&set(g), &r(d), &b(n)).unwrap();
            assert!(rep.holds, "{g} {d}: {:?}", rep.counterexamples);
        }
        assert!(check_dd_monotone(&set("0"), &r("0"), &b(2)).is_err());
    }

    #[test]
    fn finite_trace_examples() {
        let b = EnumBounds::new(4, 4, None).unwrap();
        let t = finite_trace(&set("1/2"), &set("3/4"), &b);
        assert_eq!(t, vec![TraceEntry { i: r("1/2"), m: 2, k: 1, f: r("0"), target: r("3/4") }]);

        let t = finite_trace(&set("1/3"), &set("1"), &b);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].i, r("1/3"));
        assert_eq!(t[0].value(), r("1"));
        // (m, k) = (1, 1) with f = 2/3 = 1/3 + 1/3 comes before (1, 3) with f = 0.
        assert_eq!((t[0].m, t[0].k, t[0].f.clone()), (1, 1, r("2/3")));

        assert!(finite_trace(&set("2/5"), &set("1/2"), &b).is_empty());
    }
}
