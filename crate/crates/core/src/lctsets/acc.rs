use std::collections::BTreeMap;
use std::fmt;

use crate::dualcx::{regularity_coregularity, StratifiedBoundary};
use crate::error::{domain, Result};
use crate::lctsets::lct1::weighted_totals;
use crate::lctsets::{mem_lct0, platonic_triples, LctSet, LctValue, Lct1Options, PlatonicTriple, Slot, Witness};
use crate::par;
use crate::rational::Rational;
use crate::setalg::{monoid_elements, plus_closure, plus_closure_exact, pos_combinations, CoeffSet, EnumBounds};

/// How the returned list was obtained and how far it can be trusted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccProof {
    pub c: u8,
    pub threshold: Rational,
    /// Every denominator term satisfies `j <= j_bound`.
    pub j_bound: Rational,
    /// Largest triple entry searched, for `c = 1`.
    pub triple_cutoff: Option<u64>,
    /// False when some family was truncated at the cutoff.
    pub complete: bool,
    pub note: String,
}

impl fmt::Display for AccProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={} t>={} j<={}", self.c, self.threshold, self.j_bound)?;
        if let Some(r) = self.triple_cutoff {
            write!(f, " triples<={r}")?;
        }
        write!(f, " complete={}: {}", self.complete, self.note)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccWitness {
    pub values: LctSet,
    pub proof: AccProof,
}

/// All elements `>= t` of the coregularity-`c` threshold set, found by exact
/// finite search.
///
/// For `c = 0`, `(1 - i)/j >= t` forces `j <= 1/t`, so the list is complete.
/// For `c = 1` the per-term cap `i_k + t j_k <= 1` is imposed (without it the
/// set has unboundedly large elements) and triples are searched up to
/// `max(5, ⌈2 / (t min J)⌉, ⌈2 / min I⌉)`. This covers the exceptional triples
/// and every `(2, 2, r)` that can contribute; `(1, q, r)` beyond the cutoff are
/// not searched.
pub fn verify_acc_above(i: &CoeffSet, j: &CoeffSet, c: u8, t: &Rational) -> Result<AccWitness> {
    if !t.is_positive() {
        return Err(domain(format!("ACC witness needs t > 0, got {t}")));
    }
    let jmin = j.min_positive().ok_or_else(|| domain("J needs a positive element"))?.clone();
    let j_bound = t.recip().expect("positive");
    let plus = plus_closure_exact(i);
    match c {
        0 => {
            let js = monoid_elements(j, &j_bound);
            let one = Rational::one();
            let candidates = par::flat_map(&js, |jv| {
                plus.iter()
                    .map(|iv| LctValue::new((&one - iv) / jv, Witness::Coreg0 { j: jv.clone(), i: iv.clone() }))
                    .filter(|v| &v.value >= t)
                    .collect()
            });
            let proof = AccProof {
                c,
                threshold: t.clone(),
                j_bound,
                triple_cutoff: None,
                complete: true,
                note: "every j in the monoid of J up to 1/t searched".into(),
            };
            Ok(AccWitness { values: LctSet::from_candidates(candidates), proof })
        }
        1 => {
            let two = Rational::int(2);
            let mut cutoff = (&two / &(t * &jmin)).ceil();
            if let Some(imin) = plus.min_positive() {
                cutoff = cutoff.max((&two / imin).ceil());
            }
            let cutoff: u64 = u64::try_from(cutoff.max(5.into()))
                .map_err(|_| domain("triple cutoff too large"))?;
            let cutoff_u32 = u32::try_from(cutoff).map_err(|_| domain("triple cutoff too large"))?;
            let js = {
                let mut v = vec![Rational::zero()];
                v.extend(monoid_elements(j, &j_bound));
                v
            };
            let triples = platonic_triples(cutoff_u32);
            let candidates = par::flat_map(&triples, |tr| capped_above(tr, t, &plus, &js));
            let proof = AccProof {
                c,
                threshold: t.clone(),
                j_bound,
                triple_cutoff: Some(cutoff),
                complete: false,
                note: "per-term cap i+t*j<=1; exceptional and (2,2,r) triples complete; (1,q,r) with r above the cutoff not searched".into(),
            };
            Ok(AccWitness { values: LctSet::from_candidates(candidates), proof })
        }
        _ => Err(domain(format!("coregularity must be 0 or 1, got {c}"))),
    }
}

/// Capped configurations of one triple whose threshold is `>= t`. Any such
/// configuration has `i_k + t j_k <= 1` and `Σ w_k (i_k + t j_k) <= N`,
/// which bounds the number of tail terms.
fn capped_above(tr: &PlatonicTriple, t: &Rational, plus: &CoeffSet, js: &[Rational]) -> Vec<LctValue> {
    let n = tr.numerator();
    let one = Rational::one();
    let pairs: Vec<(Rational, Slot)> = plus
        .iter()
        .flat_map(|a| js.iter().map(move |b| (a + &(t * b), Slot::new(a.clone(), b.clone()))))
        .filter(|(d, _)| d <= &one)
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    walk_above(tr, &n, &pairs, &mut chosen, Rational::zero(), &mut out);
    out
}

fn walk_above(
    tr: &PlatonicTriple,
    n: &Rational,
    pairs: &[(Rational, Slot)],
    chosen: &mut Vec<usize>,
    used: Rational,
    out: &mut Vec<LctValue>,
) {
    let depth = chosen.len();
    if depth >= 3 {
        let slots = [pairs[chosen[0]].1.clone(), pairs[chosen[1]].1.clone(), pairs[chosen[2]].1.clone()];
        let extras: Vec<Slot> = chosen[3..].iter().map(|&k| pairs[k].1.clone()).collect();
        let (i, j) = weighted_totals(tr, &slots, &extras);
        if j.is_positive() {
            let value = (n - &i) / &j;
            let one = Rational::one();
            if slots.iter().chain(&extras).all(|s| s.coefficient(&value) <= one) {
                out.push(LctValue::new(value, Witness::Coreg1 { triple: *tr, slots, extras }));
            }
        }
    }
    let weight = match depth {
        0..=2 => tr.weights()[depth],
        _ => tr.extra_weight(),
    };
    let start = if depth > 3 { chosen[depth - 1] } else { 0 };
    for k in start..pairs.len() {
        let (d, s) = &pairs[k];
        // Tail terms equal to zero add nothing.
        if depth >= 3 && s.i.is_zero() && s.j.is_zero() {
            continue;
        }
        let next = &used + &(d * weight);
        if &next > n {
            continue;
        }
        chosen.push(k);
        walk_above(tr, n, pairs, chosen, next, out);
        chosen.pop();
    }
}

/// Shape of a one-parameter family of triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailShape {
    /// `(1, q, r)` with `q` fixed.
    ContainsOne { q: u64 },
    /// `(2, 2, r)`.
    Dihedral,
}

/// A family of thresholds whose limit is a candidate accumulation point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `(1 - i) / j` with `j -> ∞`.
    DenominatorGrowth { i: Rational },
    /// Fixed slot values along the triples `shape` with `r -> ∞`.
    TripleTail { shape: TailShape, slots: [Slot; 3], extras: Vec<Slot> },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::DenominatorGrowth { i } => write!(f, "(1-i)/j,j->inf,i={i}"),
            Family::TripleTail { shape, slots, extras } => {
                match shape {
                    TailShape::ContainsOne { q } => write!(f, "(1,{q},r),r->inf")?,
                    TailShape::Dihedral => write!(f, "(2,2,r),r->inf")?,
                }
                write!(f, ",slots=")?;
                for (k, s) in slots.iter().chain(extras).enumerate() {
                    if k > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "({},{})", s.i, s.j)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hypothesis {
    /// `1 ∉ I`.
    OneNotInI,
    /// `I ∪ {0}` differs from `I⁺`.
    NotPlusClosed,
    /// `J` does not generate the positive integers.
    JNotPositiveIntegers,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::OneNotInI => "1 not in I",
            Hypothesis::NotPlusClosed => "I differs from I+",
            Hypothesis::JNotPositiveIntegers => "J does not generate the positive integers",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub value: Rational,
    /// Least family (in the canonical order) with this limit.
    pub family: Family,
    /// Number of distinct families found with this limit.
    pub realisations: usize,
    /// For `c = 1`: whether the value lies in the coregularity-zero set.
    pub in_lower: Option<bool>,
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\tfamilies={}", self.value, self.family, self.realisations)?;
        if let Some(b) = self.in_lower {
            write!(f, "\tlower={b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccumulationReport {
    pub candidates: Vec<Candidate>,
    pub violations: Vec<Hypothesis>,
}

/// Limits of the parametric families inside the bounded sets.
///
/// Slot values are drawn from the bounded `I⁺` and from `{0} ∪` the bounded
/// positive combinations of `J` (value bound defaults to `b.max_index`). Along
/// `(1, q, r)` and `(2, 2, r)` a fixed slot choice gives
/// `t(r) = (A r + B) / (C r + D)`, which accumulates at `A / C` when `C > 0`,
/// the limit is nonnegative and `AD ≠ BC`.
pub fn accumulation_candidates(
    i: &CoeffSet,
    j: &CoeffSet,
    c: u8,
    b: &EnumBounds,
    opts: Lct1Options,
) -> Result<AccumulationReport> {
    if c > 1 {
        return Err(domain(format!("coregularity must be 0 or 1, got {c}")));
    }
    if j.min_positive().is_none() {
        return Err(domain("J needs a positive element"));
    }
    let b = match &b.max_value {
        Some(_) => b.clone(),
        None => b.clone().with_value(Rational::from(b.max_index as u64)),
    };
    let ivals = plus_closure(i, &b);
    let mut jvals = vec![Rational::zero()];
    jvals.extend(pos_combinations(j, &b)?.elements().iter().cloned());

    let mut families: Vec<(Rational, Family)> = ivals
        .iter()
        .filter(|v| v < &&Rational::one())
        .map(|v| (Rational::zero(), Family::DenominatorGrowth { i: v.clone() }))
        .collect();
    if c == 1 {
        let extras = if opts.extra_terms { (b.max_terms as usize).saturating_sub(3) } else { 0 };
        let mut shapes = vec![TailShape::Dihedral];
        shapes.extend((1..=b.max_index as u64).map(|q| TailShape::ContainsOne { q }));
        let found = par::flat_map(&shapes, |&shape| {
            tail_limits(&LinearFamily::new(shape, extras), ivals.elements(), &jvals, opts.cap_unit)
        });
        families.extend(found);
    }

    let mut grouped: BTreeMap<Rational, Vec<Family>> = BTreeMap::new();
    for (v, f) in families {
        grouped.entry(v).or_default().push(f);
    }
    let mut candidates = Vec::new();
    for (value, mut fams) in grouped {
        fams.sort();
        fams.dedup();
        let in_lower = if c == 1 { Some(mem_lct0(&value, i, j)?.is_some()) } else { None };
        let realisations = fams.len();
        candidates.push(Candidate { value, family: fams.swap_remove(0), realisations, in_lower });
    }
    Ok(AccumulationReport { candidates, violations: hypotheses(i, j) })
}

fn hypotheses(i: &CoeffSet, j: &CoeffSet) -> Vec<Hypothesis> {
    let mut v = Vec::new();
    if !i.contains(&Rational::one()) {
        v.push(Hypothesis::OneNotInI);
    }
    if plus_closure_exact(i).positive() != i.positive() {
        v.push(Hypothesis::NotPlusClosed);
    }
    let ints = j.positive().iter().all(Rational::is_integer);
    if !(ints && j.contains(&Rational::one())) {
        v.push(Hypothesis::JNotPositiveIntegers);
    }
    v
}

/// A triple family whose weights are affine in `r`: each `(α, β)` is `α r + β`.
struct LinearFamily {
    shape: TailShape,
    numerator: (u64, u64),
    weights: Vec<(u64, u64)>,
}

impl LinearFamily {
    fn new(shape: TailShape, extras: usize) -> Self {
        let (numerator, slots, tail) = match shape {
            // weights qr, r, q and tail qr; numerator q + r
            TailShape::ContainsOne { q } => ((1, q), [(q, 0), (1, 0), (0, q)], (q, 0)),
            // weights 2r, 2r, 4 and tail 4r; numerator 4
            TailShape::Dihedral => ((0, 4), [(2, 0), (2, 0), (0, 4)], (4, 0)),
        };
        let mut weights = slots.to_vec();
        weights.extend(std::iter::repeat_n(tail, extras));
        LinearFamily { shape, numerator, weights }
    }

    fn combine(&self, values: &[&Rational]) -> (Rational, Rational) {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for (v, &(al, be)) in values.iter().zip(&self.weights) {
            a = a + *v * al;
            b = b + *v * be;
        }
        (a, b)
    }
}

fn tail_limits(fam: &LinearFamily, ivals: &[Rational], jvals: &[Rational], cap: bool) -> Vec<(Rational, Family)> {
    let pairs: Vec<Slot> =
        ivals.iter().flat_map(|a| jvals.iter().map(move |b| Slot::new(a.clone(), b.clone()))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    tail_walk(fam, &pairs, &mut chosen, cap, &mut out);
    out
}

fn tail_walk(fam: &LinearFamily, pairs: &[Slot], chosen: &mut Vec<usize>, cap: bool, out: &mut Vec<(Rational, Family)>) {
    let depth = chosen.len();
    if depth == fam.weights.len() {
        let slots: Vec<&Slot> = chosen.iter().map(|&k| &pairs[k]).collect();
        if let Some(limit) = tail_limit(fam, &slots, cap) {
            let mut extras: Vec<Slot> =
                slots[3..].iter().filter(|s| !(s.i.is_zero() && s.j.is_zero())).map(|s| (*s).clone()).collect();
            extras.sort();
            let three = [slots[0].clone(), slots[1].clone(), slots[2].clone()];
            out.push((limit, Family::TripleTail { shape: fam.shape, slots: three, extras }));
        }
        return;
    }
    let start = if depth > 3 { chosen[depth - 1] } else { 0 };
    for k in start..pairs.len() {
        chosen.push(k);
        tail_walk(fam, pairs, chosen, cap, out);
        chosen.pop();
    }
}

fn tail_limit(fam: &LinearFamily, slots: &[&Slot], cap: bool) -> Option<Rational> {
    let is: Vec<&Rational> = slots.iter().map(|s| &s.i).collect();
    let js: Vec<&Rational> = slots.iter().map(|s| &s.j).collect();
    let (ia, ib) = fam.combine(&is);
    let (c, d) = fam.combine(&js);
    let a = Rational::from(fam.numerator.0) - ia;
    let b = Rational::from(fam.numerator.1) - ib;
    if !c.is_positive() || a.is_negative() {
        return None;
    }
    // Constant sequences do not accumulate.
    let drift = &b * &c - &a * &d;
    if drift.is_zero() {
        return None;
    }
    // A limit of 0 needs the terms themselves to be positive.
    if a.is_zero() && !b.is_positive() {
        return None;
    }
    let limit = &a / &c;
    if cap {
        let one = Rational::one();
        for s in slots {
            if s.j.is_zero() {
                continue;
            }
            let d_lim = s.coefficient(&limit);
            // At equality the terms approach from above exactly when drift > 0.
            if d_lim > one || (d_lim == one && drift.is_positive()) {
                return None;
            }
        }
    }
    Some(limit)
}

/// The thresholds `1 - 1/(n + 2)` of a pair on affine `(n+1)`-space with a
/// single log canonical place; returns the threshold and the coregularity of
/// that one-vertex dual complex.
pub fn coreg_unbounded_counterexample(n: u64) -> Result<(Rational, i64)> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    let ambient = usize::try_from(n + 1).map_err(|_| domain("dimension too large"))?;
    let sb = StratifiedBoundary::single_divisor(ambient)?;
    let (_, coreg) = regularity_coregularity(&sb);
    Ok((Rational::one() - Rational::one() / Rational::from(n + 2), coreg))
}

/// Both complexity-one families over `p, q, r <= bound`, clipped to `[0, 1]`.
pub fn tsingularity_coreg1_set(bound: u32) -> LctSet {
    let n = bound as u64;
    let mut out = Vec::new();
    let zero = Rational::zero();
    let one = Rational::one();
    for p in 1..=n {
        for q in 1..=n {
            for r in 1..=n {
                for family in [1u8, 2] {
                    // Family 1 is symmetric; family 2 only in q, r.
                    if (family == 1 && !(p <= q && q <= r)) || (family == 2 && q > r) {
                        continue;
                    }
                    let w = Witness::Complexity1 { family, p, q, r };
                    let v = w.evaluate().expect("never degenerate");
                    if v >= zero && v <= one {
                        out.push(LctValue::new(v, w));
                    }
                }
            }
        }
    }
    LctSet::from_candidates(out)
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

    fn strs(s: &LctSet) -> Vec<String> {
        s.rationals().iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn acc_coreg_zero_examples() {
        let w = verify_acc_above(&set("1/2"), &set("1"), 0, &r("1/3")).unwrap();
        assert_eq!(strs(&w.values), ["1/3", "1/2", "1"]);
        assert!(w.proof.complete);
        let w = verify_acc_above(&set(""), &set("1"), 0, &r("1")).unwrap();
        assert_eq!(strs(&w.values), ["1"]);
        let w = verify_acc_above(&set("1/3"), &set("1"), 0, &r("2/3")).unwrap();
        assert_eq!(strs(&w.values), ["2/3", "1"]);
        assert!(verify_acc_above(&set(""), &set("1"), 0, &r("0")).is_err());
    }

    #[test]
    fn acc_coreg_one_is_finite_and_consistent() {
        let w = verify_acc_above(&set("1/2"), &set("1"), 1, &r("1/2")).unwrap();
        assert!(!w.values.is_empty());
        assert!(w.values.iter().all(|v| v.is_consistent() && v.value >= r("1/2")));
        assert_eq!(w.proof.triple_cutoff, Some(5));
    }

    #[test]
    fn accumulation_examples() {
        let b: EnumBounds = "terms=4,index=4,value=4".parse().unwrap();
        let rep = accumulation_candidates(&set("1/2"), &set("1"), 0, &b, Lct1Options::default()).unwrap();
        assert_eq!(rep.candidates.len(), 1);
        assert_eq!(rep.candidates[0].value, r("0"));

        let b: EnumBounds = "terms=3,index=3,value=2".parse().unwrap();
        let rep = accumulation_candidates(&set(""), &set("1"), 1, &b, Lct1Options::default()).unwrap();
        assert!(rep.candidates.iter().any(|c| c.value.is_zero()));
        let zero = rep.candidates.iter().find(|c| c.value.is_zero()).unwrap();
        assert!(zero.realisations > 1);
        assert!(rep.violations.contains(&Hypothesis::OneNotInI));
    }

    #[test]
    fn dihedral_tail_reaches_zero() {
        let fam = LinearFamily::new(TailShape::Dihedral, 0);
        let (z, one) = (Slot::zero(), Slot::new(r("0"), r("1")));
        assert_eq!(tail_limit(&fam, &[&one, &z, &z], false), Some(r("0")));
        // All j on the constant-weight slot: t(r) = 1 is constant.
        assert_eq!(tail_limit(&fam, &[&z, &z, &Slot::new(r("0"), r("4"))], false), None);
    }

    #[test]
    fn counterexample_series() {
        assert_eq!(coreg_unbounded_counterexample(1).unwrap(), (r("2/3"), 1));
        assert_eq!(coreg_unbounded_counterexample(2).unwrap(), (r("3/4"), 2));
        assert_eq!(coreg_unbounded_counterexample(10).unwrap(), (r("11/12"), 10));
        assert!(coreg_unbounded_counterexample(0).is_err());
    }

    #[test]
    fn complexity_one_values() {
        assert!(tsingularity_coreg1_set(2).contains(&r("1/2")));
        let s = tsingularity_coreg1_set(5);
        assert!(s.contains(&r("1/30")));
        assert!(s.iter().all(|v| v.is_consistent()));
        assert!(s.rationals().iter().all(|v| !v.is_negative() && v <= &Rational::one()));
    }
}
