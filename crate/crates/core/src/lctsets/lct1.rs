use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{domain, Result};
use crate::lctsets::{LctSet, LctValue, Lct1Options, Slot, Witness};
use crate::par;
use crate::rational::Rational;
use crate::setalg::{monoid_elements, plus_closure, plus_closure_exact, pos_combinations, CoeffSet, EnumBounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TripleKind {
    ContainsOne,
    Dihedral,
    Exceptional,
}

impl fmt::Display for TripleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripleKind::ContainsOne => "contains-one",
            TripleKind::Dihedral => "dihedral",
            TripleKind::Exceptional => "exceptional",
        })
    }
}

/// Positive integers with `1/p + 1/q + 1/r > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlatonicTriple {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl PlatonicTriple {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        if p == 0 || q == 0 || r == 0 {
            return Err(domain("triple entries must be positive"));
        }
        let (a, b, c) = (p as u128, q as u128, r as u128);
        // 1/p + 1/q + 1/r > 1  <=>  qr + pr + pq > pqr
        if b * c + a * c + a * b <= a * b * c {
            return Err(domain(format!("({p},{q},{r}) has 1/p + 1/q + 1/r <= 1")));
        }
        Ok(PlatonicTriple { p, q, r })
    }

    pub fn kind(&self) -> TripleKind {
        let mut v = [self.p, self.q, self.r];
        v.sort_unstable();
        match v {
            [1, _, _] => TripleKind::ContainsOne,
            [2, 2, _] => TripleKind::Dihedral,
            _ => TripleKind::Exceptional,
        }
    }

    /// `qr + pr + pq - pqr`, always positive.
    pub fn numerator(&self) -> Rational {
        let [a, b, c] = self.weights();
        Rational::from(a + b + c - self.extra_weight())
    }

    /// Slot weights `[qr, pr, pq]`.
    pub fn weights(&self) -> [u64; 3] {
        [self.q * self.r, self.p * self.r, self.p * self.q]
    }

    /// Weight `pqr` of the tail terms.
    pub fn extra_weight(&self) -> u64 {
        self.p * self.q * self.r
    }
}

impl fmt::Display for PlatonicTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// All triples `p <= q <= r <= bound`, ascending.
pub fn platonic_triples(bound: u32) -> Vec<PlatonicTriple> {
    let n = bound as u64;
    let mut out = Vec::new();
    for p in 1..=n {
        for q in p..=n {
            for r in q..=n {
                if let Ok(t) = PlatonicTriple::new(p, q, r) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Weighted totals `(i, j)` of a configuration.
pub(crate) fn weighted_totals(tr: &PlatonicTriple, slots: &[Slot; 3], extras: &[Slot]) -> (Rational, Rational) {
    let mut i = Rational::zero();
    let mut j = Rational::zero();
    for (s, w) in slots.iter().zip(tr.weights()) {
        i = i + &s.i * w;
        j = j + &s.j * w;
    }
    let e = tr.extra_weight();
    for s in extras {
        i = i + &s.i * e;
        j = j + &s.j * e;
    }
    (i, j)
}

fn coreg1(tr: PlatonicTriple, slots: [Slot; 3], mut extras: Vec<Slot>) -> Witness {
    extras.retain(|s| !(s.i.is_zero() && s.j.is_zero()));
    extras.sort();
    Witness::Coreg1 { triple: tr, slots, extras }
}

fn extra_count(b: &EnumBounds, opts: Lct1Options) -> usize {
    if opts.extra_terms {
        (b.max_terms as usize).saturating_sub(3)
    } else {
        0
    }
}

/// Thresholds `(qr + pr + pq - pqr - i) / j >= 0` of one triple, with every
/// slot value `i_k` in the bounded `I⁺` and `j_k` in `{0} ∪` the bounded
/// positive combinations of `J`.
pub fn lct1_weighted(
    tr: &PlatonicTriple,
    i: &CoeffSet,
    j: &CoeffSet,
    b: &EnumBounds,
    opts: Lct1Options,
) -> Result<LctSet> {
    if j.min_positive().is_none() {
        return Err(domain("J needs a positive element"));
    }
    let ivals = plus_closure(i, b).elements().to_vec();
    let mut jvals = vec![Rational::zero()];
    jvals.extend(pos_combinations(j, b)?.elements().iter().cloned());
    let extras = extra_count(b, opts);
    let candidates = if opts.cap_unit {
        capped_weighted(tr, &ivals, &jvals, extras)
    } else {
        uncapped_weighted(tr, &ivals, &jvals, extras)
    };
    Ok(LctSet::from_candidates(candidates))
}

/// Reachable weighted totals, each with one choice of slot values
/// (three slots, then `extras` tail slots).
fn weighted_sums(values: &[Rational], tr: &PlatonicTriple, extras: usize) -> Vec<(Rational, Vec<Rational>)> {
    let mut states: BTreeMap<Rational, Vec<Rational>> = BTreeMap::new();
    states.insert(Rational::zero(), Vec::new());
    let weights = tr.weights().into_iter().chain(std::iter::repeat_n(tr.extra_weight(), extras));
    for w in weights {
        let mut next = BTreeMap::new();
        for (total, choice) in &states {
            for v in values {
                next.entry(total + &(v * w)).or_insert_with(|| {
                    let mut c = choice.clone();
                    c.push(v.clone());
                    c
                });
            }
        }
        states = next;
    }
    states.into_iter().collect()
}

fn split_slots(ich: &[Rational], jch: &[Rational]) -> ([Slot; 3], Vec<Slot>) {
    let mut pairs = ich.iter().zip(jch).map(|(a, b)| Slot::new(a.clone(), b.clone()));
    let slots = [pairs.next().unwrap(), pairs.next().unwrap(), pairs.next().unwrap()];
    (slots, pairs.collect())
}

fn uncapped_weighted(tr: &PlatonicTriple, ivals: &[Rational], jvals: &[Rational], extras: usize) -> Vec<LctValue> {
    let n = tr.numerator();
    let itot: Vec<_> = weighted_sums(ivals, tr, extras).into_iter().filter(|(t, _)| t <= &n).collect();
    let jtot: Vec<_> = weighted_sums(jvals, tr, extras).into_iter().filter(|(t, _)| t.is_positive()).collect();
    par::flat_map(&itot, |(it, ich)| {
        let num = &n - it;
        jtot.iter()
            .map(|(jt, jch)| {
                let (slots, tail) = split_slots(ich, jch);
                LctValue::new(&num / jt, coreg1(*tr, slots, tail))
            })
            .collect()
    })
}

/// Per-term capped configurations: every `i_k + t j_k <= 1`.
fn capped_weighted(tr: &PlatonicTriple, ivals: &[Rational], jvals: &[Rational], extras: usize) -> Vec<LctValue> {
    let n = tr.numerator();
    let pairs: Vec<Slot> =
        ivals.iter().flat_map(|a| jvals.iter().map(move |b| Slot::new(a.clone(), b.clone()))).collect();
    let mut weights: Vec<u64> = tr.weights().to_vec();
    weights.extend(std::iter::repeat_n(tr.extra_weight(), extras));
    let first: Vec<usize> = (0..pairs.len()).filter(|&k| &pairs[k].i * weights[0] <= n).collect();
    par::flat_map(&first, |&k0| {
        let mut out = Vec::new();
        let mut chosen = vec![k0];
        let isum = &pairs[k0].i * weights[0];
        capped_dfs(tr, &n, &pairs, &weights, &mut chosen, isum, &mut out);
        out
    })
}

fn capped_dfs(
    tr: &PlatonicTriple,
    n: &Rational,
    pairs: &[Slot],
    weights: &[u64],
    chosen: &mut Vec<usize>,
    isum: Rational,
    out: &mut Vec<LctValue>,
) {
    let depth = chosen.len();
    if depth == weights.len() {
        let jsum: Rational = chosen.iter().zip(weights).map(|(&k, &w)| &pairs[k].j * w).sum();
        if !jsum.is_positive() {
            return;
        }
        let t = (n - &isum) / &jsum;
        let one = Rational::one();
        if chosen.iter().all(|&k| pairs[k].coefficient(&t) <= one) {
            let slots = [pairs[chosen[0]].clone(), pairs[chosen[1]].clone(), pairs[chosen[2]].clone()];
            let tail = chosen[3..].iter().map(|&k| pairs[k].clone()).collect();
            out.push(LctValue::new(t, coreg1(*tr, slots, tail)));
        }
        return;
    }
    // Tail slots share a weight; choosing them non-decreasing avoids repeats.
    let start = if depth > 3 { chosen[depth - 1] } else { 0 };
    for k in start..pairs.len() {
        let next = &isum + &(&pairs[k].i * weights[depth]);
        if &next > n {
            continue;
        }
        chosen.push(k);
        capped_dfs(tr, n, pairs, weights, chosen, next, out);
        chosen.pop();
    }
}

/// Union of [`lct1_weighted`] over all triples with entries `<= b.max_index`.
pub fn lct1_enumerate(i: &CoeffSet, j: &CoeffSet, b: &EnumBounds, opts: Lct1Options) -> Result<LctSet> {
    let triples = platonic_triples(b.max_index);
    let sets = par::map(&triples, |tr| lct1_weighted(tr, i, j, b, opts));
    Ok(LctSet::merge(sets.into_iter().collect::<Result<Vec<_>>>()?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lct1Membership {
    Found(LctValue),
    /// No configuration over triples with entries `<= triple_bound`; larger
    /// triples may still realise the value.
    NotFoundWithinBound { triple_bound: u32 },
}

impl Lct1Membership {
    pub fn is_found(&self) -> bool {
        matches!(self, Lct1Membership::Found(_))
    }
}

/// Exact search over each triple with entries `<= triple_bound`, in ascending
/// triple order. For `t > 0` every slot satisfies `w (i + t j) <= N`, which
/// bounds `j`; tail terms are unbounded in number.
pub fn mem_lct1(
    t: &Rational,
    i: &CoeffSet,
    j: &CoeffSet,
    triple_bound: u32,
    opts: Lct1Options,
) -> Result<Lct1Membership> {
    if t.is_negative() {
        return Err(domain(format!("thresholds are nonnegative, got {t}")));
    }
    let jmin = j.min_positive().ok_or_else(|| domain("J needs a positive element"))?.clone();
    let plus = plus_closure_exact(i);
    let triples = platonic_triples(triple_bound);
    let found = par::map(&triples, |tr| solve_triple(tr, t, j, &plus, &jmin, opts));
    Ok(match found.into_iter().flatten().next() {
        Some(w) => Lct1Membership::Found(LctValue::new(t.clone(), w)),
        None => Lct1Membership::NotFoundWithinBound { triple_bound },
    })
}

/// A partial configuration: weighted coefficient total, whether some `j > 0`,
/// and the slots used.
#[derive(Clone)]
struct Partial {
    has_j: bool,
    slots: Vec<Slot>,
}

fn solve_triple(
    tr: &PlatonicTriple,
    t: &Rational,
    j: &CoeffSet,
    plus: &CoeffSet,
    jmin: &Rational,
    opts: Lct1Options,
) -> Option<Witness> {
    let n = tr.numerator();
    let [w1, w2, w3] = tr.weights();
    let we = tr.extra_weight();
    let one = Rational::one();

    let slot_options = |w: u64| -> Vec<(Rational, Slot)> {
        let mut opts_out = Vec::new();
        let bound = &n / &Rational::from(w);
        let js: Vec<Rational> = if t.is_zero() {
            vec![Rational::zero(), jmin.clone()]
        } else {
            let mut v = vec![Rational::zero()];
            v.extend(monoid_elements(j, &(&bound / t)));
            v
        };
        for a in plus.iter() {
            for bj in &js {
                let d = a + &(t * bj);
                if d > bound || (opts.cap_unit && d > one) {
                    continue;
                }
                opts_out.push((&d * w, Slot::new(a.clone(), bj.clone())));
            }
        }
        opts_out
    };

    let mut tails: Vec<(Rational, Partial)> = vec![(Rational::zero(), Partial { has_j: false, slots: vec![] })];
    if opts.extra_terms {
        tails = tail_sums(&slot_options(we), &n);
    }

    // Two halves: slots 1 and 2, then slot 3 with the tail.
    let mut left: HashMap<Rational, [Option<Partial>; 2]> = HashMap::new();
    for (c1, s1) in slot_options(w1) {
        for (c2, s2) in slot_options(w2) {
            let total = &c1 + &c2;
            if total > n {
                continue;
            }
            let has_j = s1.j.is_positive() || s2.j.is_positive();
            let e = left.entry(total).or_insert([None, None]);
            let idx = has_j as usize;
            if e[idx].is_none() {
                e[idx] = Some(Partial { has_j, slots: vec![s1.clone(), s2] });
            }
        }
    }
    for (c3, s3) in slot_options(w3) {
        for (ce, tail) in &tails {
            let used = &c3 + ce;
            if used > n {
                continue;
            }
            let Some(entry) = left.get(&(&n - &used)) else { continue };
            let right_j = s3.j.is_positive() || tail.has_j;
            let pick = if right_j { entry[1].as_ref().or(entry[0].as_ref()) } else { entry[1].as_ref() };
            if let Some(l) = pick {
                let slots = [l.slots[0].clone(), l.slots[1].clone(), s3.clone()];
                return Some(coreg1(*tr, slots, tail.slots.clone()));
            }
        }
    }
    None
}

/// Reachable totals of any number of tail terms, each total at most `n`,
/// keeping one configuration per `(total, has_j)`.
fn tail_sums(options: &[(Rational, Slot)], n: &Rational) -> Vec<(Rational, Partial)> {
    let nonzero: Vec<&(Rational, Slot)> =
        options.iter().filter(|(c, s)| c.is_positive() || s.j.is_positive()).collect();
    let mut seen: BTreeMap<(Rational, bool), Partial> = BTreeMap::new();
    let mut frontier = vec![(Rational::zero(), Partial { has_j: false, slots: vec![] })];
    seen.insert((Rational::zero(), false), frontier[0].1.clone());
    while let Some((total, part)) = frontier.pop() {
        for (c, s) in &nonzero {
            let next = &total + c;
            if &next > n {
                continue;
            }
            let has_j = part.has_j || s.j.is_positive();
            let key = (next.clone(), has_j);
            if seen.contains_key(&key) {
                continue;
            }
            let mut slots = part.slots.clone();
            slots.push((*s).clone());
            let p = Partial { has_j, slots };
            seen.insert(key, p.clone());
            frontier.push((next, p));
        }
    }
    seen.into_iter().map(|((total, _), p)| (total, p)).collect()
}
