//! Brute force over configurations `Σ (N_k - 1 + i_k + t j_k) / N_k = degree`
//! on the projective line. Shares no code with the closed-form enumerations.

use crate::error::{domain, Result};
use crate::lctsets::{LctSet, LctValue, OracleTerm, Witness};
use crate::par;
use crate::rational::Rational;
use crate::setalg::{plus_closure, pos_combinations, CoeffSet, EnumBounds};

struct Term {
    term: OracleTerm,
    /// `(N - 1 + i) / N`
    base: Rational,
    /// `j / N`
    slope: Rational,
}

/// Solutions `t >= 0` over at most `b.max_terms` terms with `N_k <= b.max_index`,
/// `i_k` in the bounded `I⁺` and `j_k` in `{0} ∪` the bounded positive
/// combinations of `J`. Some `j_k` must be positive, and after solving some
/// coefficient `i_k + t j_k` must be positive. With `cap_unit` every coefficient
/// is at most 1.
pub fn p1_oracle(i: &CoeffSet, j: &CoeffSet, degree: u8, b: &EnumBounds, cap_unit: bool) -> Result<LctSet> {
    if !(1..=2).contains(&degree) {
        return Err(domain(format!("degree must be 1 or 2, got {degree}")));
    }
    let ivals = plus_closure(i, b);
    let mut jvals = vec![Rational::zero()];
    if j.min_positive().is_some() {
        jvals.extend(pos_combinations(j, b)?.elements().iter().cloned());
    } else {
        b.value()?;
    }
    let mut terms = Vec::new();
    for n in 1..=b.max_index as u64 {
        let nr = Rational::from(n);
        for iv in ivals.iter() {
            for jv in &jvals {
                if n == 1 && iv.is_zero() && jv.is_zero() {
                    continue;
                }
                terms.push(Term {
                    base: (&nr - Rational::one() + iv) / &nr,
                    slope: jv / &nr,
                    term: OracleTerm { n, i: iv.clone(), j: jv.clone() },
                });
            }
        }
    }
    terms.sort_by(|a, b| a.base.cmp(&b.base).then_with(|| a.term.cmp(&b.term)));
    let target = Rational::from(degree as u64);
    let starts: Vec<usize> = (0..terms.len()).filter(|&k| terms[k].base <= target).collect();
    let search = Search { terms: &terms, target: &target, degree, max_terms: b.max_terms as usize, cap_unit };
    let candidates = par::flat_map(&starts, |&k| {
        let mut out = Vec::new();
        let mut chosen = vec![k];
        search.walk(&mut chosen, terms[k].base.clone(), terms[k].slope.clone(), &mut out);
        out
    });
    Ok(LctSet::from_candidates(candidates))
}

struct Search<'a> {
    terms: &'a [Term],
    target: &'a Rational,
    degree: u8,
    max_terms: usize,
    cap_unit: bool,
}

impl Search<'_> {
    fn walk(&self, chosen: &mut Vec<usize>, base: Rational, slope: Rational, out: &mut Vec<LctValue>) {
        if slope.is_positive() {
            self.solve(chosen, &base, &slope, out);
        }
        if chosen.len() == self.max_terms {
            return;
        }
        let last = *chosen.last().expect("nonempty");
        for k in last..self.terms.len() {
            let nb = &base + &self.terms[k].base;
            // Terms are sorted by base, so every later term overshoots too.
            if &nb > self.target {
                break;
            }
            chosen.push(k);
            self.walk(chosen, nb, &slope + &self.terms[k].slope, out);
            chosen.pop();
        }
    }

    fn solve(&self, chosen: &[usize], base: &Rational, slope: &Rational, out: &mut Vec<LctValue>) {
        let t = (self.target - base) / slope;
        let one = Rational::one();
        let mut some_positive = false;
        for &k in chosen {
            let term = &self.terms[k].term;
            let d = &term.i + &(&t * &term.j);
            if self.cap_unit && d > one {
                return;
            }
            some_positive |= d.is_positive();
        }
        if some_positive {
            let terms = chosen.iter().map(|&k| self.terms[k].term.clone()).collect();
            out.push(LctValue::new(t, Witness::Oracle { degree: self.degree, terms }));
        }
    }
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
    fn degree_one_examples() {
        let b: EnumBounds = "terms=3,index=3,value=3".parse().unwrap();
        let s = p1_oracle(&set("1/2"), &set("1"), 1, &b, true).unwrap();
        assert!(s.contains(&r("1/2")));
        assert!(s.iter().all(LctValue::is_consistent));
        let s = p1_oracle(&set("1"), &set("1"), 1, &b, true).unwrap();
        let zero = s.get(&r("0")).unwrap();
        assert_eq!(zero.witness.to_string(), "p1(N=[1],d=[1+t])");
        let two_terms = Witness::Oracle {
            degree: 1,
            terms: vec![OracleTerm { n: 1, i: r("1"), j: r("0") }, OracleTerm { n: 1, i: r("0"), j: r("1") }],
        };
        assert_eq!(two_terms.evaluate(), Some(r("0")));
    }

    #[test]
    fn degree_two_example() {
        let b: EnumBounds = "terms=4,index=2,value=1".parse().unwrap();
        let s = p1_oracle(&set(""), &set("1"), 2, &b, true).unwrap();
        let half = s.get(&r("1/2")).unwrap();
        assert!(half.is_consistent());
        assert!(s.values().iter().all(|v| !v.value.is_negative()));
    }

    #[test]
    fn bad_degree() {
        let b: EnumBounds = "value=1".parse().unwrap();
        assert!(p1_oracle(&set(""), &set("1"), 3, &b, true).is_err());
    }
}
