use crate::error::{domain, Result};
use crate::lctsets::{LctSet, LctValue, Witness};
use crate::par;
use crate::rational::Rational;
use crate::setalg::{in_plus, monoid_elements, plus_closure, pos_combinations, CoeffSet, EnumBounds};

fn require_positive(j: &CoeffSet) -> Result<&Rational> {
    j.min_positive().ok_or_else(|| domain("J needs a positive element"))
}

/// Every `(1 - i) / j` with `i` in the bounded `I⁺` and `j` a bounded positive
/// combination of `J`, without truncation to the complete region.
pub fn lct0_enumerate_untruncated(i: &CoeffSet, j: &CoeffSet, b: &EnumBounds) -> Result<LctSet> {
    require_positive(j)?;
    let plus = plus_closure(i, b);
    let js = pos_combinations(j, b)?;
    let one = Rational::one();
    let candidates = par::flat_map(js.elements(), |jv| {
        plus.iter()
            .map(|iv| LctValue::new((&one - iv) / jv, Witness::Coreg0 { j: jv.clone(), i: iv.clone() }))
            .collect()
    });
    Ok(LctSet::from_candidates(candidates))
}

/// The coregularity-zero thresholds on the region `{0} ∪ [1/V, ∞)`, where the
/// value bound `V` makes the enumeration complete: any `(1 - i)/j >= 1/V` with
/// `i <= 1` has `j <= V`.
pub fn lct0_enumerate(i: &CoeffSet, j: &CoeffSet, b: &EnumBounds) -> Result<LctSet> {
    let floor = b.value()?.recip().expect("value bound is positive");
    Ok(lct0_enumerate_untruncated(i, j, b)?.restrict_to_region(&floor))
}

/// Exact membership: searches `j` ascending over the monoid of `J` up to `1/t`
/// and decides `1 - t j ∈ I⁺` for each.
pub fn mem_lct0(t: &Rational, i: &CoeffSet, j: &CoeffSet) -> Result<Option<LctValue>> {
    if t.is_negative() {
        return Err(domain(format!("thresholds are nonnegative, got {t}")));
    }
    let jmin = require_positive(j)?;
    let one = Rational::one();
    if t.is_zero() {
        return Ok(in_plus(&one, i).then(|| LctValue::new(t.clone(), Witness::Coreg0 { j: jmin.clone(), i: one })));
    }
    let cap = t.recip().expect("positive");
    for jv in monoid_elements(j, &cap) {
        let iv = &one - t * &jv;
        if in_plus(&iv, i) {
            return Ok(Some(LctValue::new(t.clone(), Witness::Coreg0 { j: jv, i: iv })));
        }
    }
    Ok(None)
}
