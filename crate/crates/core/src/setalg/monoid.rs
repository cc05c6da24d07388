//! Membership in a finitely generated additive monoid of nonnegative rationals.
//!
//! Generators are scaled to coprime positive integers over a common unit, so
//! membership becomes an unbounded integer knapsack. For moderate smallest
//! weights we build a shortest-path table over residues modulo that weight once,
//! after which every query is O(1): a target `n` is reachable iff the least
//! reachable value in its residue class is `<= n`. Larger instances fall back
//! to a memoised depth-first search.

use std::collections::{BTreeMap, HashSet};
use std::collections::BinaryHeap;
use std::cmp::Reverse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::{common_denominator, Rational};

const MAX_RESIDUE_TABLE: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct Monoid {
    gens: Vec<Rational>,
    /// Every generator is an integer multiple of `unit`, with coprime multiples.
    unit: Rational,
    weights: Vec<BigInt>,
    table: Option<ResidueTable>,
}

#[derive(Clone, Debug)]
struct ResidueTable {
    modulus: u64,
    small: Vec<u64>,
    dist: Vec<u128>,
    /// (previous residue, generator index) on a shortest path.
    pred: Vec<(u32, u32)>,
}

impl Monoid {
    /// Zeros and duplicates are dropped; negative generators are ignored by
    /// callers' validation and must not be passed here.
    pub fn new(gens: &[Rational]) -> Self {
        let mut gens: Vec<Rational> = gens.iter().filter(|g| g.is_positive()).cloned().collect();
        gens.sort();
        gens.dedup();
        if gens.is_empty() {
            return Monoid { gens, unit: Rational::one(), weights: Vec::new(), table: None };
        }
        let l = common_denominator(&gens);
        let scaled: Vec<BigInt> = gens.iter().map(|g| g.scaled_integer(&l).expect("lcm scales")).collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, w| acc.gcd(w));
        let weights: Vec<BigInt> = scaled.iter().map(|w| w / &g).collect();
        let unit = Rational::new(g, l).expect("positive lcm");
        let table = ResidueTable::build(&weights);
        Monoid { gens, unit, weights, table }
    }

    pub fn generators(&self) -> &[Rational] {
        &self.gens
    }

    pub fn contains(&self, a: &Rational) -> bool {
        self.decompose(a).is_some()
    }

    /// Multiplicity of each generator (in `generators()` order) in some
    /// representation of `a`, or `None` if `a` is not in the monoid.
    pub fn decompose(&self, a: &Rational) -> Option<Vec<u64>> {
        if a.is_negative() {
            return None;
        }
        if a.is_zero() {
            return Some(vec![0; self.gens.len()]);
        }
        if self.gens.is_empty() {
            return None;
        }
        let q = a / &self.unit;
        if !q.is_integer() {
            return None;
        }
        let n = q.numer().clone();
        match &self.table {
            Some(t) => t.decompose(&n, self.gens.len()),
            None => dfs_decompose(&n, &self.weights),
        }
    }

    /// All monoid elements in `[0, cap]`, ascending, each with one decomposition.
    pub fn elements_up_to(&self, cap: &Rational) -> Vec<(Rational, Vec<u64>)> {
        let mut seen: BTreeMap<Rational, Vec<u64>> = BTreeMap::new();
        seen.insert(Rational::zero(), vec![0; self.gens.len()]);
        if cap.is_negative() {
            return Vec::new();
        }
        // Each distinct value is expanded once; generators are ascending so the
        // inner loop stops at the first overshoot.
        let mut frontier = vec![Rational::zero()];
        while let Some(value) = frontier.pop() {
            let counts = seen[&value].clone();
            for (i, g) in self.gens.iter().enumerate() {
                let next = &value + g;
                if &next > cap {
                    break;
                }
                if !seen.contains_key(&next) {
                    let mut c = counts.clone();
                    c[i] += 1;
                    seen.insert(next.clone(), c);
                    frontier.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }
}

impl ResidueTable {
    fn build(weights: &[BigInt]) -> Option<Self> {
        let small: Option<Vec<u64>> = weights.iter().map(|w| w.to_u64()).collect();
        let small = small?;
        let modulus = small[0];
        if modulus > MAX_RESIDUE_TABLE {
            return None;
        }
        let m = modulus as usize;
        let mut dist = vec![u128::MAX; m];
        let mut pred = vec![(u32::MAX, u32::MAX); m];
        dist[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u128, 0usize)));
        while let Some(Reverse((d, r))) = heap.pop() {
            if d > dist[r] {
                continue;
            }
            for (gi, &w) in small.iter().enumerate().skip(1) {
                let nr = ((r as u64 + w % modulus) % modulus) as usize;
                let nd = d + w as u128;
                if nd < dist[nr] {
                    dist[nr] = nd;
                    pred[nr] = (r as u32, gi as u32);
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        Some(ResidueTable { modulus, small, dist, pred })
    }

    fn decompose(&self, n: &BigInt, len: usize) -> Option<Vec<u64>> {
        let r = (n % BigInt::from(self.modulus)).to_usize()?;
        let d = self.dist[r];
        if d == u128::MAX || BigInt::from(d) > *n {
            return None;
        }
        let mut counts = vec![0u64; len];
        let mut cur = r;
        while cur != 0 {
            let (prev, gi) = self.pred[cur];
            counts[gi as usize] += 1;
            cur = prev as usize;
        }
        let rest = (n - BigInt::from(d)) / BigInt::from(self.modulus);
        counts[0] += rest.to_u64()?;
        debug_assert_eq!(
            counts.iter().zip(&self.small).map(|(&c, &w)| c as u128 * w as u128).sum::<u128>(),
            n.to_u128().unwrap_or(0)
        );
        Some(counts)
    }
}

fn dfs_decompose(n: &BigInt, weights: &[BigInt]) -> Option<Vec<u64>> {
    // Largest weights first keeps the branching shallow.
    let order: Vec<usize> = (0..weights.len()).rev().collect();
    let mut failed = HashSet::new();
    let mut counts = vec![0u64; weights.len()];
    fn go(
        pos: usize,
        rem: &BigInt,
        order: &[usize],
        weights: &[BigInt],
        failed: &mut HashSet<(usize, BigInt)>,
        counts: &mut Vec<u64>,
    ) -> bool {
        if rem.is_zero() {
            return true;
        }
        if pos == order.len() || failed.contains(&(pos, rem.clone())) {
            return false;
        }
        let w = &weights[order[pos]];
        if pos + 1 == order.len() {
            if (rem % w).is_zero() {
                counts[order[pos]] = (rem / w).to_u64().unwrap_or(u64::MAX);
                return true;
            }
            failed.insert((pos, rem.clone()));
            return false;
        }
        let max = rem / w;
        let mut k = max.clone();
        loop {
            let next = rem - &k * w;
            if go(pos + 1, &next, order, weights, failed, counts) {
                counts[order[pos]] = k.to_u64().unwrap_or(u64::MAX);
                return true;
            }
            if k.is_zero() {
                break;
            }
            k -= BigInt::one();
        }
        failed.insert((pos, rem.clone()));
        false
    }
    go(0, n, &order, weights, &mut failed, &mut counts).then_some(counts)
}
