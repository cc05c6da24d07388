//! Simplicial affine toric pairs.
//!
//! A torus-invariant divisor `Σ a_i D_i` on a simplicial cone is `Q`-Cartier,
//! given by the linear function taking `a_i` on the ray generator `v_i`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::dualcx::StratifiedBoundary;
use crate::error::{domain, invalid, Error, Result};
use crate::par;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    rays: Vec<Vec<i64>>,
    /// Inverse of the matrix whose rows are the rays.
    inverse: Vec<Vec<Rational>>,
}

impl SimplicialCone {
    /// Non-primitive rays are divided by their content, with a warning.
    pub fn new(rays: Vec<Vec<i64>>) -> Result<Self> {
        let n = rays.len();
        if n == 0 {
            return Err(invalid("a cone needs at least one ray"));
        }
        let mut prim = Vec::with_capacity(n);
        for ray in rays {
            if ray.len() != n {
                return Err(invalid(format!("ray {ray:?} has {} entries, expected {n}", ray.len())));
            }
            let g = ray.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g == 0 {
                return Err(invalid("the zero vector is not a ray"));
            }
            if g != 1 {
                log::warn!("ray {ray:?} is not primitive; dividing by {g}");
            }
            prim.push(ray.iter().map(|x| x / g).collect::<Vec<i64>>());
        }
        let matrix: Vec<Vec<Rational>> =
            prim.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect();
        let inverse = invert(&matrix).ok_or_else(|| invalid("rays are linearly dependent"))?;
        Ok(SimplicialCone { rays: prim, inverse })
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// The coordinates `λ` with `v = Σ λ_i v_i`.
    pub fn ray_coordinates(&self, v: &[i64]) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|k| &self.inverse[k][i] * &Rational::from(v[k])).sum())
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.ray_coordinates(v).iter().all(|l| !l.is_negative())
    }
}

/// Gauss-Jordan inverse over the rationals; `None` when singular.
fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let sub = &f * &a[col][k];
                    a[r][k] = &a[r][k] - &sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricPair {
    pub cone: SimplicialCone,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl ToricPair {
    pub fn new(cone: SimplicialCone, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        let n = cone.dim();
        if b.len() != n || c.len() != n {
            return Err(invalid(format!("need {n} coefficients for b and c")));
        }
        if let Some(x) = b.iter().find(|x| x > &&Rational::one()) {
            return Err(domain(format!("boundary coefficient {x} exceeds 1; the pair is not log canonical")));
        }
        if let Some(x) = c.iter().find(|x| x.is_negative()) {
            return Err(domain(format!("divisor coefficient {x} is negative")));
        }
        Ok(ToricPair { cone, b, c })
    }
}

impl FromStr for ToricPair {
    type Err = Error;

    /// `dim n`, then `n` ray lines of integers, then `b: ...` and `c: ...`.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty cone file".into()))?;
        let n: usize = header
            .strip_prefix("dim")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `dim n`, got `{header}`")))?;
        let mut rays = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {n} ray lines")))?;
            let ray = line
                .split_whitespace()
                .map(|w| w.parse::<i64>().map_err(|_| Error::Parse(format!("bad ray entry `{w}`"))))
                .collect::<Result<Vec<_>>>()?;
            rays.push(ray);
        }
        let mut coeffs = |key: &str| -> Result<Vec<Rational>> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing `{key}:` line")))?;
            let rest = line
                .strip_prefix(key)
                .and_then(|s| s.strip_prefix(':'))
                .ok_or_else(|| Error::Parse(format!("expected `{key}: ...`, got `{line}`")))?;
            rest.split_whitespace().map(str::parse).collect()
        };
        let b = coeffs("b")?;
        let c = coeffs("c")?;
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected line `{extra}`")));
        }
        ToricPair::new(SimplicialCone::new(rays)?, b, c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    /// `ψ(v_i) = 1 - b_i`.
    Boundary,
    /// `ψ(v_i) = c_i`.
    Gamma,
}

/// Coefficients of the linear function with the prescribed values on the rays.
pub fn discrepancy_functional(tp: &ToricPair, which: Functional) -> Vec<Rational> {
    let values: Vec<Rational> = match which {
        Functional::Boundary => tp.b.iter().map(|b| Rational::one() - b).collect(),
        Functional::Gamma => tp.c.clone(),
    };
    let n = tp.cone.dim();
    (0..n).map(|k| (0..n).map(|i| &tp.cone.inverse[k][i] * &values[i]).sum()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Threshold {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => write!(f, "{t}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

/// `min (1 - b_i) / c_i` over rays with `c_i > 0`.
pub fn toric_lct(tp: &ToricPair) -> Threshold {
    tp.b.iter()
        .zip(&tp.c)
        .filter(|(_, c)| c.is_positive())
        .map(|(b, c)| (Rational::one() - b) / c)
        .min()
        .map_or(Threshold::Infinite, Threshold::Finite)
}

/// `min ψ_B(v) / ψ_Γ(v)` over primitive lattice points `v` of the cone in the
/// box `[-radius, radius]^n` with `ψ_Γ(v) > 0`.
pub fn toric_lct_oracle(tp: &ToricPair, radius: u32) -> Result<Threshold> {
    let r = radius as i64;
    let widest = tp.cone.rays.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
    if r < widest {
        return Err(domain(format!("box radius {radius} is smaller than the largest ray entry {widest}")));
    }
    let psi_b = discrepancy_functional(tp, Functional::Boundary);
    let psi_c = discrepancy_functional(tp, Functional::Gamma);
    let n = tp.cone.dim();
    let firsts: Vec<i64> = (-r..=r).collect();
    let best = par::map(&firsts, |&x0| {
        let mut best: Option<Rational> = None;
        let mut v = vec![0i64; n];
        v[0] = x0;
        scan(&mut v, 1, r, &mut |v: &[i64]| {
            if v.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1 || !tp.cone.contains(v) {
                return;
            }
            let eval = |psi: &[Rational]| -> Rational { psi.iter().zip(v).map(|(p, &x)| p * &Rational::from(x)).sum() };
            let den = eval(&psi_c);
            if den.is_positive() {
                let ratio = eval(&psi_b) / den;
                if best.as_ref().is_none_or(|b| &ratio < b) {
                    best = Some(ratio);
                }
            }
        });
        best
    });
    Ok(best.into_iter().flatten().min().map_or(Threshold::Infinite, Threshold::Finite))
}

fn scan(v: &mut Vec<i64>, pos: usize, r: i64, f: &mut impl FnMut(&[i64])) {
    if pos == v.len() {
        f(v);
        return;
    }
    for x in -r..=r {
        v[pos] = x;
        scan(v, pos + 1, r, f);
    }
}

/// Torus-invariant strata of the chosen rays: every nonempty subset spans a
/// face of a simplicial cone, so each intersection is irreducible.
/// Divisor `k` of the result is ray `reduced[k]`.
pub fn toric_stratification(cone: &SimplicialCone, reduced: &[usize]) -> Result<StratifiedBoundary> {
    let mut rays = reduced.to_vec();
    rays.sort_unstable();
    rays.dedup();
    if rays.is_empty() || rays.len() != reduced.len() {
        return Err(invalid("choose a nonempty set of distinct rays"));
    }
    if let Some(&bad) = rays.iter().find(|&&i| i >= cone.dim()) {
        return Err(invalid(format!("ray index {} out of range", bad + 1)));
    }
    let k = reduced.len();
    let strata = (1u64..(1 << k)).map(|mask| ((0..k).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>(), 1));
    StratifiedBoundary::new(cone.dim(), k, strata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualcx::regularity_coregularity;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| r(s)).collect()
    }

    fn a1() -> SimplicialCone {
        SimplicialCone::new(vec![vec![0, 1], vec![2, 1]]).unwrap()
    }

    fn plane() -> SimplicialCone {
        SimplicialCone::new(vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn functionals() {
        let tp = ToricPair::new(plane(), rs(&["0", "0"]), rs(&["0", "0"])).unwrap();
        assert_eq!(discrepancy_functional(&tp, Functional::Boundary), rs(&["1", "1"]));
        let tp = ToricPair::new(a1(), rs(&["0", "0"]), rs(&["1", "0"])).unwrap();
        assert_eq!(discrepancy_functional(&tp, Functional::Boundary), rs(&["0", "1"]));
        assert_eq!(discrepancy_functional(&tp, Functional::Gamma), rs(&["-1/2", "1"]));
    }

    #[test]
    fn thresholds() {
        let tp = ToricPair::new(plane(), rs(&["1", "1"]), rs(&["1", "1"])).unwrap();
        assert_eq!(toric_lct(&tp), Threshold::Finite(r("0")));
        let tp = ToricPair::new(plane(), rs(&["0", "0"]), rs(&["1", "1"])).unwrap();
        assert_eq!(toric_lct(&tp), Threshold::Finite(r("1")));
        assert_eq!(toric_lct_oracle(&tp, 5).unwrap(), Threshold::Finite(r("1")));
        let line = ToricPair::new(SimplicialCone::new(vec![vec![1]]).unwrap(), rs(&["1/3"]), rs(&["2"])).unwrap();
        assert_eq!(toric_lct(&line), Threshold::Finite(r("1/3")));
        let tp = ToricPair::new(a1(), rs(&["0", "0"]), rs(&["1", "0"])).unwrap();
        assert_eq!(toric_lct_oracle(&tp, 2).unwrap(), Threshold::Finite(r("1")));
        let tp = ToricPair::new(a1(), rs(&["0", "0"]), rs(&["0", "0"])).unwrap();
        assert_eq!(toric_lct(&tp), Threshold::Infinite);
        assert_eq!(toric_lct_oracle(&tp, 3).unwrap(), Threshold::Infinite);
        assert!(toric_lct_oracle(&tp, 1).is_err());
    }

    #[test]
    fn validation() {
        assert!(SimplicialCone::new(vec![vec![1, 2], vec![2, 4]]).is_err());
        assert_eq!(SimplicialCone::new(vec![vec![2, 0], vec![0, 1]]).unwrap().rays()[0], vec![1, 0]);
        assert!(ToricPair::new(plane(), rs(&["3/2", "0"]), rs(&["0", "0"])).is_err());
        assert!(ToricPair::new(plane(), rs(&["0", "0"]), rs(&["-1", "0"])).is_err());
    }

    #[test]
    fn parse_file() {
        let tp: ToricPair = "dim 2\n0 1\n2 1\nb: 0 0\nc: 1 0\n".parse().unwrap();
        assert_eq!(tp.cone.rays(), &[vec![0, 1], vec![2, 1]]);
        assert_eq!(toric_lct(&tp), Threshold::Finite(r("1")));
        assert!("dim 2\n0 1\nb: 0 0\nc: 1 0\n".parse::<ToricPair>().is_err());
    }

    #[test]
    fn stratification() {
        for n in 2..=4usize {
            let rays = (0..n).map(|i| (0..n).map(|k| i64::from(i == k)).collect()).collect();
            let cone = SimplicialCone::new(rays).unwrap();
            let all: Vec<usize> = (0..n).collect();
            let sb = toric_stratification(&cone, &all).unwrap();
            assert_eq!(regularity_coregularity(&sb), (n as i64 - 1, 0));
        }
        let sb = toric_stratification(&plane(), &[0]).unwrap();
        assert_eq!(regularity_coregularity(&sb), (0, 1));
        assert!(toric_stratification(&plane(), &[]).is_err());
    }
}
