//! Dual complexes of stratified boundaries, given combinatorially.
//!
//! Input is the number of irreducible components of every intersection
//! `E_S = ⋂_{i∈S} E_i`. Each component is a simplex on the vertex set `S`;
//! several components over the same `S` give parallel simplices, so the result
//! is a Δ-complex in general. Component `z` of `E_T` is taken to lie in
//! component `z mod count(S)` of `E_S` for `S ⊂ T`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Divisor indices are 0-based here and 1-based in the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedBoundary {
    ambient_dim: usize,
    divisors: usize,
    strata: BTreeMap<Vec<usize>, u32>,
}

fn show(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl StratifiedBoundary {
    /// Singletons missing from `strata` get count 1; zero counts are dropped.
    pub fn new(ambient_dim: usize, divisors: usize, strata: impl IntoIterator<Item = (Vec<usize>, u32)>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(invalid("ambient dimension must be positive"));
        }
        let mut map = BTreeMap::new();
        for (mut s, count) in strata {
            s.sort_unstable();
            if s.is_empty() {
                return Err(invalid("strata are indexed by nonempty divisor sets"));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("stratum {} repeats a divisor", show(&s))));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= divisors) {
                return Err(invalid(format!("divisor {} out of range 1..={divisors}", bad + 1)));
            }
            if map.insert(s.clone(), count).is_some() {
                return Err(invalid(format!("stratum {} given twice", show(&s))));
            }
        }
        for i in 0..divisors {
            let c = map.entry(vec![i]).or_insert(1);
            if *c != 1 {
                return Err(invalid(format!("stratum {} must have count 1, got {c}", show(&[i]))));
            }
        }
        map.retain(|_, c| *c > 0);
        for s in map.keys() {
            if s.len() > ambient_dim {
                return Err(invalid(format!(
                    "stratum {} meets {} divisors in dimension {ambient_dim}",
                    show(s),
                    s.len()
                )));
            }
            for skip in 0..s.len() {
                if s.len() == 1 {
                    break;
                }
                let mut face = s.clone();
                face.remove(skip);
                if !map.contains_key(&face) {
                    return Err(invalid(format!("stratum {} is nonempty but its face {} is empty", show(s), show(&face))));
                }
            }
        }
        Ok(StratifiedBoundary { ambient_dim, divisors, strata: map })
    }

    /// `dim X = ambient_dim` with one prime divisor.
    pub fn single_divisor(ambient_dim: usize) -> Result<Self> {
        Self::new(ambient_dim, 1, [])
    }

    /// No boundary divisors at all.
    pub fn empty(ambient_dim: usize) -> Result<Self> {
        Self::new(ambient_dim, 0, [])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn divisors(&self) -> usize {
        self.divisors
    }

    pub fn count(&self, s: &[usize]) -> u32 {
        let mut s = s.to_vec();
        s.sort_unstable();
        self.strata.get(&s).copied().unwrap_or(0)
    }

    pub fn strata(&self) -> impl Iterator<Item = (&[usize], u32)> {
        self.strata.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Renames divisor `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.divisors];
        if perm.len() != self.divisors || perm.iter().any(|&p| p >= self.divisors || std::mem::replace(&mut seen[p], true)) {
            return Err(invalid("relabelling must be a permutation of the divisors"));
        }
        let strata = self.strata.iter().map(|(s, &c)| (s.iter().map(|&i| perm[i]).collect(), c));
        Self::new(self.ambient_dim, self.divisors, strata)
    }
}

impl FromStr for StratifiedBoundary {
    type Err = Error;

    /// `dim n`, `divisors r`, then `stratum i,j,... count` lines (1-based);
    /// blank lines and `#` comments are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut divisors = None;
        let mut strata = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: `{line}`", lineno + 1));
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |w: &str| w.parse::<usize>().map_err(|_| err("expected a nonnegative integer"));
            match words.as_slice() {
                ["dim", n] => dim = Some(num(n)?),
                ["divisors", r] => divisors = Some(num(r)?),
                ["stratum", idx, count] => {
                    let s = idx
                        .split(',')
                        .map(|w| match num(w.trim())? {
                            0 => Err(err("divisor indices start at 1")),
                            k => Ok(k - 1),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let c = count.parse::<u32>().map_err(|_| err("expected a component count"))?;
                    strata.push((s, c));
                }
                _ => return Err(err("unrecognised line")),
            }
        }
        let dim = dim.ok_or_else(|| Error::Parse("missing `dim` line".into()))?;
        let divisors = divisors.ok_or_else(|| Error::Parse("missing `divisors` line".into()))?;
        Self::new(dim, divisors, strata)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub component: u32,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", show(&self.vertices), self.component + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    simplices: Vec<Simplex>,
    counts: BTreeMap<Vec<usize>, u32>,
}

pub fn build_dual_complex(sb: &StratifiedBoundary) -> DualComplex {
    let mut simplices = Vec::new();
    for (s, &c) in &sb.strata {
        for z in 0..c {
            simplices.push(Simplex { vertices: s.clone(), component: z });
        }
    }
    simplices.sort_by(|a, b| a.vertices.len().cmp(&b.vertices.len()).then_with(|| a.cmp(b)));
    DualComplex { simplices, counts: sb.strata.clone() }
}

/// Which maximal simplex defines the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DimConvention {
    /// Smallest inclusion-maximal simplex.
    #[default]
    Smallest,
    /// Largest simplex; the usual dimension of a complex.
    Largest,
}

impl DualComplex {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices.iter().filter(|s| s.vertices.len() == 1).count()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// True when `a` is a proper face of `b` under the gluing rule.
    pub fn is_face(&self, a: &Simplex, b: &Simplex) -> bool {
        a.vertices.len() < b.vertices.len()
            && a.vertices.iter().all(|v| b.vertices.binary_search(v).is_ok())
            && self.counts.get(&a.vertices).is_some_and(|&c| b.component % c == a.component)
    }

    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        self.simplices.iter().filter(|a| !self.simplices.iter().any(|b| self.is_face(a, b))).collect()
    }

    pub fn is_equidimensional(&self) -> bool {
        let dims: Vec<usize> = self.maximal_simplices().iter().map(|s| s.dim()).collect();
        dims.windows(2).all(|w| w[0] == w[1])
    }
}

/// Dimension of the smallest inclusion-maximal simplex; `-1` when empty.
pub fn complex_dimension(dc: &DualComplex) -> i64 {
    complex_dimension_with(dc, DimConvention::Smallest)
}

pub fn complex_dimension_with(dc: &DualComplex, convention: DimConvention) -> i64 {
    let dims = dc.maximal_simplices().into_iter().map(|s| s.dim() as i64);
    let d = match convention {
        DimConvention::Smallest => dims.min(),
        DimConvention::Largest => dims.max(),
    };
    d.unwrap_or(-1)
}

/// `(reg, coreg)` with `reg` the complex dimension and `coreg = dim X - reg - 1`.
pub fn regularity_coregularity(sb: &StratifiedBoundary) -> (i64, i64) {
    regularity_coregularity_with(sb, DimConvention::Smallest)
}

pub fn regularity_coregularity_with(sb: &StratifiedBoundary, convention: DimConvention) -> (i64, i64) {
    let reg = complex_dimension_with(&build_dual_complex(sb), convention);
    let coreg = sb.ambient_dim as i64 - reg - 1;
    assert_eq!(reg + coreg, sb.ambient_dim as i64 - 1);
    (reg, coreg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> StratifiedBoundary {
        s.parse().unwrap()
    }

    #[test]
    fn single_vertex() {
        let sb = parse("dim 4\ndivisors 1\n");
        let dc = build_dual_complex(&sb);
        assert_eq!(dc.vertex_count(), 1);
        assert_eq!(complex_dimension(&dc), 0);
        assert_eq!(regularity_coregularity(&sb), (0, 3));
    }

    #[test]
    fn parallel_edges() {
        let sb = parse("dim 2\ndivisors 2\nstratum 1,2 2\n");
        let dc = build_dual_complex(&sb);
        assert_eq!(dc.simplices().len(), 4);
        assert_eq!(dc.maximal_simplices().len(), 2);
        assert_eq!(complex_dimension(&dc), 1);
    }

    #[test]
    fn triangle_and_mixed() {
        let tri = parse("dim 3\ndivisors 3\nstratum 1,2 1\nstratum 1,3 1\nstratum 2,3 1\nstratum 1,2,3 1\n");
        assert_eq!(complex_dimension(&build_dual_complex(&tri)), 2);
        assert_eq!(regularity_coregularity(&tri), (2, 0));
        let mixed = parse("dim 3\ndivisors 3\nstratum 1,2 1 # an edge\n");
        let dc = build_dual_complex(&mixed);
        assert_eq!(complex_dimension(&dc), 0);
        assert_eq!(complex_dimension_with(&dc, DimConvention::Largest), 1);
        assert!(!dc.is_equidimensional());
    }

    #[test]
    fn empty_complex() {
        let sb = StratifiedBoundary::empty(2).unwrap();
        assert_eq!(regularity_coregularity(&sb), (-1, 2));
    }

    #[test]
    fn rejects_invalid_input() {
        assert!("dim 3\ndivisors 3\nstratum 1,2,3 1\n".parse::<StratifiedBoundary>().is_err());
        assert!("dim 1\ndivisors 2\nstratum 1,2 1\n".parse::<StratifiedBoundary>().is_err());
        assert!("dim 2\ndivisors 2\nstratum 1 2\n".parse::<StratifiedBoundary>().is_err());
        assert!("dim 2\ndivisors 2\nstratum 1,3 1\n".parse::<StratifiedBoundary>().is_err());
        assert!("dim 2\ndivisors 2\nstratum 0 1\n".parse::<StratifiedBoundary>().is_err());
        assert!("dim 2\nstratum 1 1\n".parse::<StratifiedBoundary>().is_err());
        assert!("dim 2\ndivisors 1\nbogus\n".parse::<StratifiedBoundary>().is_err());
    }

    #[test]
    fn relabel_preserves_dimension() {
        let sb = parse("dim 3\ndivisors 3\nstratum 1,2 1\n");
        let re = sb.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(re.count(&[2, 0]), 1);
        assert_eq!(regularity_coregularity(&sb), regularity_coregularity(&re));
        assert!(sb.relabel(&[0, 0, 1]).is_err());
    }
}
