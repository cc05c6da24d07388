//! Command-line surface.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit code
//! together with the full text of both output streams, so the binary is a thin
//! printer and tests can call the same code path directly.
//!
//! Exit codes: 0 success, 1 not found (membership false, lemma violated),
//! 2 usage or domain error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dualcx::{regularity_coregularity_with, DimConvention, StratifiedBoundary};
use crate::error::{Error, Result};
use crate::lctsets::{
    accumulation_candidates, lct0_enumerate, lct0_enumerate_untruncated, lct1_enumerate, lct1_weighted, mem_lct0,
    mem_lct1, p1_oracle, verify_acc_above, Lct1Membership, Lct1Options, LctSet, PlatonicTriple,
};
use crate::rational::Rational;
use crate::setalg::{
    check_dd_monotone, check_ddi_lemma, d_d_set, d_d_witness, d_set, d_witness, finite_trace, mem_dd_of_d_set,
    plus_closure, plus_witness, CoeffSet, EnumBounds, LemmaReport,
};
use crate::toric::{toric_lct, toric_lct_oracle, ToricPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn not_found(stdout: String) -> Self {
        Output { code: 1, stdout, stderr: String::new() }
    }

    fn error(msg: impl std::fmt::Display) -> Self {
        let line = msg.to_string().lines().next().unwrap_or_default().to_string();
        Output { code: 2, stdout: String::new(), stderr: format!("error: {line}\n") }
    }
}

#[derive(Parser, Debug)]
#[command(name = "coreg", version, about = "Exact coefficient sets, log canonical thresholds of coregularity 0 and 1, dual complexes and toric thresholds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Sets {
    /// Coefficient set I, comma-separated rationals in [0, 1] (empty by default)
    #[arg(long = "I", default_value = "")]
    i: String,
    /// Coefficient set J, comma-separated nonnegative rationals
    #[arg(long = "J", default_value = "1")]
    j: String,
}

impl Sets {
    fn parse(&self) -> Result<(CoeffSet, CoeffSet)> {
        Ok((self.i.parse()?, self.j.parse()?))
    }
}

#[derive(Args, Debug)]
struct Bounds {
    /// Enumeration bounds `terms=T,index=M,value=V`
    #[arg(long, default_value = "terms=4,index=6")]
    bounds: String,
}

impl Bounds {
    fn parse(&self) -> Result<EnumBounds> {
        self.bounds.parse()
    }
}

#[derive(Args, Debug)]
struct Lct1Flags {
    /// Require every coefficient i_k + t j_k to be at most 1
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    cap_unit: Option<bool>,
    /// Drop the pqr-weighted tail terms and keep only the three slots
    #[arg(long)]
    three_term: bool,
}

impl Lct1Flags {
    fn options(&self, cap_default: bool) -> Lct1Options {
        Lct1Options { extra_terms: !self.three_term, cap_unit: self.cap_unit.unwrap_or(cap_default) }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive sums of elements of I lying in [0, 1], with 0 (the set I+)
    Plus {
        #[command(flatten)]
        sets: Sets,
        #[command(flatten)]
        bounds: Bounds,
        /// Append a decomposition into generators
        #[arg(long)]
        witness: bool,
    },
    /// Standard values (m - 1 + f)/m <= 1 with f in I+ (the set D(I))
    Dset {
        #[command(flatten)]
        sets: Sets,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        witness: bool,
    },
    /// Shifted values (m - 1 + f + k d)/m <= 1 with f in I+ (the set D_d(I))
    Ddset {
        #[command(flatten)]
        sets: Sets,
        /// Shift d in [0, 1]
        #[arg(long)]
        d: String,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        witness: bool,
    },
    /// Exact membership of a rational in one of the sets
    Mem {
        kind: MemKind,
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[command(flatten)]
        sets: Sets,
        /// Shift d for `ddset`
        #[arg(long)]
        d: Option<String>,
        /// Largest triple entry searched for `lct1`
        #[arg(long, default_value_t = 5)]
        triple_bound: u32,
        #[command(flatten)]
        flags: Lct1Flags,
    },
    /// Coregularity-zero thresholds (1 - i)/j, i in I+, j a positive combination of J
    Lct0 {
        #[command(flatten)]
        sets: Sets,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        witness: bool,
        /// Keep values below 1/V, where the enumeration is incomplete
        #[arg(long)]
        untruncated: bool,
    },
    /// Coregularity-one thresholds (qr + pr + pq - pqr - i)/j over triples with 1/p + 1/q + 1/r > 1
    Lct1 {
        #[command(flatten)]
        sets: Sets,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        flags: Lct1Flags,
        /// Restrict to one triple `p,q,r`
        #[arg(long)]
        triple: Option<String>,
    },
    /// Brute-force solutions of sum (N_k - 1 + i_k + t j_k)/N_k = degree on the projective line
    P1Oracle {
        #[command(flatten)]
        sets: Sets,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        witness: bool,
        /// Require every coefficient to be at most 1 (default true)
        #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
        cap_unit: Option<bool>,
    },
    /// All thresholds >= t of coregularity c, a finite list witnessing the ascending chain condition
    AccAbove {
        #[command(flatten)]
        sets: Sets,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        c: u8,
        #[arg(long)]
        t: String,
        #[arg(long)]
        witness: bool,
    },
    /// Limits of parametric families of thresholds, checked against coregularity c - 1
    Accum {
        #[command(flatten)]
        sets: Sets,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        c: u8,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        flags: Lct1Flags,
    },
    /// Regularity and coregularity dim X - dim D - 1 of a dual complex given by its strata
    Dualcx {
        file: String,
        /// Use the largest simplex instead of the smallest maximal one
        #[arg(long)]
        max_convention: bool,
    },
    /// Threshold min (1 - b_i)/c_i of a simplicial toric pair
    ToricLct {
        file: String,
        /// Also scan lattice points in the box of this radius
        #[arg(long, value_name = "RADIUS")]
        oracle: Option<u32>,
    },
    /// Check an identity of the coefficient calculus on bounded enumerations
    LemmaCheck {
        lemma: Lemma,
        #[command(flatten)]
        sets: Sets,
        /// Shift d for `dd-monotone`
        #[arg(long)]
        d: Option<String>,
        /// Target set for `finite-trace`
        #[arg(long, default_value = "1")]
        targets: String,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MemKind {
    Plus,
    Dset,
    Ddset,
    /// D(D(I))
    Dd,
    Lct0,
    Lct1,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Lemma {
    /// D(D(I)) = D(I) ∪ {1}
    Ddi,
    /// D_{d1}(I) ⊆ D_d(I) for d1 in D_d(I)
    DdMonotone,
    /// Elements of I whose standard values reach a target
    FiniteTrace,
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output::ok(e.to_string()),
                _ => Output { code: 2, stdout: String::new(), stderr: e.to_string() },
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(e) => Output::error(e),
    }
}

fn rational(s: &str) -> Result<Rational> {
    s.trim().parse()
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))
}

fn render_set(values: &CoeffSet, mut witness: impl FnMut(&Rational) -> Result<Option<String>>) -> Result<String> {
    let mut out = String::new();
    for v in values {
        match witness(v)? {
            Some(w) => writeln!(out, "{v}\t{w}").unwrap(),
            None => writeln!(out, "{v}").unwrap(),
        }
    }
    Ok(out)
}

fn render_lct(set: &LctSet, witness: bool) -> Output {
    Output::ok(set.render(witness))
}

fn render_report(report: &LemmaReport) -> Output {
    let mut out = format!("holds {}\tchecked {}\n", report.holds, report.checked);
    for c in &report.counterexamples {
        writeln!(out, "{c}").unwrap();
    }
    if report.holds {
        Output::ok(out)
    } else {
        Output::not_found(out)
    }
}

fn membership(found: Option<String>) -> Output {
    match found {
        Some(w) if w.is_empty() => Output::ok("true\n".into()),
        Some(w) => Output::ok(format!("true {w}\n")),
        None => Output::not_found("false\n".into()),
    }
}

fn execute(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Plus { sets, bounds, witness } => {
            let (i, _) = sets.parse()?;
            let values = plus_closure(&i, &bounds.parse()?);
            let out = render_set(&values, |v| {
                Ok(if witness { plus_witness(v, &i)?.map(|w| w.to_string()) } else { None })
            })?;
            Ok(Output::ok(out))
        }
        Command::Dset { sets, bounds, witness } => {
            let (i, _) = sets.parse()?;
            let values = d_set(&i, &bounds.parse()?);
            let out =
                render_set(&values, |v| Ok(if witness { d_witness(v, &i)?.map(|w| w.to_string()) } else { None }))?;
            Ok(Output::ok(out))
        }
        Command::Ddset { sets, d, bounds, witness } => {
            let (i, _) = sets.parse()?;
            let d = rational(&d)?;
            let values = d_d_set(&i, &d, &bounds.parse()?)?;
            let out = render_set(&values, |v| {
                Ok(if witness { d_d_witness(v, &i, &d)?.map(|w| w.to_string()) } else { None })
            })?;
            Ok(Output::ok(out))
        }
        Command::Mem { kind, value, sets, d, triple_bound, flags } => {
            let (i, j) = sets.parse()?;
            let a = rational(&value)?;
            Ok(match kind {
                MemKind::Plus => membership(plus_witness(&a, &i)?.map(|w| w.to_string())),
                MemKind::Dset => membership(d_witness(&a, &i)?.map(|w| w.to_string())),
                MemKind::Ddset => {
                    let d = rational(d.as_deref().ok_or_else(|| Error::Parse("ddset membership needs --d".into()))?)?;
                    membership(d_d_witness(&a, &i, &d)?.map(|w| w.to_string()))
                }
                MemKind::Dd => membership(mem_dd_of_d_set(&a, &i)?.then(String::new)),
                MemKind::Lct0 => membership(mem_lct0(&a, &i, &j)?.map(|v| v.witness.to_string())),
                MemKind::Lct1 => match mem_lct1(&a, &i, &j, triple_bound, flags.options(false))? {
                    Lct1Membership::Found(v) => Output::ok(format!("true {}\n", v.witness)),
                    Lct1Membership::NotFoundWithinBound { triple_bound } => {
                        Output::not_found(format!("not-found-within-bound {triple_bound}\n"))
                    }
                },
            })
        }
        Command::Lct0 { sets, bounds, witness, untruncated } => {
            let (i, j) = sets.parse()?;
            let b = bounds.parse()?;
            let set = if untruncated { lct0_enumerate_untruncated(&i, &j, &b)? } else { lct0_enumerate(&i, &j, &b)? };
            Ok(render_lct(&set, witness))
        }
        Command::Lct1 { sets, bounds, witness, flags, triple } => {
            let (i, j) = sets.parse()?;
            let b = bounds.parse()?;
            let opts = flags.options(false);
            let set = match triple {
                Some(t) => lct1_weighted(&parse_triple(&t)?, &i, &j, &b, opts)?,
                None => lct1_enumerate(&i, &j, &b, opts)?,
            };
            Ok(render_lct(&set, witness))
        }
        Command::P1Oracle { sets, degree, bounds, witness, cap_unit } => {
            let (i, j) = sets.parse()?;
            let set = p1_oracle(&i, &j, degree, &bounds.parse()?, cap_unit.unwrap_or(true))?;
            Ok(render_lct(&set, witness))
        }
        Command::AccAbove { sets, c, t, witness } => {
            let (i, j) = sets.parse()?;
            let w = verify_acc_above(&i, &j, c, &rational(&t)?)?;
            let mut out = w.values.render(witness);
            writeln!(out, "proof\t{}", w.proof).unwrap();
            Ok(Output::ok(out))
        }
        Command::Accum { sets, c, bounds, flags } => {
            let (i, j) = sets.parse()?;
            let rep = accumulation_candidates(&i, &j, c, &bounds.parse()?, flags.options(false))?;
            let mut out = String::new();
            for cand in &rep.candidates {
                writeln!(out, "{cand}").unwrap();
            }
            for v in &rep.violations {
                writeln!(out, "hypothesis-violation\t{v}").unwrap();
            }
            Ok(Output::ok(out))
        }
        Command::Dualcx { file, max_convention } => {
            let sb: StratifiedBoundary = read(&file)?.parse()?;
            let conv = if max_convention { DimConvention::Largest } else { DimConvention::Smallest };
            let (reg, coreg) = regularity_coregularity_with(&sb, conv);
            Ok(Output::ok(format!("reg {reg}, coreg {coreg}\n")))
        }
        Command::ToricLct { file, oracle } => {
            let tp: ToricPair = read(&file)?.parse()?;
            let mut out = format!("lct {}\n", toric_lct(&tp));
            if let Some(radius) = oracle {
                writeln!(out, "oracle {}", toric_lct_oracle(&tp, radius)?).unwrap();
            }
            Ok(Output::ok(out))
        }
        Command::LemmaCheck { lemma, sets, d, targets, bounds } => {
            let (i, _) = sets.parse()?;
            let b = bounds.parse()?;
            Ok(match lemma {
                Lemma::Ddi => render_report(&check_ddi_lemma(&i, &b)),
                Lemma::DdMonotone => {
                    let d = rational(d.as_deref().ok_or_else(|| Error::Parse("dd-monotone needs --d".into()))?)?;
                    render_report(&check_dd_monotone(&i, &d, &b)?)
                }
                Lemma::FiniteTrace => {
                    let entries = finite_trace(&i, &targets.parse()?, &b);
                    let mut out = String::new();
                    for e in &entries {
                        writeln!(out, "{e}").unwrap();
                    }
                    Output::ok(out)
                }
            })
        }
    }
}

fn parse_triple(s: &str) -> Result<PlatonicTriple> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|w| w.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad triple entry `{w}`"))))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [p, q, r] => PlatonicTriple::new(*p, *q, *r),
        _ => Err(Error::Parse(format!("a triple needs three entries, got `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Output {
        run(std::iter::once("coreg").chain(args.iter().copied()))
    }

    #[test]
    fn lct0_lines() {
        let out = call(&["lct0", "--I", "1/2", "--J", "1", "--bounds", "value=6"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "0\n1/6\n1/5\n1/4\n1/3\n1/2\n1\n");
    }

    #[test]
    fn membership_exit_codes() {
        let out = call(&["mem", "lct0", "1/2", "--I", "1/2", "--J", "1"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "true c0(i=1/2,j=1)\n"));
        let out = call(&["mem", "lct0", "2/3", "--I", "1/2", "--J", "1"]);
        assert_eq!((out.code, out.stdout.as_str()), (1, "false\n"));
        let out = call(&["mem", "lct1", "7", "--J", "1", "--triple-bound", "5"]);
        assert_eq!((out.code, out.stdout.as_str()), (1, "not-found-within-bound 5\n"));
    }

    #[test]
    fn errors_are_code_two() {
        assert_eq!(call(&["mem", "lct0", "-1/2", "--I", "1/2"]).code, 2);
        assert_eq!(call(&["lct0", "--I", "1/2", "--bounds", "terms=4"]).code, 2);
        assert_eq!(call(&["lct0", "--I", "x"]).code, 2);
        assert_eq!(call(&["lct0", "--frobnicate"]).code, 2);
        assert_eq!(call(&["nonsense"]).code, 2);
        let err = call(&["mem", "plus", "3/2", "--I", "1/2"]);
        assert_eq!(err.code, 2);
        assert_eq!(err.stderr.lines().count(), 1);
    }

    #[test]
    fn help_is_success() {
        let out = call(&["lct1", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("1/p + 1/q + 1/r > 1"));
    }
}
