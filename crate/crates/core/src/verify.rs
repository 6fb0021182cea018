//! Cross-module identity suite over a grid of patterns.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::{pmf_recursive, pmf_upto};
use crate::oracle::exact_pmf_bruteforce;
use crate::par;
use crate::pattern::{RunPattern, SymbolBound, Upper};
use crate::polyalg::{rat, Poly, RatFun, Rational};
use crate::transfer::{chained_double_gf, right_end_chain};
use crate::waiting::{psi, psi_from_phi, survival_checks};

/// Every bound with `1 ≤ ℓ ≤ k ≤ 3` or `k = ∞`.
pub fn small_bounds() -> Vec<SymbolBound> {
    let mut out = Vec::new();
    for lower in 1..=3 {
        for k in lower..=3 {
            out.push(SymbolBound { lower, upper: Upper::Bounded(k) });
        }
        out.push(SymbolBound { lower, upper: Upper::Unbounded });
    }
    out
}

/// Two-symbol grid: all pairs of [`small_bounds`] under three probability
/// vectors.
pub fn m2_grid() -> Vec<RunPattern> {
    let probs = [(1, 2), (1, 4), (1, 10)];
    let bounds = small_bounds();
    let mut out = Vec::new();
    for &(a, b) in &probs {
        for b1 in &bounds {
            for b2 in &bounds {
                let p = vec![rat(a, b), Rational::one() - rat(a, b)];
                out.push(RunPattern::new(vec![*b1, *b2], p).expect("grid pattern is valid"));
            }
        }
    }
    out
}

/// Three-symbol grid mixing the four bound shapes.
pub fn m3_grid() -> Vec<RunPattern> {
    let shapes = [
        SymbolBound { lower: 1, upper: Upper::Unbounded },
        SymbolBound { lower: 1, upper: Upper::Bounded(1) },
        SymbolBound { lower: 1, upper: Upper::Bounded(2) },
        SymbolBound { lower: 2, upper: Upper::Bounded(3) },
    ];
    let probs = [vec![rat(1, 3), rat(1, 3), rat(1, 3)], vec![rat(1, 5), rat(3, 10), rat(1, 2)]];
    let mut out = Vec::new();
    for p in &probs {
        for a in &shapes {
            for b in &shapes {
                for c in &shapes {
                    out.push(RunPattern::new(vec![*a, *b, *c], p.clone()).expect("grid pattern is valid"));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    Small,
    Full,
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            _ => Err(Error::Cli(format!("unknown grid {s:?} (small, full)"))),
        }
    }
}

struct Limits {
    n2: usize,
    n3: usize,
    survival_n: usize,
    every: usize,
}

impl Grid {
    fn limits(self) -> Limits {
        match self {
            Grid::Small => Limits { n2: 10, n3: 6, survival_n: 12, every: 7 },
            Grid::Full => Limits { n2: 14, n3: 9, survival_n: 20, every: 1 },
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases", self.name, self.cases)?;
        if !self.passed() {
            write!(f, ", {} failed; first: {}", self.failures.len(), self.failures[0])?;
        }
        f.write_str(")")
    }
}

fn run_check<T: Sync>(name: &str, items: &[T], f: impl Fn(&T) -> Vec<String> + Sync + Send) -> CheckResult {
    let failures = par::map(items, f).into_iter().flatten().collect();
    CheckResult { name: name.into(), cases: items.len(), failures }
}

fn oracle_failures(pat: &RunPattern, n_max: usize) -> Vec<String> {
    let tables = pmf_upto(pat, n_max);
    let mut out = Vec::new();
    for (n, table) in tables.iter().enumerate() {
        match exact_pmf_bruteforce(pat, n) {
            Ok(brute) if &brute == table => {}
            Ok(_) => out.push(format!("{pat} n={n}: series and enumeration differ")),
            Err(e) => out.push(format!("{pat} n={n}: {e}")),
        }
    }
    out
}

/// Brute-force enumeration against series extraction.
pub fn check_oracle_m2(n_max: usize, every: usize) -> CheckResult {
    let grid: Vec<RunPattern> = m2_grid().into_iter().step_by(every).collect();
    run_check("series = enumeration (m=2)", &grid, |p| oracle_failures(p, n_max))
}

pub fn check_oracle_m3(n_max: usize, every: usize) -> CheckResult {
    let grid: Vec<RunPattern> = m3_grid().into_iter().step_by(every).collect();
    run_check("series = enumeration (m=3)", &grid, |p| oracle_failures(p, n_max))
}

pub fn check_recursion(patterns: &[RunPattern], n_max: usize) -> CheckResult {
    run_check("series = full recursion", patterns, |pat| {
        let tables = pmf_upto(pat, n_max);
        let rec = pmf_recursive(pat, n_max);
        if rec == tables[n_max] {
            vec![]
        } else {
            vec![format!("{pat} n={n_max}")]
        }
    })
}

/// Block-system solutions against the closed forms.
pub fn check_transfer(patterns: &[RunPattern]) -> CheckResult {
    run_check("block systems = closed forms", patterns, |pat| {
        let mut out = Vec::new();
        match chained_double_gf(pat) {
            Ok(g) if g == pat.double_gf().phi() => {}
            Ok(_) => out.push(format!("{pat}: Φ differs")),
            Err(e) => out.push(format!("{pat}: {e}")),
        }
        if pat.m() >= 3 {
            match right_end_chain(pat, pat.m()) {
                Ok(chain) => {
                    for (k, (y, n)) in (2..).zip(&chain) {
                        let (ye, ne) = pat.right_end_gfs_prefix(k).expect("k in range");
                        if y != &ye || n != &ne {
                            out.push(format!("{pat}: Y_{k}/N_{k} differ"));
                        }
                    }
                }
                Err(e) => out.push(format!("{pat}: {e}")),
            }
        }
        out
    })
}

pub fn check_counting_disabled(patterns: &[RunPattern]) -> CheckResult {
    let geometric = RatFun::new(Poly::one(), Poly::one_minus(Rational::one())).expect("nonzero");
    run_check("Φ(1, z) = 1/(1 − z)", patterns, |pat| match pat.double_gf().at_w(&Rational::one()) {
        Ok(f) if f == geometric => vec![],
        _ => vec![pat.to_string()],
    })
}

pub fn check_waiting(patterns: &[RunPattern], r_max: u32, n_max: usize) -> CheckResult {
    run_check("waiting-time identities", patterns, |pat| {
        let mut out = Vec::new();
        let Ok(psi1) = psi(pat, 1) else {
            return vec![format!("{pat}: unrealizable")];
        };
        if psi_from_phi(pat).ok().as_ref() != Some(psi1.pgf()) {
            out.push(format!("{pat}: ψ₁ ≠ 1 − (1 − z)Φ(0, z)"));
        }
        if psi1.pgf().eval(&Rational::one()).ok() != Some(Rational::one()) {
            out.push(format!("{pat}: ψ₁(1) ≠ 1"));
        }
        for r in 1..=r_max {
            let pr = psi(pat, r).expect("realizable");
            if pr.pgf() != &psi1.pgf().pow(r) {
                out.push(format!("{pat}: ψ_{r} ≠ ψ₁^{r}"));
            }
            match survival_checks(pat, r, n_max) {
                Ok(checks) => {
                    if let Some(n) = checks.iter().position(|c| !c.equal) {
                        out.push(format!("{pat}: survival r={r} n={n}"));
                    }
                }
                Err(e) => out.push(format!("{pat}: {e}")),
            }
            let h = pr.pmf(n_max);
            let below = (r as usize * pat.min_len()).min(n_max + 1);
            if h[..below].iter().any(|v| !v.is_zero()) {
                out.push(format!("{pat}: h_{r} nonzero below rℓ"));
            }
        }
        out
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub grid: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

pub fn run(grid: Grid) -> VerifyReport {
    let lim = grid.limits();
    let m2: Vec<RunPattern> = m2_grid().into_iter().step_by(lim.every).collect();
    let m3: Vec<RunPattern> = m3_grid().into_iter().step_by(lim.every).collect();
    let mixed: Vec<RunPattern> = m2.iter().chain(&m3).cloned().collect();
    let checks = vec![
        check_oracle_m2(lim.n2, lim.every),
        check_oracle_m3(lim.n3, lim.every),
        check_recursion(&mixed, 30),
        check_transfer(&mixed),
        check_counting_disabled(&mixed),
        check_waiting(&mixed, 3, lim.survival_n),
    ];
    VerifyReport { grid: format!("{grid:?}").to_lowercase(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(small_bounds().len(), 9);
        assert_eq!(m2_grid().len(), 243);
        assert_eq!(m3_grid().len(), 128);
    }

    #[test]
    fn display_reports_failures() {
        let ok = CheckResult { name: "x".into(), cases: 3, failures: vec![] };
        assert_eq!(ok.to_string(), "PASS x (3 cases)");
        let bad = CheckResult { name: "x".into(), cases: 3, failures: vec!["a".into(), "b".into()] };
        assert_eq!(bad.to_string(), "FAIL x (3 cases, 2 failed; first: a)");
    }
}
