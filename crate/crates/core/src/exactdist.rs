//! Exact distribution of the run count `X` in `n` trials.

use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::pattern::{DoubleGf, RunPattern};
use crate::polyalg::{exact_string, format_sci, Rational, WPoly};

/// `P(X = s)` for `s = 0..=⌊n/ℓ⌋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmfTable {
    n: usize,
    probs: Vec<Rational>,
}

impl PmfTable {
    pub fn from_probs(n: usize, probs: Vec<Rational>) -> Self {
        assert!(!probs.is_empty(), "a pmf table has at least the s = 0 entry");
        PmfTable { n, probs }
    }

    fn from_wpoly(n: usize, s_max: usize, phi: &WPoly) -> Self {
        let mut probs: Vec<Rational> = (0..=s_max).map(|s| phi.coeff(s)).collect();
        debug_assert!(phi.degree().is_none_or(|d| d <= s_max), "support exceeds n/ℓ");
        probs.truncate(s_max + 1);
        PmfTable { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn s_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn get(&self, s: usize) -> Rational {
        self.probs.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().sum()
    }

    /// `P(X ≥ s)`
    pub fn tail(&self, s: usize) -> Rational {
        self.probs.iter().skip(s).sum()
    }

    /// `P(X < s)`
    pub fn below(&self, s: usize) -> Rational {
        self.probs.iter().take(s).sum()
    }

    /// Entries up to the last nonzero one.
    pub fn trimmed(&self) -> &[Rational] {
        let end = self.probs.iter().rposition(|p| !p.is_zero()).map_or(1, |i| i + 1);
        &self.probs[..end]
    }

    /// `E[X^r]`
    pub fn moment(&self, r: u32) -> Rational {
        self.probs
            .iter()
            .enumerate()
            .map(|(s, p)| p * num_traits::pow(Rational::from_integer(s.into()), r as usize))
            .sum()
    }

    pub fn rows(&self, digits: usize) -> Vec<PmfRow> {
        self.trimmed().iter().enumerate().map(|(s, p)| PmfRow::new(self.n, s, p, digits)).collect()
    }
}

/// One output row.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PmfRow {
    pub n: usize,
    pub s: usize,
    pub probability: String,
    pub probability_exact: String,
}

impl PmfRow {
    pub fn new(n: usize, s: usize, p: &Rational, digits: usize) -> Self {
        PmfRow { n, s, probability: format_sci(p, digits), probability_exact: exact_string(p) }
    }
}

fn s_max(pat: &RunPattern, n: usize) -> usize {
    n / pat.min_len()
}

/// Pmf by coefficient extraction from the reduced `Φ(w, z)`.
pub fn pmf(pat: &RunPattern, n: usize) -> PmfTable {
    let coeffs = pat.double_gf().coefficients(n);
    PmfTable::from_wpoly(n, s_max(pat, n), &coeffs[n])
}

/// Pmf tables for every length `0..=n_max` from one extraction.
pub fn pmf_upto(pat: &RunPattern, n_max: usize) -> Vec<PmfTable> {
    pat.double_gf()
        .coefficients(n_max)
        .iter()
        .enumerate()
        .map(|(n, phi)| PmfTable::from_wpoly(n, s_max(pat, n), phi))
        .collect()
}

/// `Σⱼ qⱼ pₙ₋ⱼ(s) = [zⁿ]P·[s = 0] + Σⱼ rⱼ (pₙ₋ⱼ(s−1) − pₙ₋ⱼ(s))` over every
/// coefficient of `Q` and `R`.
fn full_recursion(gf: &DoubleGf, n_max: usize, s_cap: impl Fn(usize) -> usize) -> Vec<Vec<Rational>> {
    let (p, q, r) = (gf.p(), gf.q(), gf.r());
    let mut table: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let width = s_cap(n) + 1;
        // q₀ = 1, so row n is solved directly
        let mut row = vec![Rational::zero(); width];
        row[0] = p.coeff(n);
        for (j, qj) in q.coeffs().iter().enumerate().skip(1).take(n) {
            if qj.is_zero() {
                continue;
            }
            for (s, v) in table[n - j].iter().enumerate().take(width) {
                row[s] -= qj * v;
            }
        }
        for (j, rj) in r.coeffs().iter().enumerate().take(n + 1) {
            if rj.is_zero() {
                continue;
            }
            for (s, v) in table[n - j].iter().enumerate() {
                if s + 1 < width {
                    row[s + 1] += rj * v;
                }
                row[s] -= rj * v;
            }
        }
        table.push(row);
    }
    table
}

/// Pmf from the linear recursion induced by `Q − (w − 1) R`, using every
/// coefficient of `R`.
pub fn pmf_recursive(pat: &RunPattern, n: usize) -> PmfTable {
    let table = full_recursion(&pat.double_gf(), n, |t| s_max(pat, t));
    PmfTable { n, probs: table.into_iter().nth(n).expect("row n exists") }
}

/// The two-term recursion that keeps only the `∏pᵢ^{ℓᵢ}` and
/// `∏pᵢ^{kᵢ+1}` terms of `R`, with initial rows `P(X = 0) = 1` for `n < ℓ`.
///
/// Exact when every `kᵢ` is unbounded. With two or more bounded symbols the
/// cross terms of `R` are lost and the result is wrong; kept as a regression
/// target.
pub fn pmf_two_term(pat: &RunPattern, n: usize) -> PmfTable {
    let gf = pat.double_gf();
    let ell = pat.min_len();
    let lead: Rational =
        pat.probs().iter().zip(pat.bounds()).map(|(p, b)| num_traits::pow(p.clone(), b.lower as usize)).product();
    let upper = pat.max_len().map(|k| {
        let c: Rational = pat
            .probs()
            .iter()
            .zip(pat.bounds())
            .map(|(p, b)| num_traits::pow(p.clone(), b.upper.bounded().expect("bounded") as usize + 1))
            .product();
        (k + pat.m(), c)
    });
    let q = gf.q();
    let mut table: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    for t in 0..=n {
        let width = s_max(pat, t) + 1;
        let mut row = vec![Rational::zero(); width];
        if t < ell {
            row[0] = Rational::one();
            table.push(row);
            continue;
        }
        for (j, qj) in q.coeffs().iter().enumerate().skip(1) {
            if j > t {
                break;
            }
            for (s, v) in table[t - j].iter().enumerate().take(width) {
                row[s] -= qj * v;
            }
        }
        let mut shift = |lag: usize, c: &Rational, sign: i32| {
            if lag > t {
                return;
            }
            for (s, v) in table[t - lag].iter().enumerate() {
                let term = c * v;
                if sign > 0 {
                    if s + 1 < width {
                        row[s + 1] += &term;
                    }
                    row[s] -= term;
                } else {
                    if s + 1 < width {
                        row[s + 1] -= &term;
                    }
                    row[s] += term;
                }
            }
        };
        shift(ell, &lead, 1);
        if let Some((lag, c)) = &upper {
            shift(*lag, c, -1);
        }
        table.push(row);
    }
    PmfTable { n, probs: table.into_iter().nth(n).expect("row n exists") }
}

/// `E[X^r]` from the exact pmf.
pub fn moment(pat: &RunPattern, n: usize, r: u32) -> Rational {
    pmf(pat, n).moment(r)
}

/// `μ_{t,i} = E[X_t^i]` for `t ≤ n`, `i ≤ r`, from
/// `Σⱼ qⱼ μ_{t−j,i} = [zᵗ]P·[i = 0] + Σⱼ rⱼ Σ_{h<i} C(i,h) μ_{t−j,h}`.
pub fn moments_recursive(pat: &RunPattern, n: usize, r: u32) -> Vec<Vec<Rational>> {
    let gf = pat.double_gf();
    let (p, q, rr) = (gf.p(), gf.q(), gf.r());
    let r = r as usize;
    let mut mu: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    for t in 0..=n {
        let mut row = vec![Rational::zero(); r + 1];
        row[0] = p.coeff(t);
        for i in 0..=r {
            for (j, qj) in q.coeffs().iter().enumerate().skip(1).take(t) {
                row[i] -= qj * &mu[t - j][i];
            }
            for (j, rj) in rr.coeffs().iter().enumerate().take(t + 1).skip(1) {
                if rj.is_zero() {
                    continue;
                }
                for (h, prev) in mu[t - j][..i].iter().enumerate() {
                    let c = Rational::from_integer(binomial(i, h).into());
                    row[i] += rj * c * prev;
                }
            }
        }
        mu.push(row);
    }
    mu
}

/// Coefficients `α₀ … α_{m−2}` of `∏_{i=2}^{m−1} (1 − pᵢz)`.
pub fn alpha_coeffs(pat: &RunPattern) -> Vec<Rational> {
    let gf = pat.double_gf();
    (0..=pat.m() - 2).map(|j| gf.p().coeff(j)).collect()
}
