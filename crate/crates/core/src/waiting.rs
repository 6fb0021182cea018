//! Waiting time `T_r` until the `r`-th occurrence.
//!
//! `ψ₁(z) = R/(Q + R)` and `ψ_r = ψ₁^r`; equivalently `P(T_r > n) = P(X_n < r)`.
//! When the last symbol's run length is bounded, an occurrence counted at
//! time `n` can be undone by a longer final run, so the law here is the one
//! fixed by that survival identity rather than a pathwise first passage.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::{pmf, pmf_upto};
use crate::pattern::RunPattern;
use crate::polyalg::{exact_string, format_sci, Poly, RatFun, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct WaitingPgf {
    r: u32,
    psi: RatFun<Rational>,
}

impl WaitingPgf {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn pgf(&self) -> &RatFun<Rational> {
        &self.psi
    }

    /// `h_r(0) … h_r(horizon)`
    pub fn pmf(&self, horizon: usize) -> Vec<Rational> {
        self.psi.series(horizon).expect("den(0) = 1")
    }

    pub fn mean(&self) -> Rational {
        self.psi.derivative().eval(&Rational::one()).expect("no pole at 1 for realizable patterns")
    }

    pub fn variance(&self) -> Rational {
        let mean = self.mean();
        let second =
            self.psi.derivative().derivative().eval(&Rational::one()).expect("no pole at 1 for realizable patterns");
        second + &mean - &mean * &mean
    }

    /// Smallest horizon whose cumulative mass reaches `1 − tolerance`.
    pub fn horizon_for(&self, tolerance: &Rational, max: usize) -> Result<usize> {
        let target = Rational::one() - tolerance;
        let mut len = 64.min(max.max(1));
        loop {
            let h = self.pmf(len);
            let mut acc = Rational::zero();
            for (s, v) in h.iter().enumerate() {
                acc += v;
                if acc >= target {
                    return Ok(s);
                }
            }
            if len >= max {
                return Err(Error::HorizonExceeded { tolerance: tolerance.to_string(), max });
            }
            len = (len * 2).min(max);
        }
    }

    pub fn table(&self, horizon: usize, digits: usize) -> WaitingTable {
        let h = self.pmf(horizon);
        let mut cumulative = Rational::zero();
        let rows = h
            .iter()
            .enumerate()
            .map(|(s, p)| {
                cumulative += p;
                WaitingRow {
                    s,
                    probability: format_sci(p, digits),
                    probability_exact: exact_string(p),
                    cumulative: format_sci(&cumulative, digits),
                }
            })
            .collect();
        let (mean, variance) = (self.mean(), self.variance());
        WaitingTable {
            r: self.r,
            horizon,
            mass: format_sci(&cumulative, digits),
            mean: format_sci(&mean, digits),
            mean_exact: exact_string(&mean),
            variance: format_sci(&variance, digits),
            variance_exact: exact_string(&variance),
            rows,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WaitingRow {
    pub s: usize,
    pub probability: String,
    pub probability_exact: String,
    pub cumulative: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WaitingTable {
    pub r: u32,
    pub horizon: usize,
    pub mass: String,
    pub mean: String,
    pub mean_exact: String,
    pub variance: String,
    pub variance_exact: String,
    pub rows: Vec<WaitingRow>,
}

fn check(pat: &RunPattern, r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidPattern("occurrence index r must be at least 1".into()));
    }
    if pat.run_product().eval(&Rational::one()).is_zero() {
        return Err(Error::Unrealizable);
    }
    Ok(())
}

/// `ψ_r(z) = R(z)^r / (Q(z) + R(z))^r`, reduced.
pub fn psi(pat: &RunPattern, r: u32) -> Result<WaitingPgf> {
    check(pat, r)?;
    let gf = pat.double_gf();
    let base = gf.q() + gf.r();
    let (mut num, mut den) = (Poly::one(), Poly::one());
    for _ in 0..r {
        num = &num * gf.r();
        den = &den * &base;
    }
    Ok(WaitingPgf { r, psi: RatFun::new(num, den)? })
}

/// `1 − (1 − z) Φ(0, z)`
pub fn psi_from_phi(pat: &RunPattern) -> Result<RatFun<Rational>> {
    let phi0 = pat.double_gf().at_w(&Rational::zero())?;
    let one_minus_z = RatFun::from_poly(Poly::one_minus(Rational::one()));
    Ok(&RatFun::one() - &(&one_minus_z * &phi0))
}

pub fn waiting_pmf(pat: &RunPattern, r: u32, horizon: usize) -> Result<Vec<Rational>> {
    Ok(psi(pat, r)?.pmf(horizon))
}

/// `h_0 … h_r` over `0..=horizon` from `(Q + R)·H_i = R·H_{i−1}`, `H_0 = 1`.
pub fn waiting_pmf_recursive(pat: &RunPattern, r: u32, horizon: usize) -> Result<Vec<Vec<Rational>>> {
    check(pat, r)?;
    let gf = pat.double_gf();
    let base = gf.q() + gf.r();
    let rp = gf.r();
    let mut all = Vec::with_capacity(r as usize + 1);
    let mut h0 = vec![Rational::zero(); horizon + 1];
    h0[0] = Rational::one();
    all.push(h0);
    for i in 1..=r as usize {
        let prev = &all[i - 1];
        let mut h = vec![Rational::zero(); horizon + 1];
        for s in 0..=horizon {
            let mut acc = Rational::zero();
            for (j, c) in rp.coeffs().iter().enumerate().take(s + 1) {
                if !c.is_zero() {
                    acc += c * &prev[s - j];
                }
            }
            for (j, c) in base.coeffs().iter().enumerate().take(s + 1).skip(1) {
                if !c.is_zero() {
                    acc -= c * &h[s - j];
                }
            }
            h[s] = acc;
        }
        all.push(h);
    }
    Ok(all)
}

/// Exact `(E[T_r], Var[T_r])`.
pub fn waiting_moments(pat: &RunPattern, r: u32) -> Result<(Rational, Rational)> {
    let w = psi(pat, r)?;
    Ok((w.mean(), w.variance()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurvivalCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

/// `P(T_r > n)` from the waiting pmf against `P(X_n < r)` from the count pmf.
pub fn survival_check(pat: &RunPattern, r: u32, n: usize) -> Result<SurvivalCheck> {
    let h = waiting_pmf(pat, r, n)?;
    let lhs = Rational::one() - h.iter().sum::<Rational>();
    let rhs = pmf(pat, n).below(r as usize);
    let equal = lhs == rhs;
    Ok(SurvivalCheck { lhs, rhs, equal })
}

/// [`survival_check`] for every `n ≤ n_max`, extracting each series once.
pub fn survival_checks(pat: &RunPattern, r: u32, n_max: usize) -> Result<Vec<SurvivalCheck>> {
    let h = waiting_pmf(pat, r, n_max)?;
    let tables = pmf_upto(pat, n_max);
    let mut mass = Rational::zero();
    Ok(h.iter()
        .zip(&tables)
        .map(|(hs, table)| {
            mass += hs;
            let lhs = Rational::one() - &mass;
            let rhs = table.below(r as usize);
            let equal = lhs == rhs;
            SurvivalCheck { lhs, rhs, equal }
        })
        .collect())
}
