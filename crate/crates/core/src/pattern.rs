//! Unified run patterns and their closed-form generating functions.
//!
//! A pattern over symbols `1 ≺ 2 ≺ … ≺ m` asks for a maximal run of 1's of
//! length in `[ℓ₁, k₁]`, immediately followed by a maximal run of 2's of
//! length in `[ℓ₂, k₂]`, and so on up to symbol `m`. Runs touching either end
//! of the sequence count as maximal.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{Poly, RatFun, Rational, WPoly};

/// Upper bound `kᵢ` of a run length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Upper {
    Bounded(u32),
    Unbounded,
}

impl Upper {
    pub fn admits(self, len: u32) -> bool {
        match self {
            Upper::Bounded(k) => len <= k,
            Upper::Unbounded => true,
        }
    }

    pub fn bounded(self) -> Option<u32> {
        match self {
            Upper::Bounded(k) => Some(k),
            Upper::Unbounded => None,
        }
    }
}

impl fmt::Display for Upper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Upper::Bounded(k) => write!(f, "{k}"),
            Upper::Unbounded => f.write_str("inf"),
        }
    }
}

/// Admissible run lengths `[lower, upper]` for one symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolBound {
    pub lower: u32,
    pub upper: Upper,
}

impl SymbolBound {
    pub fn new(lower: u32, upper: Upper) -> Result<Self> {
        if lower == 0 {
            return Err(Error::InvalidPattern("run lower bound must be at least 1".into()));
        }
        if let Upper::Bounded(k) = upper {
            if k < lower {
                return Err(Error::InvalidPattern(format!("upper bound {k} is below lower bound {lower}")));
            }
        }
        Ok(SymbolBound { lower, upper })
    }

    pub fn admits(&self, len: u32) -> bool {
        len >= self.lower && self.upper.admits(len)
    }
}

/// Per-symbol run constraint in the at-least / exactly / at-most vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RunMode {
    AtLeast(u32),
    Exactly(u32),
    AtMost(u32),
    Between(u32, u32),
}

impl RunMode {
    pub fn bound(self) -> Result<SymbolBound> {
        match self {
            RunMode::AtLeast(l) => SymbolBound::new(l, Upper::Unbounded),
            RunMode::Exactly(k) => SymbolBound::new(k, Upper::Bounded(k)),
            RunMode::AtMost(k) => SymbolBound::new(1, Upper::Bounded(k)),
            RunMode::Between(l, k) => SymbolBound::new(l, Upper::Bounded(k)),
        }
    }
}

/// The three block generating functions of one symbol:
/// short runs (`< ℓᵢ`), long runs (`> kᵢ`) and admissible runs.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockGfs {
    pub short: RatFun<Rational>,
    pub long: RatFun<Rational>,
    pub within: RatFun<Rational>,
}

/// Parses the pattern mini-language: comma-separated `i:ℓ..k` items with
/// `i = 1, 2, …` in order and `k` either a number or `inf`.
///
/// ```
/// use runlaw::pattern::{parse_bounds, Upper};
/// let b = parse_bounds("1:2..3,2:1..inf").unwrap();
/// assert_eq!(b[1].upper, Upper::Unbounded);
/// ```
pub fn parse_bounds(text: &str) -> Result<Vec<SymbolBound>> {
    let bad = |item: &str, why: &str| Error::InvalidPattern(format!("item {item:?}: {why}"));
    let mut out = Vec::new();
    for (pos, item) in text.split(',').map(str::trim).enumerate() {
        let (sym, range) = item.split_once(':').ok_or_else(|| bad(item, "expected i:l..k"))?;
        let sym: usize = sym.trim().parse().map_err(|_| bad(item, "symbol must be a positive integer"))?;
        if sym != pos + 1 {
            return Err(bad(item, &format!("symbols must be listed as 1, 2, … in order; expected {}", pos + 1)));
        }
        let (lo, hi) = range.split_once("..").ok_or_else(|| bad(item, "expected l..k"))?;
        let lower: u32 = lo.trim().parse().map_err(|_| bad(item, "lower bound must be a positive integer"))?;
        let upper = match hi.trim() {
            "inf" | "Inf" | "INF" | "∞" => Upper::Unbounded,
            k => Upper::Bounded(k.parse().map_err(|_| bad(item, "upper bound must be an integer or inf"))?),
        };
        out.push(SymbolBound::new(lower, upper)?);
    }
    if out.len() < 2 {
        return Err(Error::InvalidPattern("a pattern needs at least two symbols".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunPattern {
    bounds: Vec<SymbolBound>,
    probs: Vec<Rational>,
}

impl RunPattern {
    pub fn new(bounds: Vec<SymbolBound>, probs: Vec<Rational>) -> Result<Self> {
        if bounds.len() < 2 {
            return Err(Error::InvalidPattern(format!("a pattern needs at least 2 symbols, got {}", bounds.len())));
        }
        if bounds.len() != probs.len() {
            return Err(Error::InvalidPattern(format!("{} bounds but {} probabilities", bounds.len(), probs.len())));
        }
        for b in &bounds {
            SymbolBound::new(b.lower, b.upper)?;
        }
        if let Some(p) = probs.iter().find(|p| **p < Rational::zero()) {
            return Err(Error::InvalidPattern(format!("negative probability {p}")));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::ProbabilitySum(total.to_string()));
        }
        for (i, p) in probs.iter().enumerate() {
            if p.is_zero() {
                log::warn!("symbol {} has probability 0; the pattern never occurs", i + 1);
            }
        }
        Ok(RunPattern { bounds, probs })
    }

    pub fn from_modes(modes: &[RunMode], probs: Vec<Rational>) -> Result<Self> {
        let bounds = modes.iter().map(|m| m.bound()).collect::<Result<Vec<_>>>()?;
        Self::new(bounds, probs)
    }

    /// Same bounds, different symbol probabilities.
    pub fn with_probs(&self, probs: Vec<Rational>) -> Result<Self> {
        Self::new(self.bounds.clone(), probs)
    }

    pub fn m(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[SymbolBound] {
        &self.bounds
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// `ℓ = Σ ℓᵢ`, the shortest possible occurrence.
    pub fn min_len(&self) -> usize {
        self.bounds.iter().map(|b| b.lower as usize).sum()
    }

    /// `k = Σ kᵢ` when every symbol is bounded.
    pub fn max_len(&self) -> Option<usize> {
        self.bounds.iter().map(|b| b.upper.bounded().map(|k| k as usize)).sum()
    }

    pub fn bounded_count(&self) -> usize {
        self.bounds.iter().filter(|b| b.upper != Upper::Unbounded).count()
    }

    /// Whether an occurrence has positive probability.
    pub fn is_realizable(&self) -> bool {
        self.probs.iter().all(|p| !p.is_zero())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.m() {
            Err(Error::SymbolIndex { index: i, m: self.m() })
        } else {
            Ok(())
        }
    }

    /// `(pᵢz)^e`
    fn power_term(&self, i: usize, e: u32) -> Poly<Rational> {
        let p = &self.probs[i - 1];
        Poly::monomial(num_traits::pow(p.clone(), e as usize), e as usize)
    }

    /// `rᵢ(z) = (pᵢz)^{ℓᵢ} − (pᵢz)^{kᵢ+1}`, the second term absent when `kᵢ` is unbounded.
    pub fn run_factor(&self, i: usize) -> Result<Poly<Rational>> {
        self.check_index(i)?;
        let b = self.bounds[i - 1];
        let lower = self.power_term(i, b.lower);
        Ok(match b.upper {
            Upper::Bounded(k) => &lower - &self.power_term(i, k + 1),
            Upper::Unbounded => lower,
        })
    }

    /// `R(z) = ∏ rᵢ(z)`
    pub fn run_product(&self) -> Poly<Rational> {
        (1..=self.m()).fold(Poly::one(), |acc, i| &acc * &self.run_factor(i).expect("in range"))
    }

    /// `∏_{i=from}^{to} (1 − pᵢz)`, empty product 1.
    fn one_minus_product(&self, from: usize, to: usize) -> Poly<Rational> {
        (from..=to).fold(Poly::one(), |acc, i| &acc * &Poly::one_minus(self.probs[i - 1].clone()))
    }

    pub fn block_gfs(&self, i: usize) -> Result<BlockGfs> {
        self.check_index(i)?;
        let b = self.bounds[i - 1];
        let den = Poly::one_minus(self.probs[i - 1].clone());
        let single = self.power_term(i, 1);
        let at_lower = self.power_term(i, b.lower);
        let above = match b.upper {
            Upper::Bounded(k) => self.power_term(i, k + 1),
            Upper::Unbounded => Poly::zero(),
        };
        Ok(BlockGfs {
            short: RatFun::new(&single - &at_lower, den.clone())?,
            long: RatFun::new(above.clone(), den.clone())?,
            within: RatFun::new(&at_lower - &above, den)?,
        })
    }

    /// The polynomials `P`, `Q`, `R` of the double generating function.
    pub fn double_gf(&self) -> DoubleGf {
        let p = self.one_minus_product(2, self.m() - 1);
        let q = &p * &Poly::one_minus(Rational::one());
        DoubleGf { p, q, r: self.run_product() }
    }

    /// Right-end generating functions `(Y, N)` over all `m` symbols.
    pub fn right_end_gfs(&self) -> (RatFun<Rational>, RatFun<Rational>) {
        self.right_end_gfs_prefix(self.m()).expect("m is a valid prefix")
    }

    /// `(Y_k, N_k)` for the sub-pattern on symbols `1..=k` with the original
    /// (unnormalised) probabilities `p₁…p_k`.
    ///
    /// `Y_k` counts nonempty sequences over `1..=k` that end with the
    /// sub-pattern; `N_k` the remaining nonempty sequences.
    pub fn right_end_gfs_prefix(&self, k: usize) -> Result<(RatFun<Rational>, RatFun<Rational>)> {
        if k < 2 || k > self.m() {
            return Err(Error::SymbolIndex { index: k, m: self.m() });
        }
        let total: Rational = self.probs[..k].iter().sum();
        let free_den = Poly::one_minus(total.clone());
        let runs = (1..=k).fold(Poly::one(), |acc, i| &acc * &self.run_factor(i).expect("in range"));
        let y = RatFun::new(runs, &free_den * &self.one_minus_product(2, k))?;
        let all = RatFun::new(Poly::monomial(total, 1), free_den)?;
        let n = &all - &y;
        Ok((y, n))
    }
}

impl fmt::Display for RunPattern {
    /// The CLI mini-language form, e.g. `1:1..1,2:2..2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.bounds.iter().enumerate().map(|(i, b)| format!("{}:{}..{}", i + 1, b.lower, b.upper)).collect();
        f.write_str(&parts.join(","))
    }
}

/// `Φ(w, z) = P(z) / (Q(z) − (w − 1) R(z))` with `Q = (1 − z) P`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleGf {
    p: Poly<Rational>,
    q: Poly<Rational>,
    r: Poly<Rational>,
}

impl DoubleGf {
    pub fn p(&self) -> &Poly<Rational> {
        &self.p
    }

    pub fn q(&self) -> &Poly<Rational> {
        &self.q
    }

    pub fn r(&self) -> &Poly<Rational> {
        &self.r
    }

    /// `Q(z) − (w − 1) R(z)` as a polynomial in `z` over `ℚ[w]`.
    pub fn denominator(&self) -> Poly<WPoly> {
        let len = self.q.coeffs().len().max(self.r.coeffs().len());
        Poly::new(
            (0..len)
                .map(|j| {
                    let (q, r) = (self.q.coeff(j), self.r.coeff(j));
                    // q − (w − 1) r = (q + r) − r w
                    Poly::new(vec![&q + &r, -r])
                })
                .collect(),
        )
    }

    pub fn phi(&self) -> RatFun<WPoly> {
        RatFun::new(self.p.map_coeffs(|c| WPoly::constant(c.clone())), self.denominator())
            .expect("denominator has constant term 1")
    }

    /// `Φ(w₀, z)` as a univariate rational function.
    pub fn at_w(&self, w: &Rational) -> Result<RatFun<Rational>> {
        let wm1 = w - Rational::one();
        RatFun::new(self.p.clone(), &self.q - &self.r.scale_by(&wm1))
    }

    /// `φ₀(w) … φ_{n_max}(w)`: the run-count pgf for each sequence length.
    pub fn coefficients(&self, n_max: usize) -> Vec<WPoly> {
        self.phi().series(n_max).expect("Q(0) = 1")
    }
}

/// Closed form for a pattern given per-symbol modes.
pub fn phi_special(modes: &[RunMode], probs: Vec<Rational>) -> Result<DoubleGf> {
    Ok(RunPattern::from_modes(modes, probs)?.double_gf())
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::polyalg::{int, rat, rat_equal};

    fn half() -> Vec<Rational> {
        vec![rat(1, 2), rat(1, 2)]
    }

    fn dna() -> Vec<Rational> {
        vec![rat(1, 10), rat(3, 10), rat(1, 5), rat(2, 5)]
    }

    #[test]
    fn parse_round_trip() {
        let b = parse_bounds("1:1..1, 2:2..2,3:1..1,4:1..inf").unwrap();
        let pat = RunPattern::new(b, vec![rat(1, 10), rat(3, 10), rat(1, 5), rat(2, 5)]).unwrap();
        assert_eq!(pat.to_string(), "1:1..1,2:2..2,3:1..1,4:1..inf");
        assert_eq!(parse_bounds(&pat.to_string()).unwrap(), pat.bounds());
        for bad in ["1:1..1", "2:1..1,1:1..1", "1:0..1,2:1..1", "1:3..2,2:1..1", "1:1-2,2:1..1", "x"] {
            assert!(parse_bounds(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn mode_mapping() {
        let pat = RunPattern::from_modes(
            &[RunMode::Exactly(1), RunMode::Exactly(2), RunMode::Exactly(1), RunMode::Exactly(1)],
            dna(),
        )
        .unwrap();
        let got: Vec<(u32, Upper)> = pat.bounds().iter().map(|b| (b.lower, b.upper)).collect();
        assert_eq!(
            got,
            vec![(1, Upper::Bounded(1)), (2, Upper::Bounded(2)), (1, Upper::Bounded(1)), (1, Upper::Bounded(1))]
        );
        assert_eq!(RunMode::AtLeast(3).bound().unwrap().upper, Upper::Unbounded);
        assert_eq!(RunMode::AtMost(3).bound().unwrap(), SymbolBound { lower: 1, upper: Upper::Bounded(3) });
        assert_eq!(RunMode::Between(2, 5).bound().unwrap(), SymbolBound { lower: 2, upper: Upper::Bounded(5) });
    }

    #[test]
    fn validation_errors() {
        assert!(RunMode::Between(3, 2).bound().is_err());
        assert!(RunMode::AtLeast(0).bound().is_err());
        let b = RunMode::AtLeast(1).bound().unwrap();
        assert!(matches!(RunPattern::new(vec![b, b], vec![rat(1, 2), rat(1, 3)]), Err(Error::ProbabilitySum(_))));
        assert!(RunPattern::new(vec![b], vec![int(1)]).is_err());
        assert!(RunPattern::new(vec![b, b], vec![int(1)]).is_err());
        assert!(RunPattern::new(vec![b, b], vec![rat(3, 2), rat(-1, 2)]).is_err());
        // zero probabilities are allowed
        assert!(RunPattern::new(vec![b, b], vec![int(1), int(0)]).is_ok());
    }

    #[test]
    fn block_gfs_edge_cases() {
        let pat = RunPattern::from_modes(&[RunMode::AtLeast(1), RunMode::Between(2, 3)], half()).unwrap();
        let g1 = pat.block_gfs(1).unwrap();
        assert!(g1.short.is_zero());
        assert!(g1.long.is_zero());
        // (z/2)/(1 - z/2)
        let geometric =
            RatFun::new(Poly::from_rationals([int(0), rat(1, 2)]), Poly::from_rationals([int(1), rat(-1, 2)])).unwrap();
        assert_eq!(g1.within, geometric);
        let g2 = pat.block_gfs(2).unwrap();
        assert_eq!(g2.within, RatFun::from_poly(Poly::from_rationals([int(0), int(0), rat(1, 4), rat(1, 8)])));
        assert!(matches!(pat.block_gfs(3), Err(Error::SymbolIndex { .. })));
        assert!(pat.block_gfs(0).is_err());
    }

    #[test]
    fn block_identity_sums_to_geometric() {
        let pat =
            RunPattern::from_modes(&[RunMode::Between(2, 4), RunMode::Exactly(3)], vec![rat(1, 3), rat(2, 3)]).unwrap();
        for i in 1..=2 {
            let g = pat.block_gfs(i).unwrap();
            let sum = &(&g.short + &g.long) + &g.within;
            let p = pat.probs()[i - 1].clone();
            let expect = RatFun::new(Poly::monomial(p.clone(), 1), Poly::one_minus(p)).unwrap();
            assert_eq!(sum, expect);
        }
    }

    #[test]
    fn two_symbol_core_polys() {
        let pat =
            RunPattern::from_modes(&[RunMode::Between(1, 2), RunMode::Exactly(2)], vec![rat(1, 4), rat(3, 4)]).unwrap();
        let d = pat.double_gf();
        assert_eq!(d.p(), &Poly::one());
        assert_eq!(d.q(), &Poly::one_minus(int(1)));
        assert_eq!(d.r(), &(&pat.run_factor(1).unwrap() * &pat.run_factor(2).unwrap()));
    }

    #[test]
    fn dna_core_polys() {
        let pat = RunPattern::from_modes(
            &[RunMode::Exactly(1), RunMode::Exactly(2), RunMode::Exactly(1), RunMode::Exactly(1)],
            dna(),
        )
        .unwrap();
        let d = pat.double_gf();
        let p = dna();
        // ∏ (pᵢz)^{kᵢ}(1 − pᵢz)
        let mut r = Poly::one();
        for (pi, ki) in p.iter().zip([1u32, 2, 1, 1]) {
            r = &r * &Poly::monomial(num_traits::pow(pi.clone(), ki as usize), ki as usize);
            r = &r * &Poly::one_minus(pi.clone());
        }
        assert_eq!(d.r(), &r);
        assert_eq!(d.p(), &(&Poly::one_minus(rat(3, 10)) * &Poly::one_minus(rat(1, 5))));
    }

    #[test]
    fn right_end_gf_values() {
        let pat = RunPattern::from_modes(&[RunMode::AtLeast(1), RunMode::AtLeast(1)], half()).unwrap();
        let (y, n) = pat.right_end_gfs();
        let ys = y.series(3).unwrap();
        assert_eq!(ys[3], rat(3, 8));
        assert_eq!(ys[2], rat(1, 4));
        let all = RatFun::new(Poly::x(), Poly::one_minus(int(1))).unwrap();
        assert_eq!(&y + &n, all);
    }

    #[test]
    fn shortest_occurrence_coefficient() {
        let pat = RunPattern::from_modes(
            &[RunMode::Between(2, 3), RunMode::Exactly(1), RunMode::AtLeast(2)],
            vec![rat(1, 5), rat(3, 10), rat(1, 2)],
        )
        .unwrap();
        let (y, _) = pat.right_end_gfs();
        let l = pat.min_len();
        let c = y.series(l).unwrap();
        assert!(c[..l].iter().all(|x| x.is_zero()));
        assert_eq!(c[l], rat(1, 25) * rat(3, 10) * rat(1, 4));
    }

    #[test]
    fn phi_collapses_at_w_one() {
        let pat = RunPattern::from_modes(
            &[RunMode::AtMost(2), RunMode::Exactly(1), RunMode::Between(1, 3)],
            vec![rat(1, 5), rat(3, 10), rat(1, 2)],
        )
        .unwrap();
        let at1 = pat.double_gf().at_w(&int(1)).unwrap();
        assert_eq!(at1, RatFun::new(Poly::one(), Poly::one_minus(int(1))).unwrap());
        let phi = pat.double_gf().phi();
        assert!(rat_equal(&phi.at_w(&int(1)).unwrap(), &at1));
    }

    #[test]
    fn below_min_len_no_occurrence() {
        let pat =
            RunPattern::from_modes(&[RunMode::Exactly(2), RunMode::AtLeast(2)], vec![rat(1, 3), rat(2, 3)]).unwrap();
        let c = pat.double_gf().coefficients(3);
        assert!(c.iter().all(|p| *p == WPoly::one()));
    }

    #[test]
    fn display_round_trip_form() {
        let pat = RunPattern::from_modes(&[RunMode::Between(2, 3), RunMode::AtLeast(1)], half()).unwrap();
        assert_eq!(pat.to_string(), "1:2..3,2:1..inf");
    }

    #[test]
    fn special_case_denominators() {
        // exactly case, m = 2: 1 − z − (w−1)(1−p₁z)(1−p₂z)(p₁z)^{k₁}(p₂z)^{k₂}
        let (p1, p2) = (rat(1, 4), rat(3, 4));
        let d = phi_special(&[RunMode::Exactly(2), RunMode::Exactly(1)], vec![p1.clone(), p2.clone()]).unwrap();
        let expect = &(&(&Poly::one_minus(p1.clone()) * &Poly::one_minus(p2.clone())) * &Poly::monomial(&p1 * &p1, 2))
            * &Poly::monomial(p2.clone(), 1);
        assert_eq!(d.r(), &expect);
        // at most, m = 2: (p₁z)(p₂z)(1 − (p₁z)^{k₁})(1 − (p₂z)^{k₂})
        let d = phi_special(&[RunMode::AtMost(2), RunMode::AtMost(3)], vec![p1.clone(), p2.clone()]).unwrap();
        let t1 = &Poly::one() - &Poly::monomial(&p1 * &p1, 2);
        let t2 = &Poly::one() - &Poly::monomial(&p2 * &p2 * &p2, 3);
        let expect = &(&(&Poly::monomial(p1.clone(), 1) * &Poly::monomial(p2.clone(), 1)) * &t1) * &t2;
        assert_eq!(d.r(), &expect);
    }

    #[test]
    fn run_factor_sign_pattern() {
        let pat =
            RunPattern::from_modes(&[RunMode::Between(2, 4), RunMode::AtLeast(3)], vec![rat(1, 3), rat(2, 3)]).unwrap();
        let signs = |p: &Poly<Rational>| -> (usize, usize) {
            let pos = p.coeffs().iter().filter(|c| **c > Rational::zero()).count();
            let neg = p.coeffs().iter().filter(|c| **c < Rational::zero()).count();
            (pos, neg)
        };
        assert_eq!(signs(&pat.run_factor(1).unwrap()), (1, 1));
        assert_eq!(signs(&pat.run_factor(2).unwrap()), (1, 0));
    }
}
