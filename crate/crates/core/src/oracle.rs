//! Ground truth: maximal-run tokenizer, occurrence counting, exhaustive
//! enumeration and seeded simulation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::PmfTable;
use crate::pattern::RunPattern;
use crate::polyalg::Rational;

/// Identifier stored with simulation output.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-shard";

/// Default enumeration budget: `2^24` sequences.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

const SHARD_SIZE: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunToken {
    pub symbol: u32,
    pub length: usize,
}

fn check_symbols(seq: &[u32], m: usize) -> Result<()> {
    match seq.iter().find(|&&s| s == 0 || s as usize > m) {
        Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, m }),
        None => Ok(()),
    }
}

/// Maximal-run decomposition of a sequence over `1..=m`.
pub fn tokenize(seq: &[u32], m: usize) -> Result<Vec<RunToken>> {
    check_symbols(seq, m)?;
    let mut out: Vec<RunToken> = Vec::new();
    for &s in seq {
        match out.last_mut() {
            Some(t) if t.symbol == s => t.length += 1,
            _ => out.push(RunToken { symbol: s, length: 1 }),
        }
    }
    Ok(out)
}

/// Inverse of [`tokenize`].
pub fn concatenate(tokens: &[RunToken]) -> Vec<u32> {
    tokens.iter().flat_map(|t| std::iter::repeat_n(t.symbol, t.length)).collect()
}

fn window_matches(pat: &RunPattern, window: &[RunToken]) -> bool {
    window
        .iter()
        .zip(pat.bounds())
        .enumerate()
        .all(|(j, (t, b))| t.symbol as usize == j + 1 && b.admits(t.length as u32))
}

/// Windows of `m` consecutive tokens matching the pattern.
pub fn count_tokens(pat: &RunPattern, tokens: &[RunToken]) -> usize {
    tokens.windows(pat.m()).filter(|w| window_matches(pat, w)).count()
}

pub fn count_occurrences(pat: &RunPattern, seq: &[u32]) -> Result<usize> {
    Ok(count_tokens(pat, &tokenize(seq, pat.m())?))
}

/// Occurrence counter fed one symbol at a time.
///
/// [`current`](Self::current) is the count for the prefix seen so far, with
/// the last run treated as maximal.
#[derive(Clone, Debug)]
pub struct StreamCounter<'a> {
    pat: &'a RunPattern,
    recent: Vec<RunToken>,
    closed: usize,
}

impl<'a> StreamCounter<'a> {
    pub fn new(pat: &'a RunPattern) -> Self {
        StreamCounter { pat, recent: Vec::with_capacity(pat.m() + 1), closed: 0 }
    }

    pub fn reset(&mut self) {
        self.recent.clear();
        self.closed = 0;
    }

    fn last_window_matches(&self) -> bool {
        let m = self.pat.m();
        self.recent.len() >= m && window_matches(self.pat, &self.recent[self.recent.len() - m..])
    }

    pub fn push(&mut self, symbol: u32) {
        match self.recent.last_mut() {
            Some(t) if t.symbol == symbol => t.length += 1,
            _ => {
                if self.last_window_matches() {
                    self.closed += 1;
                }
                if self.recent.len() == self.pat.m() {
                    self.recent.remove(0);
                }
                self.recent.push(RunToken { symbol, length: 1 });
            }
        }
    }

    pub fn current(&self) -> usize {
        self.closed + usize::from(self.last_window_matches())
    }
}

/// Exhaustive pmf over all `mⁿ` sequences with the default budget.
pub fn exact_pmf_bruteforce(pat: &RunPattern, n: usize) -> Result<PmfTable> {
    exact_pmf_bruteforce_with_budget(pat, n, DEFAULT_BUDGET)
}

/// Sequences are visited in base-`m` counter order; each contributes to a
/// bucket keyed by its symbol counts and occurrence count, and bucket
/// weights `∏ pᵢ^{cᵢ}` are applied once at the end.
pub fn exact_pmf_bruteforce_with_budget(pat: &RunPattern, n: usize, budget: u128) -> Result<PmfTable> {
    let m = pat.m();
    let states = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if states > budget {
        return Err(Error::BudgetExceeded { states, budget });
    }
    let s_max = n / pat.min_len();
    let mut buckets: HashMap<(Vec<u16>, usize), u64> = HashMap::new();
    let mut digits = vec![1u32; n];
    let mut counts = vec![0u16; m];
    counts[0] = n as u16;
    loop {
        let x = count_occurrences(pat, &digits)?;
        if x > s_max {
            return Err(Error::Oracle(format!("{x} occurrences exceed n/ℓ = {s_max}")));
        }
        *buckets.entry((counts.clone(), x)).or_insert(0) += 1;
        // increment the base-m counter, least significant digit last
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(PmfTable::from_probs(n, collapse(pat, &buckets, s_max)));
            }
            pos -= 1;
            let d = digits[pos] as usize;
            counts[d - 1] -= 1;
            if d < m {
                digits[pos] += 1;
                counts[d] += 1;
                break;
            }
            digits[pos] = 1;
            counts[0] += 1;
        }
    }
}

fn collapse(pat: &RunPattern, buckets: &HashMap<(Vec<u16>, usize), u64>, s_max: usize) -> Vec<Rational> {
    let mut probs = vec![Rational::zero(); s_max + 1];
    for ((counts, x), &mult) in buckets {
        let weight: Rational =
            pat.probs().iter().zip(counts).map(|(p, &c)| num_traits::pow(p.clone(), c as usize)).product();
        probs[*x] += weight * Rational::from_integer(BigInt::from(mult));
    }
    probs
}

/// Draws symbols by comparing a uniform `u64` with `⌊F(i)·2⁶⁴⌋`, where `F`
/// is the exact cumulative distribution.
#[derive(Clone, Debug)]
pub struct SymbolSampler {
    thresholds: Vec<u64>,
}

impl SymbolSampler {
    pub fn new(probs: &[Rational]) -> Self {
        let scale = Rational::from_integer(BigInt::one() << 64);
        let mut cum = Rational::zero();
        let mut thresholds = Vec::with_capacity(probs.len());
        for p in &probs[..probs.len() - 1] {
            cum += p;
            let t = (&cum * &scale).floor().to_integer();
            thresholds.push(t.to_u64().unwrap_or(u64::MAX));
        }
        SymbolSampler { thresholds }
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> u32 {
        let u = rng.next_u64();
        self.thresholds.iter().position(|&t| u < t).unwrap_or(self.thresholds.len()) as u32 + 1
    }
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Runs `body` on each shard of `samples` and merges results in shard order.
fn sharded<T: Send>(samples: u64, body: impl Fn(u64, u64) -> T + Sync + Send) -> Vec<T> {
    let shards: Vec<u64> = (0..samples.div_ceil(SHARD_SIZE)).collect();
    crate::par::map(&shards, |&i| body(i, SHARD_SIZE.min(samples - i * SHARD_SIZE)))
}

fn merge_histograms(parts: Vec<Vec<u64>>) -> Vec<u64> {
    let len = parts.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![0u64; len];
    for part in parts {
        for (o, c) in out.iter_mut().zip(part) {
            *o += c;
        }
    }
    out
}

/// Standard error `√(p̂(1−p̂)/N)` of an empirical frequency.
pub fn standard_error(p_hat: f64, samples: u64) -> f64 {
    (p_hat * (1.0 - p_hat) / samples as f64).sqrt()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SimulationReport {
    pub algorithm: &'static str,
    pub seed: u64,
    pub samples: u64,
    pub n: usize,
    pub counts: Vec<u64>,
    pub pmf: Vec<f64>,
    pub standard_errors: Vec<f64>,
}

impl SimulationReport {
    /// `½ Σ |p̂(s) − p(s)|`
    pub fn total_variation(&self, exact: &PmfTable) -> f64 {
        let len = self.pmf.len().max(exact.probs().len());
        0.5 * (0..len)
            .map(|s| {
                let e = crate::polyalg::to_f64(&exact.get(s));
                (self.pmf.get(s).copied().unwrap_or(0.0) - e).abs()
            })
            .sum::<f64>()
    }

    pub fn total_standard_error(&self) -> f64 {
        self.standard_errors.iter().sum()
    }
}

/// Empirical pmf of the count over `samples` sequences of length `n`.
pub fn simulate(pat: &RunPattern, n: usize, samples: u64, seed: u64) -> Result<SimulationReport> {
    if samples == 0 {
        return Err(Error::Oracle("samples must be at least 1".into()));
    }
    let sampler = SymbolSampler::new(pat.probs());
    let parts = sharded(samples, |shard, len| {
        let mut rng = shard_rng(seed, shard);
        let mut hist = vec![0u64; n / pat.min_len() + 1];
        let mut counter = StreamCounter::new(pat);
        for _ in 0..len {
            counter.reset();
            for _ in 0..n {
                counter.push(sampler.sample(&mut rng));
            }
            hist[counter.current()] += 1;
        }
        hist
    });
    let counts = merge_histograms(parts);
    let pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let standard_errors = pmf.iter().map(|&p| standard_error(p, samples)).collect();
    Ok(SimulationReport { algorithm: RNG_ALGORITHM, seed, samples, n, counts, pmf, standard_errors })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct WaitingSimulationReport {
    pub algorithm: &'static str,
    pub seed: u64,
    pub samples: u64,
    pub r: u32,
    pub max_len: usize,
    /// `counts[t]`: samples whose `r`-th occurrence completed at trial `t`.
    pub counts: Vec<u64>,
    /// Samples still waiting after `max_len` trials.
    pub censored: u64,
    pub pmf: Vec<f64>,
    pub mean: f64,
    pub mean_standard_error: f64,
}

/// Empirical law of the first trial `t` at which the running count of the
/// prefix of length `t` reaches `r`.
pub fn simulate_waiting(
    pat: &RunPattern,
    r: u32,
    samples: u64,
    seed: u64,
    max_len: usize,
) -> Result<WaitingSimulationReport> {
    if samples == 0 || r == 0 {
        return Err(Error::Oracle("samples and r must be at least 1".into()));
    }
    let sampler = SymbolSampler::new(pat.probs());
    let parts = sharded(samples, |shard, len| {
        let mut rng = shard_rng(seed, shard);
        let mut hist = vec![0u64; max_len + 2];
        let mut counter = StreamCounter::new(pat);
        for _ in 0..len {
            counter.reset();
            let mut hit = max_len + 1;
            for t in 1..=max_len {
                counter.push(sampler.sample(&mut rng));
                if counter.current() >= r as usize {
                    hit = t;
                    break;
                }
            }
            hist[hit] += 1;
        }
        hist
    });
    let mut counts = merge_histograms(parts);
    let censored = counts.pop().unwrap_or(0);
    let done = (samples - censored).max(1) as f64;
    let pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let mean = counts.iter().enumerate().map(|(t, &c)| t as f64 * c as f64).sum::<f64>() / done;
    let second = counts.iter().enumerate().map(|(t, &c)| (t * t) as f64 * c as f64).sum::<f64>() / done;
    let mean_standard_error = ((second - mean * mean).max(0.0) / done).sqrt();
    Ok(WaitingSimulationReport {
        algorithm: RNG_ALGORITHM,
        seed,
        samples,
        r,
        max_len,
        counts,
        censored,
        pmf,
        mean,
        mean_standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::RunMode;
    use crate::polyalg::{int, rat};

    fn fair(modes: [RunMode; 2]) -> RunPattern {
        RunPattern::from_modes(&modes, vec![rat(1, 2), rat(1, 2)]).unwrap()
    }

    fn tok(symbol: u32, length: usize) -> RunToken {
        RunToken { symbol, length }
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize(&[1, 1, 2], 2).unwrap(), vec![tok(1, 2), tok(2, 1)]);
        assert_eq!(tokenize(&[1, 2, 1, 2], 2).unwrap(), vec![tok(1, 1), tok(2, 1), tok(1, 1), tok(2, 1)]);
        assert!(tokenize(&[], 2).unwrap().is_empty());
        assert_eq!(tokenize(&[1, 3], 2), Err(Error::SymbolOutOfRange { symbol: 3, m: 2 }));
        assert_eq!(concatenate(&[tok(2, 3), tok(1, 1)]), vec![2, 2, 2, 1]);
    }

    #[test]
    fn count_examples() {
        let at_least = fair([RunMode::AtLeast(1), RunMode::AtLeast(1)]);
        let exactly = fair([RunMode::Exactly(1), RunMode::Exactly(1)]);
        assert_eq!(count_occurrences(&at_least, &[1, 2, 1, 2]).unwrap(), 2);
        assert_eq!(count_occurrences(&exactly, &[1, 1, 2]).unwrap(), 0);
        assert_eq!(count_occurrences(&at_least, &[2, 1]).unwrap(), 0);
    }

    #[test]
    fn stream_counter_tracks_prefixes() {
        let pat = fair([RunMode::Exactly(1), RunMode::Between(1, 2)]);
        let seq = [2, 1, 2, 2, 2, 1, 2, 1, 1, 2, 2];
        let mut c = StreamCounter::new(&pat);
        for t in 0..seq.len() {
            c.push(seq[t]);
            assert_eq!(c.current(), count_occurrences(&pat, &seq[..=t]).unwrap(), "prefix {t}");
        }
    }

    #[test]
    fn brute_force_small() {
        let pat = fair([RunMode::AtLeast(1), RunMode::AtLeast(1)]);
        assert_eq!(exact_pmf_bruteforce(&pat, 3).unwrap().probs(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(exact_pmf_bruteforce(&pat, 0).unwrap().probs(), &[int(1)]);
        assert!(matches!(
            exact_pmf_bruteforce_with_budget(&pat, 10, 1000),
            Err(Error::BudgetExceeded { states: 1024, budget: 1000 })
        ));
    }

    #[test]
    fn sampler_respects_zero_mass() {
        let s = SymbolSampler::new(&[int(0), rat(1, 2), rat(1, 2)]);
        let mut rng = shard_rng(7, 0);
        assert!((0..1000).all(|_| s.sample(&mut rng) != 1));
    }

    #[test]
    fn simulation_is_deterministic() {
        let pat = fair([RunMode::AtLeast(1), RunMode::AtLeast(1)]);
        let a = simulate(&pat, 3, 100_000, 11).unwrap();
        let b = simulate(&pat, 3, 100_000, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>(), 100_000);
        let c = simulate(&pat, 3, 100_000, 12).unwrap();
        assert_ne!(a.counts, c.counts);
    }
}
