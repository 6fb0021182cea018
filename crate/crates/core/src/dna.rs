//! Frequent-pattern probabilities for nucleotide sequences.
//!
//! A literal such as `ACCGT` is read as its run lengths `(1, 2, 1, 1)` over
//! the alphabet order `A ≺ C ≺ G ≺ T`, and the report gives the exact law of
//! the number of maximal-run occurrences in `n` i.i.d. letters. This is not a
//! substring count: `AACCGT` contains no `Exactly` occurrence of `ACCGT`.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::{pmf, PmfRow, PmfTable};
use crate::oracle::tokenize;
use crate::pattern::{RunMode, RunPattern};
use crate::polyalg::{exact_string, format_sci, Rational};

/// Ordered letters; letter `i` (0-based) is trial symbol `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetMap {
    letters: Vec<char>,
}

impl Default for AlphabetMap {
    fn default() -> Self {
        AlphabetMap { letters: "ACGT".chars().collect() }
    }
}

impl AlphabetMap {
    pub fn new(order: &str) -> Result<Self> {
        let letters: Vec<char> = order.trim().chars().map(|c| c.to_ascii_uppercase()).collect();
        if letters.len() < 2 {
            return Err(Error::Dna(format!("alphabet {order:?} needs at least two letters")));
        }
        for (i, c) in letters.iter().enumerate() {
            if !c.is_ascii_alphabetic() || letters[..i].contains(c) {
                return Err(Error::Dna(format!("alphabet {order:?} must be distinct letters")));
            }
        }
        Ok(AlphabetMap { letters })
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// 1-based trial symbol of a letter, case-insensitive.
    pub fn symbol(&self, c: char) -> Option<u32> {
        let c = c.to_ascii_uppercase();
        self.letters.iter().position(|&l| l == c).map(|i| i as u32 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastaRecord {
    pub header: String,
    pub sequence: String,
}

/// Parses FASTA. Sequence letters are upper-cased; whitespace is ignored.
/// Letters outside the alphabet are an error when `strict`, otherwise dropped.
pub fn read_fasta(reader: impl BufRead, alphabet: &AlphabetMap, strict: bool) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with(';') {
            continue;
        }
        if let Some(header) = text.strip_prefix('>') {
            records.push(FastaRecord { header: header.trim().to_string(), sequence: String::new() });
            continue;
        }
        let Some(rec) = records.last_mut() else {
            return Err(Error::Fasta { line: lineno, reason: "sequence data before the first '>' header".into() });
        };
        for c in text.chars().filter(|c| !c.is_whitespace()) {
            if alphabet.symbol(c).is_some() {
                rec.sequence.push(c.to_ascii_uppercase());
            } else if strict {
                return Err(Error::UnknownSymbol { symbol: c, line: lineno });
            }
        }
    }
    if records.is_empty() {
        return Err(Error::Fasta { line: 0, reason: "no records".into() });
    }
    Ok(records)
}

pub fn read_fasta_path(path: &Path, alphabet: &AlphabetMap, strict: bool) -> Result<Vec<FastaRecord>> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_fasta(BufReader::new(file), alphabet, strict)
}

/// Pooled letter frequencies `countᵢ / total`.
pub fn estimate_probs<S: AsRef<str>>(seqs: &[S], alphabet: &AlphabetMap) -> Result<Vec<Rational>> {
    let mut counts = vec![0u64; alphabet.len()];
    for seq in seqs {
        for c in seq.as_ref().chars() {
            match alphabet.symbol(c) {
                Some(s) => counts[s as usize - 1] += 1,
                None => return Err(Error::UnknownSymbol { symbol: c, line: 0 }),
            }
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Dna("no nucleotides to estimate frequencies from".into()));
    }
    Ok(counts.iter().map(|&c| Rational::new(BigInt::from(c), BigInt::from(total))).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiteralMode {
    Exactly,
    AtLeast,
    AtMost,
}

impl std::str::FromStr for LiteralMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "exactly" => Ok(LiteralMode::Exactly),
            "atleast" => Ok(LiteralMode::AtLeast),
            "atmost" => Ok(LiteralMode::AtMost),
            _ => Err(Error::Dna(format!("unknown mode {s:?} (exactly, at-least, at-most)"))),
        }
    }
}

/// Run lengths of a literal whose runs are the alphabet letters in order.
pub fn literal_run_lengths(literal: &str, alphabet: &AlphabetMap) -> Result<Vec<u32>> {
    let symbols = literal
        .trim()
        .chars()
        .map(|c| alphabet.symbol(c).ok_or(Error::UnknownSymbol { symbol: c, line: 0 }))
        .collect::<Result<Vec<u32>>>()?;
    let tokens = tokenize(&symbols, alphabet.len())?;
    let in_order = tokens.len() == alphabet.len() && tokens.iter().enumerate().all(|(i, t)| t.symbol as usize == i + 1);
    if !in_order {
        let order: String = alphabet.letters().iter().collect();
        return Err(Error::Dna(format!(
            "literal {literal:?} must consist of one run of each letter in the order {order}; \
             patterns follow the fixed symbol order, so pass --alphabet to reorder"
        )));
    }
    Ok(tokens.iter().map(|t| t.length as u32).collect())
}

pub fn compile_literal(
    literal: &str,
    mode: LiteralMode,
    alphabet: &AlphabetMap,
    probs: Vec<Rational>,
) -> Result<RunPattern> {
    let modes: Vec<RunMode> = literal_run_lengths(literal, alphabet)?
        .into_iter()
        .map(|k| match mode {
            LiteralMode::Exactly => RunMode::Exactly(k),
            LiteralMode::AtLeast => RunMode::AtLeast(k),
            LiteralMode::AtMost => RunMode::AtMost(k),
        })
        .collect();
    RunPattern::from_modes(&modes, probs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequentPatternReport {
    pub literal: String,
    pub pattern: RunPattern,
    pub min_support: usize,
    pub table: PmfTable,
    /// `P(X ≥ min_support)`
    pub tail: Rational,
}

impl FrequentPatternReport {
    pub fn view(&self, digits: usize) -> ReportView {
        ReportView {
            literal: self.literal.clone(),
            pattern: self.pattern.to_string(),
            n: self.table.n(),
            min_support: self.min_support,
            tail: format_sci(&self.tail, digits),
            tail_exact: exact_string(&self.tail),
            rows: self.table.rows(digits),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportView {
    pub literal: String,
    pub pattern: String,
    pub n: usize,
    pub min_support: usize,
    pub tail: String,
    pub tail_exact: String,
    pub rows: Vec<PmfRow>,
}

pub fn frequent_pattern_report(
    probs: Vec<Rational>,
    literal: &str,
    mode: LiteralMode,
    alphabet: &AlphabetMap,
    n: usize,
    min_support: usize,
) -> Result<FrequentPatternReport> {
    let pattern = compile_literal(literal, mode, alphabet, probs)?;
    let table = pmf(&pattern, n);
    let tail = if min_support == 0 { table.total() } else { table.tail(min_support) };
    Ok(FrequentPatternReport { literal: literal.trim().to_ascii_uppercase(), pattern, min_support, table, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{int, rat};

    fn acgt() -> AlphabetMap {
        AlphabetMap::default()
    }

    #[test]
    fn fasta_records() {
        let recs = read_fasta(">x\nACCGT\n".as_bytes(), &acgt(), true).unwrap();
        assert_eq!(recs, vec![FastaRecord { header: "x".into(), sequence: "ACCGT".into() }]);
        let recs = read_fasta(">a\nac\ncg\n\n>b desc\nTTA\n".as_bytes(), &acgt(), true).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].sequence, "ACCG");
        assert_eq!(recs[1].header, "b desc");
    }

    #[test]
    fn fasta_errors() {
        assert!(matches!(read_fasta("ACGT\n".as_bytes(), &acgt(), true), Err(Error::Fasta { line: 1, .. })));
        assert_eq!(
            read_fasta(">x\nACNGT\n".as_bytes(), &acgt(), true),
            Err(Error::UnknownSymbol { symbol: 'N', line: 2 })
        );
        let lenient = read_fasta(">x\nACNGT\n".as_bytes(), &acgt(), false).unwrap();
        assert_eq!(lenient[0].sequence, "ACGT");
    }

    #[test]
    fn frequencies() {
        assert_eq!(estimate_probs(&["ACCGT"], &acgt()).unwrap(), vec![rat(1, 5), rat(2, 5), rat(1, 5), rat(1, 5)]);
        assert_eq!(estimate_probs(&["AAAA"], &acgt()).unwrap(), vec![int(1), int(0), int(0), int(0)]);
        assert_eq!(estimate_probs(&["AC", "CGT"], &acgt()).unwrap(), estimate_probs(&["ACCGT"], &acgt()).unwrap());
        assert!(estimate_probs::<&str>(&[], &acgt()).is_err());
    }

    #[test]
    fn literal_compilation() {
        assert_eq!(literal_run_lengths("ACCGT", &acgt()).unwrap(), vec![1, 2, 1, 1]);
        assert_eq!(literal_run_lengths("accgggt", &acgt()).unwrap(), vec![1, 2, 3, 1]);
        assert!(literal_run_lengths("ACAC", &acgt()).is_err());
        assert!(literal_run_lengths("CAGT", &acgt()).is_err());
        let tgca = AlphabetMap::new("TGCA").unwrap();
        assert_eq!(literal_run_lengths("TTGCA", &tgca).unwrap(), vec![2, 1, 1, 1]);
    }

    #[test]
    fn short_windows_have_zero_tail() {
        let probs = vec![rat(1, 10), rat(3, 10), rat(1, 5), rat(2, 5)];
        let rep = frequent_pattern_report(probs, "ACCGT", LiteralMode::Exactly, &acgt(), 4, 1).unwrap();
        assert_eq!(rep.tail, int(0));
        assert_eq!(rep.view(6).tail, "0.00000e0");
    }
}
