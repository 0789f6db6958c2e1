//! Periodicity measures over transaction sequences and the breadth-first
//! miner for itemsets common to several sequences.
//!
//! The miner counts, for each candidate itemset, the sequences in which it
//! occurs in at least `min_sup` transactions; that count over the number of
//! sequences is the itemset's ratio. The ratio is anti-monotone, so the
//! search is a plain levelwise Apriori: level-1 tid-lists come from one
//! scan, and level `k+1` joins level-`k` itemsets sharing a `(k-1)`-prefix,
//! intersecting tid-lists sequence by sequence.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::levelwise::levelwise;
use crate::ingest::PeriodLabel;

/// An ordered list of transactions, each a set of period labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionSequence {
    pub sid: String,
    /// Each transaction sorted ascending without duplicates.
    pub transactions: Vec<Vec<PeriodLabel>>,
}

impl TransactionSequence {
    /// Normalizes every transaction to a sorted set.
    pub fn new(sid: impl Into<String>, transactions: Vec<Vec<PeriodLabel>>) -> Self {
        let transactions = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        TransactionSequence { sid: sid.into(), transactions }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }
}

fn canonical(x: &[PeriodLabel]) -> Vec<PeriodLabel> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    x
}

/// Both slices sorted ascending.
fn is_subset(x: &[PeriodLabel], transaction: &[PeriodLabel]) -> bool {
    let mut it = transaction.iter();
    x.iter().all(|label| it.by_ref().any(|t| t == label))
}

/// 1-based positions of the transactions containing `x`.
fn occurrences(x: &[PeriodLabel], s: &TransactionSequence) -> Vec<usize> {
    let x = canonical(x);
    s.transactions
        .iter()
        .enumerate()
        .filter(|(_, t)| is_subset(&x, t))
        .map(|(j, _)| j + 1)
        .collect()
}

/// Number of transactions of `s` containing every label of `x`.
pub fn support_in_sequence(x: &[PeriodLabel], s: &TransactionSequence) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::EmptyItemset);
    }
    Ok(occurrences(x, s).len())
}

/// Gaps between consecutive occurrences of `x`, with virtual occurrences at
/// position 0 and at `|s|`. The result has one more element than there are
/// occurrences and always sums to `|s|`.
pub fn periods(x: &[PeriodLabel], s: &TransactionSequence) -> Vec<usize> {
    let mut prev = 0usize;
    let mut out = Vec::new();
    for pos in occurrences(x, s) {
        out.push(pos - prev);
        prev = pos;
    }
    out.push(s.len() - prev);
    out
}

pub fn max_periodicity(x: &[PeriodLabel], s: &TransactionSequence) -> usize {
    periods(x, s).into_iter().max().unwrap_or(0)
}

/// Population standard deviation (divides by the count).
pub fn population_stddev(values: &[usize]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<usize>() as f64 / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}

pub fn stddev_periods(x: &[PeriodLabel], s: &TransactionSequence) -> f64 {
    population_stddev(&periods(x, s))
}

/// Fraction of sequences in which `x` occurs in at least `min_sup` transactions.
pub fn ratio_modified(x: &[PeriodLabel], sequences: &[TransactionSequence], min_sup: usize) -> f64 {
    if sequences.is_empty() {
        return 0.0;
    }
    let hits = sequences.iter().filter(|s| occurrences(x, s).len() >= min_sup).count();
    hits as f64 / sequences.len() as f64
}

/// The unmodified sequence periodic ratio, where a sequence must also stay
/// within the maximum-period and deviation bounds.
pub fn ratio_classic(
    x: &[PeriodLabel],
    sequences: &[TransactionSequence],
    min_sup: usize,
    max_pr: f64,
    max_std: f64,
) -> f64 {
    if sequences.is_empty() {
        return 0.0;
    }
    let hits = sequences
        .iter()
        .filter(|s| {
            let pr = periods(x, s);
            pr.len() > min_sup
                && pr.iter().copied().max().unwrap_or(0) as f64 <= max_pr
                && population_stddev(&pr) <= max_std
        })
        .count();
    hits as f64 / sequences.len() as f64
}

/// A frequent itemset with the sequences that support it.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPattern {
    pub itemset: Vec<PeriodLabel>,
    /// Indices of the sequences where the support reaches `min_sup`, ascending.
    pub cover: Vec<usize>,
    /// Support in each covered sequence, aligned with `cover`.
    pub supports: Vec<usize>,
    /// `|cover|` over the number of sequences.
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MineOptions {
    pub parallel: bool,
}

impl Default for MineOptions {
    fn default() -> Self {
        MineOptions { parallel: true }
    }
}

/// Smallest number of sequences `k` with `k / total >= min_ra`, tolerating
/// rounding in `min_ra` (so `1/|Γ|` computed in floating point admits one
/// sequence).
pub fn required_sequences(min_ra: f64, total: usize) -> usize {
    ((min_ra * total as f64 - 1e-9).ceil().max(1.0)) as usize
}

/// Word-aligned layout of one bitset segment per sequence, bit `j` of a
/// segment standing for the sequence's `j`-th transaction.
struct Layout {
    /// `(first word, word count)` per sequence.
    segments: Vec<(usize, usize)>,
    words: usize,
}

impl Layout {
    fn new(sequences: &[TransactionSequence]) -> Self {
        let mut segments = Vec::with_capacity(sequences.len());
        let mut words = 0;
        for seq in sequences {
            let w = seq.len().div_ceil(64);
            segments.push((words, w));
            words += w;
        }
        Layout { segments, words }
    }

    /// Clears the segments whose support is below `min_sup` and returns how
    /// many segments remain.
    fn restrict(&self, bits: &mut [u64], min_sup: usize) -> usize {
        let mut kept = 0;
        for &(start, w) in &self.segments {
            let segment = &mut bits[start..start + w];
            let count = popcount(segment);
            if count >= min_sup {
                kept += 1;
            } else if count > 0 {
                segment.fill(0);
            }
        }
        kept
    }

    fn pattern_for(&self, itemset: Vec<PeriodLabel>, bits: &[u64], total: usize) -> PeriodicPattern {
        let mut cover = Vec::with_capacity(self.segments.len());
        let mut supports = Vec::with_capacity(self.segments.len());
        for (s, &(start, w)) in self.segments.iter().enumerate() {
            let count = popcount(&bits[start..start + w]);
            if count > 0 {
                cover.push(s);
                supports.push(count);
            }
        }
        PeriodicPattern { itemset, ratio: cover.len() as f64 / total as f64, cover, supports }
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// All itemsets whose ratio (see [`ratio_modified`]) reaches `min_ra`,
/// ordered by size and then lexicographically by label.
pub fn mine(
    sequences: &[TransactionSequence],
    min_sup: usize,
    min_ra: f64,
    opts: &MineOptions,
) -> Result<Vec<PeriodicPattern>> {
    if min_sup == 0 {
        return Err(Error::Threshold("minSup must be at least 1".into()));
    }
    if !(min_ra > 0.0 && min_ra <= 1.0) {
        return Err(Error::Threshold(format!("minRa {min_ra} outside (0, 1]")));
    }
    let total = sequences.len();
    if total == 0 {
        return Ok(Vec::new());
    }
    let need = required_sequences(min_ra, total);

    let layout = Layout::new(sequences);

    // Tid-lists hold only sequences where the itemset's support already
    // reaches `min_sup`; supersets cannot recover elsewhere.
    let mut by_label: BTreeMap<PeriodLabel, Vec<u64>> = BTreeMap::new();
    for (seq, &(start, _)) in sequences.iter().zip(&layout.segments) {
        for (j, transaction) in seq.transactions.iter().enumerate() {
            for &label in transaction {
                let bits = by_label.entry(label).or_insert_with(|| vec![0; layout.words]);
                bits[start + j / 64] |= 1 << (j % 64);
            }
        }
    }
    let first: Vec<(Vec<PeriodLabel>, Vec<u64>)> = by_label
        .into_iter()
        .filter_map(|(label, mut bits)| (layout.restrict(&mut bits, min_sup) >= need).then(|| (vec![label], bits)))
        .collect();

    let found = levelwise(first, opts.parallel, |_, _| true, |a, b| {
        let mut bits: Vec<u64> = a.iter().zip(b).map(|(x, y)| x & y).collect();
        (layout.restrict(&mut bits, min_sup) >= need).then_some(bits)
    });
    let out = found.into_iter().map(|(itemset, bits)| layout.pattern_for(itemset, &bits, total)).collect();
    Ok(out)
}
