//! End-to-end seasonal gradual pattern mining.
//!
//! The database is turned into its run database, the label sets recurring
//! in at least `minSup` runs of at least one gradual item are mined, and each
//! mined label set `X` yields one pattern: the items whose run sequences
//! support `X` often enough, with `X` as their season.

use std::collections::HashSet;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gradual::{build_gamma, GammaDatabase, GradualItem, TransformOptions};
use crate::ingest::{PeriodLabel, TemporalSequenceDatabase};
use crate::periodic::{mine, support_in_sequence, MineOptions, PeriodicPattern};

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalGradualPattern {
    /// Gradual items in [`GradualItem::all`] order.
    pub items: Vec<GradualItem>,
    /// Period labels, ascending.
    pub season: Vec<PeriodLabel>,
    /// Smallest per-item support divided by the number of cycles. A season
    /// recurring both inside cycles and across a cycle boundary can push
    /// this above 1.
    pub support: f64,
    /// Run count containing the season, per item, aligned with `items`.
    pub per_item_support: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MsgpOptions {
    pub transform: TransformOptions,
    /// Absolute per-sequence support, overriding `ceil(theta·m)`.
    pub min_sup_abs: Option<usize>,
    /// Keep only seasons that are cyclically contiguous label intervals.
    pub contiguous_only: bool,
    /// Report every season rather than only those maximal for their item-set.
    pub all_seasons: bool,
    pub min_items: usize,
    /// Drop a pattern whose item-set is a proper subset of an item-set already
    /// reported, scanning larger item-sets first.
    pub prune_subsumed: bool,
}

impl Default for MsgpOptions {
    fn default() -> Self {
        MsgpOptions {
            transform: TransformOptions::default(),
            min_sup_abs: None,
            contiguous_only: false,
            all_seasons: false,
            min_items: 1,
            prune_subsumed: false,
        }
    }
}

pub fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Threshold(format!("theta {theta} outside (0, 1]")))
    }
}

/// `ceil(theta·m)`, at least 1. A small tolerance keeps `2/3 · 3` at 2.
pub fn min_sup_for(theta: f64, num_cycles: usize) -> usize {
    ((theta * num_cycles as f64 - 1e-9).ceil().max(1.0)) as usize
}

pub fn mine_seasonal(
    db: &TemporalSequenceDatabase,
    theta: f64,
    opts: &MsgpOptions,
) -> Result<Vec<SeasonalGradualPattern>> {
    check_theta(theta)?;
    let gamma = build_gamma(db, &opts.transform);
    mine_seasonal_gamma(&gamma, theta, opts)
}

/// As [`mine_seasonal`], starting from an already built run database.
pub fn mine_seasonal_gamma(
    gamma: &GammaDatabase,
    theta: f64,
    opts: &MsgpOptions,
) -> Result<Vec<SeasonalGradualPattern>> {
    check_theta(theta)?;
    if gamma.is_empty() {
        return Ok(Vec::new());
    }
    let min_sup = opts.min_sup_abs.unwrap_or_else(|| min_sup_for(theta, gamma.num_cycles));
    let min_ra = 1.0 / gamma.len() as f64;
    let sequences = gamma.to_sequences();
    let mined = mine(&sequences, min_sup, min_ra, &MineOptions { parallel: opts.transform.parallel })?;

    let mut patterns: Vec<SeasonalGradualPattern> =
        mined.into_iter().map(|p| to_seasonal(p, gamma)).collect();
    // Each label set is mined once, so seasons are distinct.

    if opts.contiguous_only {
        patterns.retain(|p| is_cyclic_interval(&p.season, gamma.cycle_length));
    }
    if !opts.all_seasons {
        patterns = keep_maximal_seasons(patterns, gamma.cycle_length);
    }
    patterns.retain(|p| p.items.len() >= opts.min_items);
    if opts.prune_subsumed {
        patterns = prune_subsumed(patterns);
    }
    Ok(patterns)
}

fn to_seasonal(p: PeriodicPattern, gamma: &GammaDatabase) -> SeasonalGradualPattern {
    let items: Vec<GradualItem> = p.cover.iter().map(|&s| gamma.entries[s].item).collect();
    let min = p.supports.iter().copied().min().unwrap_or(0);
    SeasonalGradualPattern {
        items,
        season: p.itemset,
        support: min as f64 / gamma.num_cycles as f64,
        per_item_support: p.supports,
    }
}

fn is_strict_subset<T: Ord>(a: &[T], b: &[T]) -> bool {
    a.len() < b.len() && {
        let mut it = b.iter();
        a.iter().all(|x| it.by_ref().any(|y| y == x))
    }
}

/// Whether sorted `labels` form one interval on the cycle `1..=cycle_length`,
/// wrapping from the last label to the first.
pub fn is_cyclic_interval(labels: &[PeriodLabel], cycle_length: usize) -> bool {
    if labels.is_empty() {
        return false;
    }
    let present: HashSet<u32> = labels.iter().map(|l| l.index()).collect();
    let l = cycle_length as u32;
    let starts = present
        .iter()
        .filter(|&&i| {
            let prev = if i == 1 { l } else { i - 1 };
            !present.contains(&prev)
        })
        .count();
    starts <= 1
}

/// Covers shrink as seasons grow, so every season between `X` and a larger
/// `X'` with the same item-set was mined with that item-set too. Maximality
/// therefore only needs the one-label extensions of each season. The same
/// holds among cyclic intervals, which can be grown one label at a time.
fn keep_maximal_seasons(
    patterns: Vec<SeasonalGradualPattern>,
    cycle_length: usize,
) -> Vec<SeasonalGradualPattern> {
    let by_season: FxHashMap<&[PeriodLabel], &[GradualItem]> =
        patterns.iter().map(|p| (p.season.as_slice(), p.items.as_slice())).collect();
    let keep: Vec<bool> = patterns
        .iter()
        .map(|p| {
            let mut grown = Vec::with_capacity(p.season.len() + 1);
            !(1..=cycle_length as u32).map(PeriodLabel::new).any(|d| {
                if p.season.binary_search(&d).is_ok() {
                    return false;
                }
                grown.clear();
                grown.extend_from_slice(&p.season);
                let at = grown.partition_point(|&x| x < d);
                grown.insert(at, d);
                by_season.get(grown.as_slice()) == Some(&p.items.as_slice())
            })
        })
        .collect();
    drop(by_season);
    patterns.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

fn prune_subsumed(patterns: Vec<SeasonalGradualPattern>) -> Vec<SeasonalGradualPattern> {
    let mut order: Vec<usize> = (0..patterns.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(patterns[i].items.len()));
    let mut emitted: Vec<&[GradualItem]> = Vec::new();
    let mut keep = vec![false; patterns.len()];
    for i in order {
        let items = patterns[i].items.as_slice();
        if !emitted.iter().any(|e| is_strict_subset(items, e)) {
            keep[i] = true;
            emitted.push(items);
        }
    }
    patterns.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

/// Smallest support of `season` across the run sequences of `items`, over `m`.
pub fn seasonal_support(
    items: &[GradualItem],
    season: &[PeriodLabel],
    gamma: &GammaDatabase,
    m: usize,
) -> Result<f64> {
    let sequences = gamma.to_sequences();
    let mut min = usize::MAX;
    for &item in items {
        let pos = gamma.position(item).ok_or_else(|| Error::MissingItem(format!("{item:?}")))?;
        min = min.min(support_in_sequence(season, &sequences[pos])?);
    }
    if min == usize::MAX || m == 0 {
        return Ok(0.0);
    }
    Ok(min as f64 / m as f64)
}

/// `(distinct item-sets, distinct (item-set, season) pairs)`.
pub fn count_report(patterns: &[SeasonalGradualPattern]) -> (usize, usize) {
    let item_sets: HashSet<&[GradualItem]> = patterns.iter().map(|p| p.items.as_slice()).collect();
    let pairs: HashSet<(&[GradualItem], &[PeriodLabel])> =
        patterns.iter().map(|p| (p.items.as_slice(), p.season.as_slice())).collect();
    (item_sets.len(), pairs.len())
}
