//! Gradual items and their maximal runs.
//!
//! For a gradual item `a↑`, a run is a maximal stretch of consecutive
//! observations over which `a` strictly increases. Each run, read as the set
//! of its period labels, becomes one transaction; the runs of one item, in
//! timeline order, form that item's transaction sequence. The collection of
//! all `2n` sequences is the run database ([`GammaDatabase`]).

use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::exec::map_ordered;
use crate::ingest::{PeriodLabel, TemporalSequenceDatabase};
use crate::periodic::TransactionSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    /// `+` or `-`, as used in item keys like `age^+`.
    pub fn symbol(self) -> char {
        match self {
            Direction::Up => '+',
            Direction::Down => '-',
        }
    }

    /// Whether the step `prev -> next` follows this direction.
    #[inline]
    pub fn holds(self, prev: f64, next: f64, strict: bool) -> bool {
        match (self, strict) {
            (Direction::Up, true) => prev < next,
            (Direction::Up, false) => prev <= next,
            (Direction::Down, true) => prev > next,
            (Direction::Down, false) => prev >= next,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Up => "up",
            Direction::Down => "down",
        })
    }
}

/// An attribute (by index) paired with a variation direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradualItem {
    pub attribute: usize,
    pub direction: Direction,
}

impl GradualItem {
    pub fn new(attribute: usize, direction: Direction) -> Self {
        GradualItem { attribute, direction }
    }

    pub fn up(attribute: usize) -> Self {
        Self::new(attribute, Direction::Up)
    }

    pub fn down(attribute: usize) -> Self {
        Self::new(attribute, Direction::Down)
    }

    /// All `2n` items in the fixed order `a1↑, a1↓, a2↑, …`.
    pub fn all(num_attributes: usize) -> Vec<GradualItem> {
        (0..num_attributes).flat_map(|a| [Self::up(a), Self::down(a)]).collect()
    }

    /// Position of this item in [`GradualItem::all`].
    pub fn ordinal(self) -> usize {
        2 * self.attribute + usize::from(self.direction == Direction::Down)
    }

    /// `name^+` / `name^-`.
    pub fn key(self, attributes: &[String]) -> String {
        format!("{}^{}", attributes[self.attribute], self.direction.symbol())
    }

    /// Parses a key produced by [`GradualItem::key`].
    pub fn parse_key(key: &str, attributes: &[String]) -> Option<Self> {
        let (name, dir) = key.rsplit_once('^')?;
        let direction = match dir {
            "+" => Direction::Up,
            "-" => Direction::Down,
            _ => return None,
        };
        let attribute = attributes.iter().position(|a| a == name)?;
        Some(Self::new(attribute, direction))
    }
}

/// `true` iff every adjacent pair of `values` strictly follows `direction`.
/// A single value respects both directions.
pub fn respects(values: &[f64], direction: Direction) -> bool {
    respects_with(values, direction, true)
}

pub fn respects_with(values: &[f64], direction: Direction, strict: bool) -> bool {
    values.windows(2).all(|w| direction.holds(w[0], w[1], strict))
}

/// One maximal observation list for a gradual item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    /// Period labels in timeline order. A run longer than one cycle keeps
    /// only the first occurrence of each label.
    pub labels: Vec<PeriodLabel>,
    /// Absolute timeline position of the first observation.
    pub start: usize,
    /// Number of observations spanned, at least 2.
    pub length: usize,
}

impl Run {
    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }

    /// The run as a label set, in canonical (cycle position) order.
    pub fn transaction(&self) -> Vec<PeriodLabel> {
        let mut t = self.labels.clone();
        t.sort_unstable();
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformOptions {
    /// Treat the last observation of a cycle as adjacent to the first of the next.
    pub cross_boundary: bool,
    /// Strict comparisons; when off, equal neighbours continue runs in both directions.
    pub strict: bool,
    pub parallel: bool,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions { cross_boundary: true, strict: true, parallel: true }
    }
}

/// All maximal runs of length ≥ 2 for `item`, in timeline order.
pub fn compute_runs(db: &TemporalSequenceDatabase, item: GradualItem, opts: &TransformOptions) -> Vec<Run> {
    let len = db.timeline_len();
    let l = db.cycle_length();
    let mut runs = Vec::new();
    let mut start = 0usize;
    let close = |start: usize, end: usize, runs: &mut Vec<Run>| {
        if end > start {
            runs.push(make_run(db, start, end));
        }
    };
    for t in 1..len {
        let linked = (opts.cross_boundary || t % l != 0)
            && item.direction.holds(db.value(t - 1, item.attribute), db.value(t, item.attribute), opts.strict);
        if !linked {
            close(start, t - 1, &mut runs);
            start = t;
        }
    }
    if len > 0 {
        close(start, len - 1, &mut runs);
    }
    runs
}

fn make_run(db: &TemporalSequenceDatabase, start: usize, end: usize) -> Run {
    let length = end - start + 1;
    let l = db.cycle_length();
    let labels = if length > l {
        warn!(
            "run of {length} observations starting at position {start} exceeds the cycle length {l}; \
             repeated labels collapsed"
        );
        (start..start + l).map(|t| db.label_at(t)).collect()
    } else {
        (start..=end).map(|t| db.label_at(t)).collect()
    };
    Run { labels, start, length }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaEntry {
    pub item: GradualItem,
    pub runs: Vec<Run>,
}

/// The run database: one run sequence per gradual item, in
/// [`GradualItem::all`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaDatabase {
    pub attributes: Vec<String>,
    pub cycle_length: usize,
    pub num_cycles: usize,
    pub entries: Vec<GammaEntry>,
}

impl GammaDatabase {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, item: GradualItem) -> Option<&GammaEntry> {
        self.entries.iter().find(|e| e.item == item)
    }

    pub fn position(&self, item: GradualItem) -> Option<usize> {
        self.entries.iter().position(|e| e.item == item)
    }

    /// The entries as transaction sequences for the periodic miner; sequence
    /// ids are item keys.
    pub fn to_sequences(&self) -> Vec<TransactionSequence> {
        self.entries
            .iter()
            .map(|e| TransactionSequence {
                sid: e.item.key(&self.attributes),
                transactions: e.runs.iter().map(Run::transaction).collect(),
            })
            .collect()
    }
}

pub fn build_gamma(db: &TemporalSequenceDatabase, opts: &TransformOptions) -> GammaDatabase {
    let items = GradualItem::all(db.num_attributes());
    let runs = map_ordered(&items, opts.parallel, |&item| compute_runs(db, item, opts));
    GammaDatabase {
        attributes: db.attributes().to_vec(),
        cycle_length: db.cycle_length(),
        num_cycles: db.num_cycles(),
        entries: items.into_iter().zip(runs).map(|(item, runs)| GammaEntry { item, runs }).collect(),
    }
}
