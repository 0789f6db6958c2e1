//! Shared fixtures and brute-force oracles. Nothing here calls into the
//! code paths it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use sgp_core::gradual::{Direction, GradualItem};
use sgp_core::ingest::{read_csv, IngestConfig, PeriodLabel, TemporalSequenceDatabase};
use sgp_core::msgp::SeasonalGradualPattern;
use sgp_core::periodic::TransactionSequence;

pub const PURCHASES_CSV: &str = include_str!("../data/customer_purchases.csv");

pub fn purchases() -> TemporalSequenceDatabase {
    read_csv(PURCHASES_CSV.as_bytes(), &IngestConfig::with_cycle_length(8).attributes(["a", "f", "pi", "pv"])).unwrap()
}

/// The published run database for the customer purchases table, row by row,
/// in `a^+, a^-, f^+, …` order.
pub const PUBLISHED_RUNS: [(&str, &str); 8] = [
    ("a^+", "(d1,d2,d3),(d5,d6,d7,d8),(d1,d2,d3,d4),(d7,d8),(d1,d2,d3),(d4,d5,d6,d7)"),
    ("a^-", "(d3,d4,d5),(d8,d1),(d4,d5,d6,d7),(d8,d1),(d3,d4),(d7,d8)"),
    ("f^+", "(d1,d2),(d5,d6),(d8,d1,d2,d3),(d6,d7,d8,d1),(d3,d4),(d7,d8)"),
    ("f^-", "(d2,d3,d4,d5),(d6,d7,d8),(d3,d4),(d5,d6),(d1,d2,d3),(d4,d5,d6,d7)"),
    ("pi^+", "(d1,d2,d3),(d4,d5,d6,d7,d8),(d1,d2,d3,d4),(d5,d6),(d7,d8),(d1,d2,d3),(d5,d6,d7)"),
    ("pi^-", "(d3,d4,d5),(d7,d8,d1),(d3,d4,d5,d6,d7),(d8,d1),(d3,d4,d5),(d7,d8)"),
    ("pv^+", "(d1,d2,d3),(d5,d6),(d7,d8),(d1,d2),(d6,d7),(d8,d1),(d3,d4,d5),(d7,d8)"),
    ("pv^-", "(d3,d4,d5),(d6,d7),(d8,d1),(d2,d3,d4,d5,d6),(d7,d8),(d1,d2,d3),(d5,d6,d7)"),
];

pub fn parse_runs(text: &str) -> Vec<Vec<PeriodLabel>> {
    text.trim_matches(|c| c == '(' || c == ')')
        .split("),(")
        .map(|run| run.split(',').map(|l| l.parse().unwrap()).collect())
        .collect()
}

pub fn labels(ix: &[u32]) -> Vec<PeriodLabel> {
    ix.iter().map(|&i| PeriodLabel::new(i)).collect()
}

fn holds(dir: Direction, a: f64, b: f64, strict: bool) -> bool {
    match (dir, strict) {
        (Direction::Up, true) => a < b,
        (Direction::Up, false) => a <= b,
        (Direction::Down, true) => a > b,
        (Direction::Down, false) => a >= b,
    }
}

/// Maximal runs as `(start, end)` position pairs, by enumerating every
/// contiguous window of length ≥ 2, keeping those that respect the direction
/// (and stay inside one cycle when `cross` is off), then discarding any
/// window contained in another kept window.
pub fn brute_force_runs(values: &[f64], cycle_length: usize, dir: Direction, cross: bool, strict: bool) -> Vec<(usize, usize)> {
    let n = values.len();
    let mut valid = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let same_cycle = i / cycle_length == j / cycle_length;
            let ok = (cross || same_cycle) && (i..j).all(|t| holds(dir, values[t], values[t + 1], strict));
            if ok {
                valid.push((i, j));
            }
        }
    }
    valid
        .iter()
        .copied()
        .filter(|&(i, j)| !valid.iter().any(|&(a, b)| (a, b) != (i, j) && a <= i && j <= b))
        .collect()
}

/// Label set for a run spanning `start..=end`.
pub fn run_labels(start: usize, end: usize, cycle_length: usize) -> Vec<PeriodLabel> {
    let mut seen = BTreeSet::new();
    (start..=end)
        .map(|t| PeriodLabel::new((t % cycle_length) as u32 + 1))
        .filter(|l| seen.insert(*l))
        .collect()
}

/// Run database rebuilt from [`brute_force_runs`]: `(item, transactions)`.
pub fn brute_force_gamma(db: &TemporalSequenceDatabase, cross: bool, strict: bool) -> Vec<(GradualItem, Vec<BTreeSet<PeriodLabel>>)> {
    let l = db.cycle_length();
    let mut out = Vec::new();
    for a in 0..db.num_attributes() {
        let col: Vec<f64> = (0..db.timeline_len()).map(|t| db.value(t, a)).collect();
        for dir in [Direction::Up, Direction::Down] {
            let runs = brute_force_runs(&col, l, dir, cross, strict)
                .into_iter()
                .map(|(i, j)| run_labels(i, j, l).into_iter().collect())
                .collect();
            out.push((GradualItem::new(a, dir), runs));
        }
    }
    out
}

pub fn count_containing(x: &BTreeSet<PeriodLabel>, transactions: &[BTreeSet<PeriodLabel>]) -> usize {
    transactions.iter().filter(|t| x.is_subset(t)).count()
}

/// Every non-empty subset of `universe`.
pub fn all_subsets(universe: &[PeriodLabel]) -> Vec<BTreeSet<PeriodLabel>> {
    (1u64..1 << universe.len())
        .map(|mask| universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| *l).collect())
        .collect()
}

/// Brute-force periodic mining: itemset → per-sequence supports of the
/// covering sequences (index, count).
pub fn brute_force_mine(
    seqs: &[TransactionSequence],
    min_sup: usize,
    min_ra: f64,
) -> BTreeMap<Vec<PeriodLabel>, Vec<(usize, usize)>> {
    let sets: Vec<Vec<BTreeSet<PeriodLabel>>> =
        seqs.iter().map(|s| s.transactions.iter().map(|t| t.iter().copied().collect()).collect()).collect();
    let universe: Vec<PeriodLabel> =
        sets.iter().flatten().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = BTreeMap::new();
    for x in all_subsets(&universe) {
        let cover: Vec<(usize, usize)> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, count_containing(&x, s)))
            .filter(|&(_, c)| c >= min_sup)
            .collect();
        if cover.len() as f64 / seqs.len() as f64 >= min_ra - 1e-12 {
            out.insert(x.into_iter().collect(), cover);
        }
    }
    out
}

/// Brute-force seasonal mining over a brute-force run database, every season
/// reported: `(items, season) → per-item supports`.
pub fn brute_force_seasonal(
    gamma: &[(GradualItem, Vec<BTreeSet<PeriodLabel>>)],
    cycle_length: usize,
    min_sup: usize,
) -> BTreeMap<(Vec<GradualItem>, Vec<PeriodLabel>), Vec<usize>> {
    let universe: Vec<PeriodLabel> = (1..=cycle_length as u32).map(PeriodLabel::new).collect();
    let mut out = BTreeMap::new();
    for x in all_subsets(&universe) {
        let mut items = Vec::new();
        let mut supports = Vec::new();
        for (item, runs) in gamma {
            let c = count_containing(&x, runs);
            if c >= min_sup {
                items.push(*item);
                supports.push(c);
            }
        }
        if !items.is_empty() {
            out.insert((items, x.into_iter().collect()), supports);
        }
    }
    out
}

pub fn random_sequences<R: Rng>(rng: &mut R, max_labels: u32, max_seqs: usize, max_tx: usize) -> Vec<TransactionSequence> {
    let n_labels = rng.gen_range(1..=max_labels);
    let n_seqs = rng.gen_range(1..=max_seqs);
    (0..n_seqs)
        .map(|s| {
            let n_tx = rng.gen_range(0..=max_tx);
            let txs = (0..n_tx)
                .map(|_| {
                    let mut t: Vec<PeriodLabel> =
                        (1..=n_labels).filter(|_| rng.gen_bool(0.45)).map(PeriodLabel::new).collect();
                    if t.is_empty() {
                        t.push(PeriodLabel::new(rng.gen_range(1..=n_labels)));
                    }
                    t
                })
                .collect();
            TransactionSequence::new(format!("s{s}"), txs)
        })
        .collect()
}

/// Small random database: values drawn from a few integers so ties occur.
pub fn random_db<R: Rng>(rng: &mut R, max_positions: usize) -> TemporalSequenceDatabase {
    let l = rng.gen_range(2..=6usize.min(max_positions));
    let m = rng.gen_range(1..=(max_positions / l).max(1));
    let n = rng.gen_range(1..=3);
    let values = (0..m * l * n).map(|_| f64::from(rng.gen_range(0..5))).collect();
    let attrs = (0..n).map(|i| format!("x{i}")).collect();
    TemporalSequenceDatabase::new(attrs, l, values).unwrap()
}

pub type Keyed = BTreeMap<(Vec<GradualItem>, Vec<PeriodLabel>), Vec<usize>>;

pub fn keyed(patterns: &[SeasonalGradualPattern]) -> Keyed {
    patterns.iter().map(|p| ((p.items.clone(), p.season.clone()), p.per_item_support.clone())).collect()
}

/// Entries whose season is not strictly contained in another season of the
/// same item-set.
pub fn maximal_only(all: &Keyed) -> Keyed {
    all.iter()
        .filter(|((items, season), _)| {
            let s: BTreeSet<_> = season.iter().collect();
            !all.keys().any(|(i2, s2)| {
                let s2: BTreeSet<_> = s2.iter().collect();
                i2 == items && s.len() < s2.len() && s.is_subset(&s2)
            })
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// `(distinct item-sets, item-set/season pairs)` of a keyed result.
pub fn oracle_counts(k: &Keyed) -> (usize, usize) {
    let sets: BTreeSet<&Vec<GradualItem>> = k.keys().map(|(items, _)| items).collect();
    (sets.len(), k.len())
}

/// A daily price table shaped like a small stock-exchange export: a date
/// column and `attributes` random-walk price columns over `rows` rows. Row
/// `blank_row` has an empty cell.
pub fn stock_csv<R: Rng>(rng: &mut R, rows: usize, attributes: usize, blank_row: usize) -> String {
    let mut out = String::from("date");
    for a in 0..attributes {
        out.push_str(&format!(",p{a}"));
    }
    out.push('\n');
    let mut prices: Vec<f64> = (0..attributes).map(|_| rng.gen_range(10.0..100.0)).collect();
    for r in 0..rows {
        out.push_str(&format!("day{r:04}"));
        for (a, p) in prices.iter_mut().enumerate() {
            *p = (*p * (1.0 + rng.gen_range(-0.03..0.03))).max(0.01);
            if r == blank_row && a == attributes / 2 {
                out.push(',');
            } else {
                out.push_str(&format!(",{:.4}", p));
            }
        }
        out.push('\n');
    }
    out
}
