//! Wire formats: run database text/JSON, pattern JSON lines, tables.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::baseline::TemporalGradualPattern;
use crate::error::{Error, Result};
use crate::gradual::{Direction, GammaDatabase, GradualItem, Run};
use crate::ingest::PeriodLabel;
use crate::msgp::SeasonalGradualPattern;
use crate::periodic::{PeriodicPattern, TransactionSequence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemJson {
    pub attribute: String,
    pub direction: Direction,
}

impl ItemJson {
    fn new(item: GradualItem, attributes: &[String]) -> Self {
        ItemJson { attribute: attributes[item.attribute].clone(), direction: item.direction }
    }

    fn key(&self) -> String {
        format!("{}^{}", self.attribute, self.direction.symbol())
    }
}

/// Map serialized in insertion order.
struct OrderedCounts(Vec<(String, usize)>);

impl Serialize for OrderedCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn run_text(run: &Run) -> String {
    let labels: Vec<String> = run.labels.iter().map(ToString::to_string).collect();
    format!("({})", labels.join(","))
}

/// One line per gradual item: `a^+ : (d1,d2,d3),(d5,d6,d7,d8)`.
pub fn gamma_text(gamma: &GammaDatabase) -> String {
    let mut out = String::new();
    for entry in &gamma.entries {
        let runs: Vec<String> = entry.runs.iter().map(run_text).collect();
        let _ = writeln!(out, "{} : {}", entry.item.key(&gamma.attributes), runs.join(","));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaEntryJson {
    pub item: ItemJson,
    pub runs: Vec<Vec<PeriodLabel>>,
}

pub fn gamma_json(gamma: &GammaDatabase) -> Result<String> {
    let entries: Vec<GammaEntryJson> = gamma
        .entries
        .iter()
        .map(|e| GammaEntryJson {
            item: ItemJson::new(e.item, &gamma.attributes),
            runs: e.runs.iter().map(|r| r.labels.clone()).collect(),
        })
        .collect();
    Ok(serde_json::to_string(&entries)?)
}

/// Reads a JSON run database dump into transaction sequences keyed `name^±`.
pub fn parse_gamma_json(text: &str) -> Result<Vec<TransactionSequence>> {
    let entries: Vec<GammaEntryJson> = serde_json::from_str(text)?;
    Ok(entries
        .into_iter()
        .map(|e| TransactionSequence::new(e.item.key(), e.runs))
        .collect())
}

#[derive(Serialize)]
struct SeasonalJson<'a> {
    items: Vec<ItemJson>,
    season: &'a [PeriodLabel],
    support: f64,
    per_item_support: OrderedCounts,
}

pub fn seasonal_json(p: &SeasonalGradualPattern, attributes: &[String]) -> Result<String> {
    let json = SeasonalJson {
        items: p.items.iter().map(|&i| ItemJson::new(i, attributes)).collect(),
        season: &p.season,
        support: p.support,
        per_item_support: OrderedCounts(
            p.items.iter().zip(&p.per_item_support).map(|(i, &s)| (i.key(attributes), s)).collect(),
        ),
    };
    Ok(serde_json::to_string(&json)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_patterns: usize,
    pub n_seasonality: usize,
    pub runtime_ms: f64,
}

#[derive(Serialize)]
struct TemporalJson {
    items: Vec<ItemJson>,
    support: f64,
    count: usize,
}

pub fn temporal_json(p: &TemporalGradualPattern, attributes: &[String]) -> Result<String> {
    let json = TemporalJson {
        items: p.items.iter().map(|&i| ItemJson::new(i, attributes)).collect(),
        support: p.support,
        count: p.count,
    };
    Ok(serde_json::to_string(&json)?)
}

#[derive(Serialize)]
struct PeriodicJson<'a> {
    itemset: &'a [PeriodLabel],
    cover: Vec<&'a str>,
    supports: OrderedCounts,
    ratio: f64,
}

/// JSON array of mined itemsets with covering sequence ids.
pub fn periodic_json(patterns: &[PeriodicPattern], sequences: &[TransactionSequence]) -> Result<String> {
    let rows: Vec<PeriodicJson> = patterns
        .iter()
        .map(|p| PeriodicJson {
            itemset: &p.itemset,
            cover: p.cover.iter().map(|&s| sequences[s].sid.as_str()).collect(),
            supports: OrderedCounts(
                p.cover.iter().zip(&p.supports).map(|(&s, &c)| (sequences[s].sid.clone(), c)).collect(),
            ),
            ratio: p.ratio,
        })
        .collect();
    Ok(serde_json::to_string(&rows)?)
}

fn items_text(items: &[GradualItem], attributes: &[String]) -> String {
    items.iter().map(|i| i.key(attributes)).collect::<Vec<_>>().join(" ")
}

fn labels_text(labels: &[PeriodLabel]) -> String {
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn seasonal_table(patterns: &[SeasonalGradualPattern], attributes: &[String]) -> String {
    let rows: Vec<[String; 3]> = patterns
        .iter()
        .map(|p| [items_text(&p.items, attributes), labels_text(&p.season), format!("{:.4}", p.support)])
        .collect();
    table(["items", "season", "support"], &rows)
}

pub fn temporal_table(patterns: &[TemporalGradualPattern], attributes: &[String]) -> String {
    let rows: Vec<[String; 3]> = patterns
        .iter()
        .map(|p| [items_text(&p.items, attributes), p.count.to_string(), format!("{:.4}", p.support)])
        .collect();
    table(["items", "couples", "support"], &rows)
}

fn table<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> String {
    let mut widths = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
        let parts: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut header.iter().copied(), &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut rule.iter().map(String::as_str), &mut out);
    for row in rows {
        line(&mut row.iter().map(String::as_str), &mut out);
    }
    out
}

/// Parses `d1,d2,d3`.
pub fn parse_labels(text: &str) -> Result<Vec<PeriodLabel>> {
    text.split(',').map(|s| s.trim().parse()).collect::<Result<Vec<_>>>().and_then(|v| {
        if v.is_empty() {
            Err(Error::EmptyItemset)
        } else {
            Ok(v)
        }
    })
}
