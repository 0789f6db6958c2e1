//! Temporal sequence databases: CSV ingestion, cycle segmentation and
//! validation, plus a seeded synthetic generator.

mod synthetic;

use std::collections::HashMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use synthetic::{generate_synthetic, Plant, SyntheticSpec};

/// Position of an observation within its cycle, 1-based. Renders as `d<index>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodLabel(u32);

impl PeriodLabel {
    /// Panics on zero; labels are 1-based.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "period labels are 1-based");
        PeriodLabel(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for PeriodLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

impl FromStr for PeriodLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('d')
            .and_then(|rest| rest.parse::<u32>().ok())
            .filter(|&i| i >= 1)
            .map(PeriodLabel)
            .ok_or_else(|| Error::InvalidLabel(s.to_string()))
    }
}

impl Serialize for PeriodLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PeriodLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `m` cycles of `cycle_length` observations over `n` numeric attributes.
///
/// Observations are stored row-major along the concatenated timeline, so
/// position `t` belongs to cycle `t / cycle_length`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalSequenceDatabase {
    attributes: Vec<String>,
    cycle_length: usize,
    values: Vec<f64>,
}

impl TemporalSequenceDatabase {
    /// Builds a database from row-major values. The number of rows must be a
    /// positive multiple of `cycle_length` and every value must be finite.
    pub fn new(attributes: Vec<String>, cycle_length: usize, values: Vec<f64>) -> Result<Self> {
        let n = attributes.len();
        if n == 0 {
            return Err(Error::InvalidDatabase("no attributes".into()));
        }
        if cycle_length == 0 {
            return Err(Error::InvalidDatabase("cycle length must be positive".into()));
        }
        if !values.len().is_multiple_of(n) {
            return Err(Error::InvalidDatabase(format!(
                "{} values do not fill rows of {n} attributes",
                values.len()
            )));
        }
        let rows = values.len() / n;
        if rows == 0 {
            return Err(Error::ZeroCycles);
        }
        if !rows.is_multiple_of(cycle_length) {
            return Err(Error::InvalidDatabase(format!(
                "{rows} rows do not split into cycles of {cycle_length}"
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::MissingValue { row: pos / n, column: attributes[pos % n].clone() });
        }
        Ok(TemporalSequenceDatabase { attributes, cycle_length, values })
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    /// Number of attributes, `n`.
    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    /// Periods per cycle, `ℓ`.
    pub fn cycle_length(&self) -> usize {
        self.cycle_length
    }

    /// Number of cycles, `m`.
    pub fn num_cycles(&self) -> usize {
        self.timeline_len() / self.cycle_length
    }

    /// Total observations on the concatenated timeline, `m·ℓ`.
    pub fn timeline_len(&self) -> usize {
        self.values.len() / self.attributes.len()
    }

    pub fn value(&self, position: usize, attribute: usize) -> f64 {
        self.values[position * self.attributes.len() + attribute]
    }

    pub fn row(&self, position: usize) -> &[f64] {
        let n = self.attributes.len();
        &self.values[position * n..(position + 1) * n]
    }

    /// One attribute along the whole timeline.
    pub fn column(&self, attribute: usize) -> Vec<f64> {
        (0..self.timeline_len()).map(|t| self.value(t, attribute)).collect()
    }

    pub fn label_at(&self, position: usize) -> PeriodLabel {
        PeriodLabel((position % self.cycle_length) as u32 + 1)
    }

    pub fn cycle_of(&self, position: usize) -> usize {
        position / self.cycle_length
    }

    /// Returns a copy with one attribute's values replaced.
    pub fn with_column(&self, attribute: usize, column: &[f64]) -> Result<Self> {
        if column.len() != self.timeline_len() {
            return Err(Error::InvalidDatabase("replacement column has the wrong length".into()));
        }
        let mut values = self.values.clone();
        let n = self.attributes.len();
        for (t, v) in column.iter().enumerate() {
            values[t * n + attribute] = *v;
        }
        Self::new(self.attributes.clone(), self.cycle_length, values)
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            m: self.num_cycles(),
            l: self.cycle_length,
            n: self.num_attributes(),
            attributes: self.attributes.clone(),
        }
    }
}

/// Shape summary written next to a serialized database.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub attributes: Vec<String>,
}

/// How rows are grouped into cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segmentation {
    /// Consecutive blocks of a fixed number of rows.
    CycleLength(usize),
    /// A calendar column whose distinct values (in order of first
    /// appearance) are the period labels; each cycle holds every label once.
    LabelColumn(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestConfig {
    pub segmentation: Segmentation,
    /// Numeric columns to keep. `None` keeps every column except the label column.
    pub attributes: Option<Vec<String>>,
    /// Drop rows with a missing or non-numeric value; when off such rows are an error.
    pub drop_missing: bool,
}

impl IngestConfig {
    pub fn with_cycle_length(cycle_length: usize) -> Self {
        IngestConfig {
            segmentation: Segmentation::CycleLength(cycle_length),
            attributes: None,
            drop_missing: true,
        }
    }

    pub fn with_label_column(column: impl Into<String>) -> Self {
        IngestConfig {
            segmentation: Segmentation::LabelColumn(column.into()),
            attributes: None,
            drop_missing: true,
        }
    }

    pub fn attributes<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.attributes = Some(names.into_iter().map(Into::into).collect());
        self
    }

    /// Parses a TOML key-value file:
    ///
    /// ```toml
    /// cycle-length = 8          # or: label-column = "weekday"
    /// attributes = ["a", "f"]
    /// drop-missing = true
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(rename_all = "kebab-case", deny_unknown_fields)]
        struct Raw {
            cycle_length: Option<usize>,
            label_column: Option<String>,
            attributes: Option<Vec<String>>,
            drop_missing: Option<bool>,
        }
        let raw: Raw = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let segmentation = match (raw.cycle_length, raw.label_column) {
            (Some(l), None) => Segmentation::CycleLength(l),
            (None, Some(c)) => Segmentation::LabelColumn(c),
            _ => {
                return Err(Error::Config(
                    "exactly one of cycle-length or label-column is required".into(),
                ))
            }
        };
        Ok(IngestConfig {
            segmentation,
            attributes: raw.attributes,
            drop_missing: raw.drop_missing.unwrap_or(true),
        })
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}

/// Loads and validates a CSV file with a header row.
pub fn load_csv(path: impl AsRef<Path>, config: &IngestConfig) -> Result<TemporalSequenceDatabase> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, config)
}

/// Parses one numeric cell. Empty cells, `NA`-style markers, non-numeric
/// text and non-finite values all count as missing.
fn parse_cell(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_csv<R: Read>(reader: R, config: &IngestConfig) -> Result<TemporalSequenceDatabase> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let headers: Vec<String> = match rdr.headers() {
        Ok(h) => h.iter().map(|s| s.trim().to_string()).collect(),
        // An empty file has no header row at all.
        Err(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => return Err(e.into()),
        Err(_) => Vec::new(),
    };
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::ZeroCycles);
    }

    let label_col = match &config.segmentation {
        Segmentation::LabelColumn(name) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))?,
        ),
        Segmentation::CycleLength(_) => None,
    };
    let (attr_names, attr_cols): (Vec<String>, Vec<usize>) = match &config.attributes {
        Some(names) => {
            let mut cols = Vec::with_capacity(names.len());
            for name in names {
                let col = headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
                cols.push(col);
            }
            (names.clone(), cols)
        }
        None => headers
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_col)
            .map(|(i, h)| (h.clone(), i))
            .unzip(),
    };
    if attr_names.is_empty() {
        return Err(Error::Config("no attribute columns selected".into()));
    }

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut dropped = 0usize;
    for (row_idx, record) in rdr.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(attr_cols.len());
        let mut missing = None;
        for (&col, name) in attr_cols.iter().zip(&attr_names) {
            match record.get(col).and_then(parse_cell) {
                Some(v) => row.push(v),
                None => {
                    missing = Some(name);
                    break;
                }
            }
        }
        if let Some(column) = missing {
            if config.drop_missing {
                dropped += 1;
                continue;
            }
            return Err(Error::MissingValue { row: row_idx + 1, column: column.clone() });
        }
        if let Some(col) = label_col {
            labels.push(record.get(col).unwrap_or("").trim().to_string());
        }
        values.extend(row);
    }
    if dropped > 0 {
        warn!("dropped {dropped} rows with missing or non-numeric values");
    }

    let n = attr_names.len();
    let rows = values.len() / n;
    let cycle_length = match &config.segmentation {
        Segmentation::CycleLength(l) => {
            if *l == 0 {
                return Err(Error::Config("cycle length must be positive".into()));
            }
            *l
        }
        Segmentation::LabelColumn(_) => check_label_cycles(&labels)?,
    };
    let complete = rows / cycle_length;
    if complete == 0 {
        return Err(Error::ZeroCycles);
    }
    let leftover = rows - complete * cycle_length;
    if leftover > 0 {
        warn!("dropped trailing partial cycle of {leftover} rows");
        values.truncate(complete * cycle_length * n);
    }
    TemporalSequenceDatabase::new(attr_names, cycle_length, values)
}

/// Validates label-column segmentation and returns the cycle length.
///
/// Labels are ordered by first appearance. A new cycle starts whenever a
/// label does not follow its predecessor in that order; every cycle except a
/// trailing one must then hold all labels exactly once.
fn check_label_cycles(labels: &[String]) -> Result<usize> {
    let mut order: HashMap<&str, usize> = HashMap::new();
    for label in labels {
        let next = order.len();
        order.entry(label.as_str()).or_insert(next);
    }
    let cycle_length = order.len();
    if cycle_length == 0 {
        return Err(Error::ZeroCycles);
    }
    let mut expected = 0usize;
    for (row, label) in labels.iter().enumerate() {
        let idx = order[label.as_str()];
        if idx != expected {
            return Err(Error::IrregularCycle(format!(
                "row {} has label {label:?} at cycle position {}, expected position {}",
                row + 1,
                expected + 1,
                idx + 1
            )));
        }
        expected = (expected + 1) % cycle_length;
    }
    Ok(cycle_length)
}

/// Writes `db` as CSV (attribute columns only) plus a JSON sidecar
/// `{m, l, n, attributes}` at the same path with a `.json` extension.
/// Values use the shortest representation that parses back to the same
/// double.
pub fn save_database(db: &TemporalSequenceDatabase, csv_path: impl AsRef<Path>) -> Result<PathBuf> {
    let csv_path = csv_path.as_ref();
    let mut out = Vec::new();
    write_csv(db, &mut out)?;
    fs::write(csv_path, out).map_err(|e| Error::io(csv_path, e))?;
    let sidecar_path = csv_path.with_extension("json");
    let json = serde_json::to_string_pretty(&db.sidecar())?;
    fs::write(&sidecar_path, json).map_err(|e| Error::io(&sidecar_path, e))?;
    Ok(sidecar_path)
}

pub fn write_csv<W: Write>(db: &TemporalSequenceDatabase, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(db.attributes())?;
    for t in 0..db.timeline_len() {
        wtr.write_record(db.row(t).iter().map(|v| v.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Reloads a database written by [`save_database`], checking it against its sidecar.
pub fn load_saved(csv_path: impl AsRef<Path>) -> Result<TemporalSequenceDatabase> {
    let csv_path = csv_path.as_ref();
    let sidecar_path = csv_path.with_extension("json");
    let text = fs::read_to_string(&sidecar_path).map_err(|e| Error::io(&sidecar_path, e))?;
    let sidecar: Sidecar = serde_json::from_str(&text)?;
    let config = IngestConfig {
        segmentation: Segmentation::CycleLength(sidecar.l),
        attributes: Some(sidecar.attributes.clone()),
        drop_missing: false,
    };
    let db = load_csv(csv_path, &config)?;
    if db.sidecar() != sidecar {
        return Err(Error::InvalidDatabase(format!(
            "sidecar declares m={} l={} n={}, file holds m={} l={} n={}",
            sidecar.m,
            sidecar.l,
            sidecar.n,
            db.num_cycles(),
            db.cycle_length(),
            db.num_attributes()
        )));
    }
    Ok(db)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PURCHASES: &str = include_str!("../../tests/data/customer_purchases.csv");

    fn purchases_config() -> IngestConfig {
        IngestConfig::with_cycle_length(8).attributes(["a", "f", "pi", "pv"])
    }

    #[test]
    fn label_display_and_parse() {
        let l = PeriodLabel::new(3);
        assert_eq!(l.to_string(), "d3");
        assert_eq!("d3".parse::<PeriodLabel>().unwrap(), l);
        assert!("d0".parse::<PeriodLabel>().is_err());
        assert!("x3".parse::<PeriodLabel>().is_err());
    }

    #[test]
    fn purchases_shape() {
        let db = read_csv(PURCHASES.as_bytes(), &purchases_config()).unwrap();
        assert_eq!((db.num_cycles(), db.cycle_length(), db.num_attributes()), (3, 8, 4));
        assert_eq!(db.value(0, 0), 22.0);
        assert_eq!(db.value(13, 1), 12.805);
        assert_eq!(db.label_at(13).to_string(), "d6");
    }

    #[test]
    fn label_column_mode_matches_fixed_length() {
        let by_label =
            read_csv(PURCHASES.as_bytes(), &IngestConfig::with_label_column("period").attributes(["a", "f", "pi", "pv"]))
                .unwrap();
        let by_length = read_csv(PURCHASES.as_bytes(), &purchases_config()).unwrap();
        assert_eq!(by_label, by_length);
    }

    #[test]
    fn label_column_default_attributes_skip_label() {
        let csv = "day,x\nmon,1\ntue,2\nmon,3\ntue,4\n";
        let db = read_csv(csv.as_bytes(), &IngestConfig::with_label_column("day")).unwrap();
        assert_eq!(db.attributes(), ["x"]);
        assert_eq!(db.num_cycles(), 2);
    }

    #[test]
    fn label_column_rejects_missing_label_mid_stream() {
        let csv = "day,x\nmon,1\ntue,2\nwed,3\nmon,4\nwed,5\ntue,6\n";
        let err = read_csv(csv.as_bytes(), &IngestConfig::with_label_column("day")).unwrap_err();
        assert!(matches!(err, Error::IrregularCycle(_)), "{err}");
    }

    #[test]
    fn label_column_drops_trailing_partial() {
        let csv = "day,x\nmon,1\ntue,2\nmon,3\n";
        let db = read_csv(csv.as_bytes(), &IngestConfig::with_label_column("day")).unwrap();
        assert_eq!(db.num_cycles(), 1);
    }

    #[test]
    fn empty_file_has_zero_cycles() {
        let err = read_csv("".as_bytes(), &IngestConfig::with_cycle_length(8)).unwrap_err();
        assert!(matches!(err, Error::ZeroCycles));
        assert_eq!(err.to_string(), "zero complete cycles after filtering");
    }

    #[test]
    fn header_only_has_zero_cycles() {
        let err = read_csv("a,b\n".as_bytes(), &IngestConfig::with_cycle_length(2)).unwrap_err();
        assert!(matches!(err, Error::ZeroCycles));
    }

    #[test]
    fn partial_trailing_cycle_dropped() {
        let mut csv = String::from("x\n");
        for i in 0..20 {
            csv.push_str(&format!("{i}\n"));
        }
        let db = read_csv(csv.as_bytes(), &IngestConfig::with_cycle_length(8)).unwrap();
        assert_eq!(db.num_cycles(), 2);
        assert_eq!(db.timeline_len(), 16);
    }

    #[test]
    fn missing_rows_dropped_before_segmentation() {
        let csv = "x,y\n1,2\n,3\n4,NA\n5,6\n7,inf\n8,9\n";
        let db = read_csv(csv.as_bytes(), &IngestConfig::with_cycle_length(3)).unwrap();
        assert_eq!(db.num_cycles(), 1);
        assert_eq!(db.column(0), vec![1.0, 5.0, 8.0]);
    }

    #[test]
    fn missing_rows_rejected_when_not_dropping() {
        let csv = "x\n1\nabc\n";
        let mut cfg = IngestConfig::with_cycle_length(1);
        cfg.drop_missing = false;
        let err = read_csv(csv.as_bytes(), &cfg).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 2, .. }), "{err}");
    }

    #[test]
    fn unknown_attribute_column() {
        let err = read_csv(PURCHASES.as_bytes(), &IngestConfig::with_cycle_length(8).attributes(["zzz"])).unwrap_err();
        assert!(matches!(err, Error::UnknownColumn(_)));
    }

    #[test]
    fn unreadable_file() {
        let err = load_csv("/nonexistent/nope.csv", &IngestConfig::with_cycle_length(2)).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn toml_config() {
        let cfg = IngestConfig::from_toml_str("cycle-length = 8\nattributes = [\"a\", \"f\"]\n").unwrap();
        assert_eq!(cfg.segmentation, Segmentation::CycleLength(8));
        assert_eq!(cfg.attributes.as_deref(), Some(&["a".to_string(), "f".to_string()][..]));
        assert!(cfg.drop_missing);
        assert!(IngestConfig::from_toml_str("attributes = []").is_err());
        assert!(IngestConfig::from_toml_str("cycle-length = 2\nlabel-column = \"d\"").is_err());
    }

    #[test]
    fn save_and_reload_is_exact() {
        let db = read_csv(PURCHASES.as_bytes(), &purchases_config()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db.csv");
        save_database(&db, &path).unwrap();
        let sidecar: Sidecar =
            serde_json::from_str(&fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
        assert_eq!(sidecar, Sidecar { m: 3, l: 8, n: 4, attributes: db.attributes().to_vec() });
        let again = load_saved(&path).unwrap();
        assert_eq!(again, db);
        let first = fs::read(&path).unwrap();
        save_database(&again, &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }

    #[test]
    fn new_rejects_non_finite() {
        let err = TemporalSequenceDatabase::new(vec!["x".into()], 1, vec![f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::MissingValue { .. }));
    }
}
