//! Threshold sweeps: pattern counts and runtimes per `(theta, algorithm)`
//! cell, written as plot-ready CSV.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baseline::mine_temporal;
use crate::error::{Error, Result};
use crate::ingest::TemporalSequenceDatabase;
use crate::msgp::{count_report, mine_seasonal, MsgpOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Msgp,
    Temporal,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Msgp => "msgp",
            Algorithm::Temporal => "temporal",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msgp" => Ok(Algorithm::Msgp),
            "temporal" => Ok(Algorithm::Temporal),
            other => Err(Error::InvalidSweep(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub theta: f64,
    pub algorithm: Algorithm,
    pub n_patterns: usize,
    /// Only meaningful for MSGP.
    pub n_seasonality: Option<usize>,
    /// Median wall-clock time of the mining call, ingest excluded.
    pub runtime_ms: f64,
}

#[derive(Debug, Clone)]
pub struct CellFailure {
    pub theta: f64,
    pub algorithm: Algorithm,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct Sweep {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<CellFailure>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub msgp: MsgpOptions,
    pub repetitions: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { msgp: MsgpOptions::default(), repetitions: 3 }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn run_cell(
    db: &TemporalSequenceDatabase,
    theta: f64,
    algorithm: Algorithm,
    opts: &SweepOptions,
) -> Result<BenchRecord> {
    let mut times = Vec::with_capacity(opts.repetitions);
    let mut counts = (0, None);
    for rep in 0..opts.repetitions.max(1) {
        let start = Instant::now();
        let c = match algorithm {
            Algorithm::Msgp => {
                let patterns = mine_seasonal(db, theta, &opts.msgp)?;
                let elapsed = start.elapsed();
                times.push(elapsed.as_secs_f64() * 1e3);
                let (p, s) = count_report(&patterns);
                (p, Some(s))
            }
            Algorithm::Temporal => {
                let patterns = mine_temporal(db, theta, &opts.msgp.transform)?;
                times.push(start.elapsed().as_secs_f64() * 1e3);
                (patterns.len(), None)
            }
        };
        if rep == 0 {
            counts = c;
        }
    }
    Ok(BenchRecord { theta, algorithm, n_patterns: counts.0, n_seasonality: counts.1, runtime_ms: median(times) })
}

/// Runs every `(theta, algorithm)` cell in sequence. A failing cell is
/// recorded and the sweep continues.
pub fn run_sweep(
    db: &TemporalSequenceDatabase,
    thetas: &[f64],
    algorithms: &[Algorithm],
    opts: &SweepOptions,
) -> Result<Sweep> {
    if thetas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidSweep("thetas must be sorted ascending".into()));
    }
    let mut sweep = Sweep::default();
    for &theta in thetas {
        for &algorithm in algorithms {
            match run_cell(db, theta, algorithm, opts) {
                Ok(r) => sweep.records.push(r),
                Err(e) => sweep.failures.push(CellFailure { theta, algorithm, error: e.to_string() }),
            }
        }
    }
    Ok(sweep)
}

/// Writes records grouped by algorithm, then ascending theta, under the
/// header `theta,algorithm,n_patterns,n_seasonality,runtime_ms`.
pub fn write_plot_data<W: Write>(records: &[BenchRecord], writer: W) -> Result<()> {
    let mut sorted: Vec<&BenchRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.algorithm.cmp(&b.algorithm).then(a.theta.total_cmp(&b.theta)));
    let mut wtr = csv::Writer::from_writer(writer);
    if sorted.is_empty() {
        wtr.write_record(["theta", "algorithm", "n_patterns", "n_seasonality", "runtime_ms"])?;
    }
    for r in sorted {
        wtr.serialize(r)?;
    }
    wtr.flush().map_err(|e| Error::io("<plot data>", e))?;
    Ok(())
}

pub fn emit_plot_data(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if records.is_empty() {
        return Err(Error::InvalidSweep("no records to emit".into()));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_plot_data(records, file)
}

pub fn parse_plot_data<R: Read>(reader: R) -> Result<Vec<BenchRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}
