//! Seasonal gradual pattern mining.
//!
//! A numerical temporal sequence database (cycles of labelled periods) is
//! turned into one run-sequence per gradual item: the maximal monotone runs
//! of that attribute, each run read as a transaction of period labels. Label
//! sets that recur in enough runs of several gradual items are mined
//! breadth-first; the items sharing a label set form a seasonal gradual
//! pattern whose season is that label set.
//!
//! Modules, bottom-up:
//!
//! * [`ingest`]: CSV loading, cycle segmentation, synthetic generator.
//! * [`gradual`]: gradual items, maximal runs, the derived run database.
//! * [`periodic`]: periodicity measures and the levelwise periodic miner.
//! * [`msgp`]: end-to-end seasonal mining and the seasonal support measure.
//! * [`baseline`]: the temporal gradual miner used as a comparator.
//! * [`bench`]: threshold sweeps and plot-ready CSV.
//! * [`output`]: JSON and text renderings shared with the CLI.

pub mod baseline;
pub mod bench;
mod error;
mod exec;
pub use exec::parallel_available;
pub mod gradual;
pub mod ingest;
mod levelwise;
pub mod msgp;
pub mod output;
pub mod periodic;

pub use error::{Error, Result};
pub use gradual::{build_gamma, compute_runs, respects, Direction, GammaDatabase, GradualItem, Run, TransformOptions};
pub use ingest::{load_csv, IngestConfig, PeriodLabel, Segmentation, TemporalSequenceDatabase};
pub use msgp::{count_report, mine_seasonal, seasonal_support, MsgpOptions, SeasonalGradualPattern};
pub use periodic::{mine, PeriodicPattern, TransactionSequence};
