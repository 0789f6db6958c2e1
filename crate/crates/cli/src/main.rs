use std::io::{self, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use sgp_core::baseline::mine_temporal;
use sgp_core::bench::{run_sweep, write_plot_data, Algorithm, SweepOptions};
use sgp_core::gradual::{build_gamma, Direction, TransformOptions};
use sgp_core::ingest::{generate_synthetic, load_csv, save_database, write_csv, IngestConfig, Plant, Segmentation, SyntheticSpec};
use sgp_core::msgp::{check_theta, count_report, mine_seasonal, min_sup_for, MsgpOptions};
use sgp_core::output::{gamma_json, gamma_text, parse_gamma_json, periodic_json, seasonal_json, seasonal_table, temporal_json, temporal_table, Summary};
use sgp_core::periodic::{mine, MineOptions, TransactionSequence};
use sgp_core::{Error, TemporalSequenceDatabase};

/// Seasonal gradual pattern mining over cyclic numeric data.
#[derive(Parser, Debug)]
#[command(name = "sgp", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// CSV file with a header row
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Rows per cycle
    #[arg(long, global = true)]
    cycle_length: Option<usize>,
    /// Column whose values label the periods of each cycle
    #[arg(long, global = true, conflicts_with = "cycle_length")]
    label_column: Option<String>,
    /// Numeric columns to use, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    attributes: Option<Vec<String>>,
    /// TOML file with cycle-length / label-column / attributes / drop-missing
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Drop rows with missing or non-numeric values
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    drop_missing: Option<bool>,
    /// Minimum support as a fraction of the number of cycles
    #[arg(long, global = true, default_value_t = 0.5)]
    theta: f64,
    /// Absolute minimum number of runs, overriding --theta
    #[arg(long, global = true)]
    min_sup_abs: Option<usize>,
    /// Whether runs may continue across cycle boundaries
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    cross_boundary: Switch,
    /// Let equal neighbours continue a run in both directions
    #[arg(long, global = true)]
    non_strict: bool,
    /// Only report seasons forming one cyclic interval of labels
    #[arg(long, global = true)]
    contiguous_only: bool,
    /// Report every season, not only those maximal for their item-set
    #[arg(long, global = true)]
    all_seasons: bool,
    #[arg(long, global = true, default_value_t = 1)]
    min_items: usize,
    /// Drop item-sets contained in an item-set already reported
    #[arg(long, global = true)]
    prune_subsumed: bool,
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run every stage on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine seasonal gradual patterns
    Mine,
    /// Mine temporal gradual patterns over consecutive couples
    MineBaseline,
    /// Mine label sets shared by several run sequences
    MinePeriodic {
        /// Run database JSON as written by `transform --output json`
        #[arg(long)]
        gamma: Option<PathBuf>,
        /// Minimum fraction of sequences (default: one sequence)
        #[arg(long)]
        min_ra: Option<f64>,
    },
    /// Print the run database
    Transform,
    /// Sweep thresholds and record counts and runtimes
    Bench {
        /// Thresholds, ascending, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        thetas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "msgp,temporal")]
        algorithms: Vec<String>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        /// Plot data CSV destination (default: stdout)
        #[arg(long)]
        bench_output: Option<PathBuf>,
    },
    /// Generate a synthetic database with planted seasonal co-variations
    Synth {
        #[arg(long, default_value_t = 20)]
        cycles: usize,
        #[arg(long = "n-attributes", default_value_t = 8)]
        n_attributes: usize,
        /// `x1+,x3+@1-3:0.5`: items, label window, probability
        #[arg(long)]
        plant: Vec<String>,
        /// CSV destination; a JSON sidecar is written next to it (default: CSV on stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io { .. }
            | Error::Csv(_)
            | Error::Json(_)
            | Error::UnknownColumn(_)
            | Error::ZeroCycles
            | Error::IrregularCycle(_)
            | Error::MissingValue { .. }
            | Error::InvalidDatabase(_) => Failure::Data(msg),
            Error::Config(_)
            | Error::Threshold(_)
            | Error::InvalidSynthetic(_)
            | Error::InvalidSweep(_)
            | Error::InvalidLabel(_)
            | Error::EmptyItemset
            | Error::MissingItem(_) => Failure::Usage(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(format!("cannot write output: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn transform_options(g: &Global) -> TransformOptions {
    TransformOptions { cross_boundary: g.cross_boundary == Switch::On, strict: !g.non_strict, parallel: !g.sequential }
}

fn msgp_options(g: &Global) -> MsgpOptions {
    MsgpOptions {
        transform: transform_options(g),
        min_sup_abs: g.min_sup_abs,
        contiguous_only: g.contiguous_only,
        all_seasons: g.all_seasons,
        min_items: g.min_items,
        prune_subsumed: g.prune_subsumed,
    }
}

fn ingest_config(g: &Global) -> Result<IngestConfig, Failure> {
    let mut config = match &g.config {
        Some(path) => Some(IngestConfig::from_toml_file(path)?),
        None => None,
    };
    if let Some(l) = g.cycle_length {
        config = Some(match config {
            Some(c) => IngestConfig { segmentation: Segmentation::CycleLength(l), ..c },
            None => IngestConfig::with_cycle_length(l),
        });
    }
    if let Some(col) = &g.label_column {
        config = Some(match config {
            Some(c) => IngestConfig { segmentation: Segmentation::LabelColumn(col.clone()), ..c },
            None => IngestConfig::with_label_column(col.clone()),
        });
    }
    let mut config =
        config.ok_or_else(|| Failure::Usage("one of --cycle-length, --label-column or --config is required".into()))?;
    if let Some(attrs) = &g.attributes {
        config.attributes = Some(attrs.clone());
    }
    if let Some(drop) = g.drop_missing {
        config.drop_missing = drop;
    }
    Ok(config)
}

fn load(g: &Global) -> Result<TemporalSequenceDatabase, Failure> {
    let input = g.input.as_ref().ok_or_else(|| Failure::Usage("--input is required".into()))?;
    Ok(load_csv(input, &ingest_config(g)?)?)
}

fn print_json<T: serde::Serialize>(out: &mut impl Write, value: &T) -> Outcome {
    let line = serde_json::to_string(value).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn csv_writer(out: &mut impl Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out as &mut dyn Write)
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Internal(format!("cannot write output: {e}"))
}

fn cmd_mine(g: &Global, out: &mut impl Write) -> Outcome {
    let db = load(g)?;
    let start = Instant::now();
    let patterns = mine_seasonal(&db, g.theta, &msgp_options(g))?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let (n_patterns, n_seasonality) = count_report(&patterns);
    let summary = Summary { n_patterns, n_seasonality, runtime_ms };
    let attrs = db.attributes();
    match g.output.unwrap_or(Output::Json) {
        Output::Json => {
            for p in &patterns {
                writeln!(out, "{}", seasonal_json(p, attrs)?)?;
            }
            print_json(out, &summary)?;
        }
        Output::Table => {
            write!(out, "{}", seasonal_table(&patterns, attrs))?;
            writeln!(out, "{n_patterns} item-sets, {n_seasonality} seasons, {runtime_ms:.3} ms")?;
        }
        Output::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["items", "season", "support", "per_item_support"]).map_err(csv_failure)?;
            for p in &patterns {
                let items: Vec<String> = p.items.iter().map(|i| i.key(attrs)).collect();
                let season: Vec<String> = p.season.iter().map(ToString::to_string).collect();
                let supports: Vec<String> = p.per_item_support.iter().map(ToString::to_string).collect();
                w.write_record([items.join(" "), season.join(" "), p.support.to_string(), supports.join(" ")])
                    .map_err(csv_failure)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_baseline(g: &Global, out: &mut impl Write) -> Outcome {
    let db = load(g)?;
    let start = Instant::now();
    let patterns = mine_temporal(&db, g.theta, &transform_options(g))?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let attrs = db.attributes();
    match g.output.unwrap_or(Output::Json) {
        Output::Json => {
            for p in &patterns {
                writeln!(out, "{}", temporal_json(p, attrs)?)?;
            }
            print_json(out, &serde_json::json!({ "n_patterns": patterns.len(), "runtime_ms": runtime_ms }))?;
        }
        Output::Table => {
            write!(out, "{}", temporal_table(&patterns, attrs))?;
            writeln!(out, "{} patterns, {runtime_ms:.3} ms", patterns.len())?;
        }
        Output::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["items", "support", "count"]).map_err(csv_failure)?;
            for p in &patterns {
                let items: Vec<String> = p.items.iter().map(|i| i.key(attrs)).collect();
                w.write_record([items.join(" "), p.support.to_string(), p.count.to_string()]).map_err(csv_failure)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_periodic(g: &Global, gamma_path: Option<&PathBuf>, min_ra: Option<f64>, out: &mut impl Write) -> Outcome {
    let (sequences, cycles): (Vec<TransactionSequence>, Option<usize>) = match gamma_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))?;
            (parse_gamma_json(&text)?, None)
        }
        None => {
            let db = load(g)?;
            (build_gamma(&db, &transform_options(g)).to_sequences(), Some(db.num_cycles()))
        }
    };
    let min_sup = match (g.min_sup_abs, cycles) {
        (Some(n), _) => n,
        (None, Some(m)) => {
            check_theta(g.theta)?;
            min_sup_for(g.theta, m)
        }
        (None, None) => return Err(Failure::Usage("--min-sup-abs is required with --gamma".into())),
    };
    let min_ra = min_ra.unwrap_or(1.0 / sequences.len().max(1) as f64);
    let patterns = mine(&sequences, min_sup, min_ra, &MineOptions { parallel: !g.sequential })?;
    match g.output.unwrap_or(Output::Json) {
        Output::Json => writeln!(out, "{}", periodic_json(&patterns, &sequences)?)?,
        Output::Table | Output::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["itemset", "cover", "supports", "ratio"]).map_err(csv_failure)?;
            for p in &patterns {
                let labels: Vec<String> = p.itemset.iter().map(ToString::to_string).collect();
                let cover: Vec<&str> = p.cover.iter().map(|&s| sequences[s].sid.as_str()).collect();
                let supports: Vec<String> = p.supports.iter().map(ToString::to_string).collect();
                w.write_record([labels.join(" "), cover.join(" "), supports.join(" "), p.ratio.to_string()])
                    .map_err(csv_failure)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_transform(g: &Global, out: &mut impl Write) -> Outcome {
    let db = load(g)?;
    let gamma = build_gamma(&db, &transform_options(g));
    match g.output.unwrap_or(Output::Table) {
        Output::Json => writeln!(out, "{}", gamma_json(&gamma)?)?,
        Output::Table => write!(out, "{}", gamma_text(&gamma))?,
        Output::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["item", "run", "labels"]).map_err(csv_failure)?;
            for e in &gamma.entries {
                for (k, r) in e.runs.iter().enumerate() {
                    let labels: Vec<String> = r.labels.iter().map(ToString::to_string).collect();
                    w.write_record([e.item.key(&gamma.attributes), k.to_string(), labels.join(" ")])
                        .map_err(csv_failure)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_bench(
    g: &Global,
    thetas: &[f64],
    algorithms: &[String],
    repetitions: usize,
    dest: Option<&PathBuf>,
    out: &mut impl Write,
) -> Outcome {
    let algorithms = algorithms.iter().map(|a| a.parse::<Algorithm>()).collect::<Result<Vec<_>, _>>()?;
    for &t in thetas {
        check_theta(t)?;
    }
    let db = load(g)?;
    let opts = SweepOptions { msgp: msgp_options(g), repetitions };
    let sweep = run_sweep(&db, thetas, &algorithms, &opts)?;
    for f in &sweep.failures {
        warn!("cell theta={} algorithm={} failed: {}", f.theta, f.algorithm, f.error);
    }
    match dest {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
            write_plot_data(&sweep.records, file)?;
        }
        None => write_plot_data(&sweep.records, &mut *out)?,
    }
    if sweep.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Data(format!("{} sweep cell(s) failed", sweep.failures.len())))
    }
}

fn parse_plant(text: &str, attributes: usize) -> Result<Plant, Failure> {
    let bad = || Failure::Usage(format!("bad --plant {text:?}; expected e.g. x1+,x3+@1-3:0.5"));
    let (items, rest) = text.split_once('@').ok_or_else(bad)?;
    let (window, probability) = rest.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = window.split_once('-').ok_or_else(bad)?;
    let items = items
        .split(',')
        .map(|item| {
            let item = item.trim();
            let (name, direction) = if let Some(n) = item.strip_suffix('+') {
                (n, Direction::Up)
            } else if let Some(n) = item.strip_suffix('-') {
                (n, Direction::Down)
            } else {
                return Err(bad());
            };
            let index: usize = name.strip_prefix('x').and_then(|i| i.parse().ok()).ok_or_else(bad)?;
            if index == 0 || index > attributes {
                return Err(Failure::Usage(format!("plant item {item} outside x1..x{attributes}")));
            }
            Ok((index - 1, direction))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Plant {
        items,
        window: (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        probability: probability.trim().parse().map_err(|_| bad())?,
    })
}

fn cmd_synth(g: &Global, cycles: usize, n_attributes: usize, plants: &[String], dest: Option<&PathBuf>, out: &mut impl Write) -> Outcome {
    let cycle_length = g.cycle_length.unwrap_or(12);
    let plants = plants.iter().map(|p| parse_plant(p, n_attributes)).collect::<Result<Vec<_>, _>>()?;
    let spec = SyntheticSpec { cycles, cycle_length, attributes: n_attributes, plants };
    let db = generate_synthetic(&spec, g.seed)?;
    match dest {
        Some(path) => {
            let sidecar = save_database(&db, path)?;
            writeln!(out, "wrote {} and {}", path.display(), sidecar.display())?;
        }
        None => write_csv(&db, &mut *out)?,
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Mine => cmd_mine(g, out),
        Command::MineBaseline => cmd_baseline(g, out),
        Command::MinePeriodic { gamma, min_ra } => cmd_periodic(g, gamma.as_ref(), *min_ra, out),
        Command::Transform => cmd_transform(g, out),
        Command::Bench { thetas, algorithms, repetitions, bench_output } => {
            cmd_bench(g, thetas, algorithms, *repetitions, bench_output.as_ref(), out)
        }
        Command::Synth { cycles, n_attributes, plant, out: dest } => {
            cmd_synth(g, *cycles, *n_attributes, plant, dest.as_ref(), out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = catch_unwind(AssertUnwindSafe(|| {
        let r = run(&cli, &mut out);
        r.and_then(|()| out.flush().map_err(Failure::from))
    }));
    let (code, message) = match result {
        Ok(Ok(())) => return ExitCode::SUCCESS,
        Ok(Err(Failure::Usage(m))) => (1, m),
        Ok(Err(Failure::Data(m))) => (2, m),
        Ok(Err(Failure::Internal(m))) => (3, m),
        Err(_) => (3, "internal error".to_string()),
    };
    eprintln!("sgp: {message}");
    ExitCode::from(code)
}
