use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sgp_core::baseline::mine_temporal;
use sgp_core::gradual::{build_gamma, Direction, TransformOptions};
use sgp_core::ingest::{generate_synthetic, Plant, SyntheticSpec};
use sgp_core::msgp::{mine_seasonal, min_sup_for, MsgpOptions};
use sgp_core::periodic::{mine, MineOptions};
use sgp_core::TemporalSequenceDatabase;

fn database(cycles: usize, attributes: usize) -> TemporalSequenceDatabase {
    let spec = SyntheticSpec {
        cycles,
        cycle_length: 12,
        attributes,
        plants: vec![
            Plant { items: vec![(0, Direction::Up), (1, Direction::Up)], window: (1, 4), probability: 0.7 },
            Plant { items: vec![(2, Direction::Down), (5, Direction::Up)], window: (7, 10), probability: 0.6 },
        ],
    };
    generate_synthetic(&spec, 1).unwrap()
}

fn modes() -> [(&'static str, bool); 2] {
    [("sequential", false), ("parallel", true)]
}

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_gamma");
    for (cycles, attributes) in [(20, 8), (200, 32)] {
        let db = database(cycles, attributes);
        for (name, parallel) in modes() {
            let opts = TransformOptions { parallel, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(name, format!("{cycles}x{attributes}")), &db, |b, db| {
                b.iter(|| build_gamma(db, &opts))
            });
        }
    }
    group.finish();
}

fn periodic(c: &mut Criterion) {
    let mut group = c.benchmark_group("mine");
    let db = database(100, 16);
    let sequences = build_gamma(&db, &TransformOptions::default()).to_sequences();
    let min_ra = 1.0 / sequences.len() as f64;
    for theta in [0.05, 0.2] {
        let min_sup = min_sup_for(theta, db.num_cycles());
        for (name, parallel) in modes() {
            group.bench_with_input(BenchmarkId::new(name, theta), &sequences, |b, s| {
                b.iter(|| mine(s, min_sup, min_ra, &MineOptions { parallel }).unwrap())
            });
        }
    }
    group.finish();
}

fn end_to_end(c: &mut Criterion) {
    let db = database(20, 8);
    for theta in [0.05, 0.15, 0.25] {
        let mut group = c.benchmark_group(format!("sweep_theta_{theta}"));
        for (name, parallel) in modes() {
            let transform = TransformOptions { parallel, ..Default::default() };
            let msgp = MsgpOptions { transform, ..Default::default() };
            group.bench_function(BenchmarkId::new("msgp", name), |b| b.iter(|| mine_seasonal(&db, theta, &msgp).unwrap()));
            group.bench_function(BenchmarkId::new("temporal", name), |b| {
                b.iter(|| mine_temporal(&db, theta, &transform).unwrap())
            });
        }
        group.finish();
    }
}

criterion_group!(benches, transform, periodic, end_to_end);
criterion_main!(benches);
