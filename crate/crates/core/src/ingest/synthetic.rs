use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TemporalSequenceDatabase;
use crate::error::{Error, Result};
use crate::gradual::Direction;

/// A co-variation forced into randomly chosen cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct Plant {
    /// Attribute index and direction for each planted item.
    pub items: Vec<(usize, Direction)>,
    /// First and last period label of the window, 1-based inclusive.
    pub window: (u32, u32),
    /// Per-cycle probability that the plant is applied.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub cycles: usize,
    pub cycle_length: usize,
    pub attributes: usize,
    pub plants: Vec<Plant>,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSynthetic(msg));
        if self.cycles == 0 || self.cycle_length < 2 || self.attributes == 0 {
            return bad(format!(
                "need m >= 1, l >= 2 and n >= 1, got m={} l={} n={}",
                self.cycles, self.cycle_length, self.attributes
            ));
        }
        for plant in &self.plants {
            let (start, end) = plant.window;
            if start < 1 || end as usize > self.cycle_length || start >= end {
                return bad(format!(
                    "window d{start}..d{end} must span at least two labels within 1..={}",
                    self.cycle_length
                ));
            }
            if !(0.0..=1.0).contains(&plant.probability) {
                return bad(format!("probability {} outside [0, 1]", plant.probability));
            }
            if plant.items.is_empty() {
                return bad("plant has no items".into());
            }
            if let Some((a, _)) = plant.items.iter().find(|(a, _)| *a >= self.attributes) {
                return bad(format!("plant attribute {a} out of range"));
            }
        }
        Ok(())
    }
}

/// Seeded synthetic database. Attributes are named `x1..xn`.
///
/// Every attribute is a random walk starting at 0 whose steps are uniform
/// in `[-1, 1)`. When a plant fires in a cycle, each planted attribute
/// takes steps of magnitude in `[0.05, 1)` in its direction from the window
/// start to the window end, then one step against it, so the forced run
/// cannot merge with a neighbouring one. Cycles are drawn independently per
/// plant; overlapping plants on the same attribute resolve to the later
/// plant's step.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<TemporalSequenceDatabase> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, l, n) = (spec.cycles, spec.cycle_length, spec.attributes);
    let len = m * l;

    // forced[t * n + a]: sign of the step into position t for attribute a.
    let mut forced = vec![0i8; len * n];
    for plant in &spec.plants {
        let (start, end) = (plant.window.0 as usize - 1, plant.window.1 as usize - 1);
        for cycle in 0..m {
            if !rng.gen_bool(plant.probability) {
                continue;
            }
            let base = cycle * l;
            for &(attr, dir) in &plant.items {
                let sign = dir.sign();
                for pos in start + 1..=end {
                    forced[(base + pos) * n + attr] = sign;
                }
                let after = base + end + 1;
                if after < len {
                    forced[after * n + attr] = -sign;
                }
            }
        }
    }

    let mut values = vec![0.0f64; len * n];
    for t in 1..len {
        for a in 0..n {
            let step = match forced[t * n + a] {
                0 => rng.gen_range(-1.0..1.0),
                s => f64::from(s) * rng.gen_range(0.05..1.0),
            };
            values[t * n + a] = values[(t - 1) * n + a] + step;
        }
    }
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    TemporalSequenceDatabase::new(names, l, values)
}
