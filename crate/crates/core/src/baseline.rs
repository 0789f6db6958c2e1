//! Temporal gradual pattern miner used as the comparator.
//!
//! A couple of consecutive observations `(t, t+1)` supports a gradual
//! itemset when every item's direction holds from `t` to `t+1`; support is
//! the supporting fraction of all couples. Couples use the same strictness
//! and cycle-boundary adjacency as the run transform, so counts from the
//! two miners describe the same data.

use crate::error::{Error, Result};
use crate::gradual::{GradualItem, TransformOptions};
use crate::ingest::TemporalSequenceDatabase;
use crate::levelwise::levelwise;
use crate::msgp::check_theta;

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGradualPattern {
    /// Items in [`GradualItem::all`] order; never both directions of one attribute.
    pub items: Vec<GradualItem>,
    pub support: f64,
    /// Number of supporting couples.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Couples `(t, t+1)` considered under `opts`.
pub fn couples(db: &TemporalSequenceDatabase, opts: &TransformOptions) -> Vec<usize> {
    let l = db.cycle_length();
    (0..db.timeline_len().saturating_sub(1))
        .filter(|t| opts.cross_boundary || (t + 1) % l != 0)
        .collect()
}

pub fn mine_temporal(
    db: &TemporalSequenceDatabase,
    theta: f64,
    opts: &TransformOptions,
) -> Result<Vec<TemporalGradualPattern>> {
    check_theta(theta)?;
    let couples = couples(db, opts);
    let total = couples.len();
    if total == 0 {
        return Err(Error::InvalidDatabase("timeline has no consecutive couples".into()));
    }
    let need = ((theta * total as f64 - 1e-9).ceil().max(1.0)) as usize;

    let first: Vec<(Vec<GradualItem>, Bits)> = GradualItem::all(db.num_attributes())
        .into_iter()
        .map(|item| {
            let mut bits = Bits::zeros(total);
            for (c, &t) in couples.iter().enumerate() {
                if item.direction.holds(db.value(t, item.attribute), db.value(t + 1, item.attribute), opts.strict) {
                    bits.set(c);
                }
            }
            (vec![item], bits)
        })
        .filter(|(_, bits)| bits.count() >= need)
        .collect();

    let found = levelwise(
        first,
        opts.parallel,
        |items, last| items.iter().all(|it| it.attribute != last.attribute),
        |a, b| {
            let bits = a.and(b);
            (bits.count() >= need).then_some(bits)
        },
    );
    let out = found
        .into_iter()
        .map(|(items, bits)| {
            let count = bits.count();
            TemporalGradualPattern { items, support: count as f64 / total as f64, count }
        })
        .collect();
    Ok(out)
}
