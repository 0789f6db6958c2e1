//! Breadth-first Apriori search shared by the periodic and temporal miners.
//!
//! Each node pairs a sorted itemset with a payload (its tid-lists). Level
//! `k+1` candidates join two level-`k` nodes sharing their first `k-1`
//! items; a candidate with an infrequent `k`-subset is dropped before its
//! payload is computed.

use std::hash::Hash;

use rustc_hash::FxHashSet;

use crate::exec::map_ordered;

/// Every frequent itemset reachable from `first`, level by level, each level
/// in lexicographic order. `first` must be sorted by item and hold only
/// frequent singletons. `compatible(itemset, item)` can veto extending an
/// itemset by `item`; `join` returns the payload of the union of two nodes,
/// or `None` when the union is infrequent.
pub(crate) fn levelwise<I, P, C, J>(
    first: Vec<(Vec<I>, P)>,
    parallel: bool,
    compatible: C,
    join: J,
) -> Vec<(Vec<I>, P)>
where
    I: Copy + Ord + Hash + Send + Sync,
    P: Send + Sync,
    C: Fn(&[I], I) -> bool,
    J: Fn(&P, &P) -> Option<P> + Sync + Send,
{
    let mut level = first;
    let mut out = Vec::new();
    while !level.is_empty() {
        let k = level[0].0.len();
        let known: FxHashSet<&[I]> = level.iter().map(|(items, _)| items.as_slice()).collect();
        let mut candidates = Vec::new();
        let mut sub = Vec::with_capacity(k);
        let mut start = 0;
        while start < level.len() {
            let prefix = &level[start].0[..k - 1];
            let mut end = start + 1;
            while end < level.len() && &level[end].0[..k - 1] == prefix {
                end += 1;
            }
            for i in start..end {
                for j in i + 1..end {
                    let base = &level[i].0;
                    let last = level[j].0[k - 1];
                    if !compatible(base, last) {
                        continue;
                    }
                    // Dropping either of the last two items gives a parent;
                    // check the remaining subsets.
                    let pruned = (0..k - 1).any(|skip| {
                        sub.clear();
                        sub.extend(base.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &x)| x));
                        sub.push(last);
                        !known.contains(sub.as_slice())
                    });
                    if !pruned {
                        candidates.push((i, j));
                    }
                }
            }
            start = end;
        }
        drop(known);
        let joined = map_ordered(&candidates, parallel, |&(i, j)| join(&level[i].1, &level[j].1));
        let next: Vec<(Vec<I>, P)> = candidates
            .iter()
            .zip(joined)
            .filter_map(|(&(i, j), payload)| {
                payload.map(|p| {
                    let mut items = Vec::with_capacity(k + 1);
                    items.extend_from_slice(&level[i].0);
                    items.push(level[j].0[k - 1]);
                    (items, p)
                })
            })
            .collect();
        out.append(&mut level);
        level = next;
    }
    out
}
