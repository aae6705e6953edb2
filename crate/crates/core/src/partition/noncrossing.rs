//! Noncrossing partitions `NC_n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{enumerate_partitions, format_partition, Partition};
use crate::lattice::LatticeTables;
use crate::rational::Rational;

/// First crossing `(a, b, c, d)` with `a < b < c < d`, `a ~ c`, `b ~ d`, `a ≁ b`.
fn crossing(x: &Partition) -> Option<(usize, usize)> {
    let n = x.n();
    for a in 1..=n {
        for b in a + 1..=n {
            if x.block_of(a) == x.block_of(b) {
                continue;
            }
            for c in b + 1..=n {
                if x.block_of(c) != x.block_of(a) {
                    continue;
                }
                if (c + 1..=n).any(|d| x.block_of(d) == x.block_of(b)) {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

pub fn is_noncrossing(x: &Partition) -> bool {
    crossing(x).is_none()
}

/// Smallest noncrossing partition above `x + y`.
pub fn noncrossing_join(x: &Partition, y: &Partition) -> Partition {
    let mut j = x.join_unchecked(y);
    while let Some((a, b)) = crossing(&j) {
        let (ba, bb) = (j.block_of(a), j.block_of(b));
        let labels: Vec<usize> = j.rgs().iter().map(|&l| if l as usize == bb { ba } else { l as usize }).collect();
        j = Partition::from_labels(&labels);
    }
    j
}

/// `NC_n` with the noncrossing join and the metric `2|x∨y| - |x| - |y|`
/// derived from the rank `|x| = (n - #x)/(n - 1)` inherited from `P_n`.
/// These tables satisfy the lattice laws but, for `n ≥ 4`, not the metric
/// lattice axioms.
pub fn noncrossing_lattice(n: usize) -> LatticeTables {
    let parts: Vec<Partition> = enumerate_partitions(n).filter(is_noncrossing).collect();
    let index: BTreeMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let m = parts.len();
    let rank = |p: &Partition| {
        if n < 2 {
            Rational::from(0)
        } else {
            Rational::new((n - p.block_count()) as i64, (n - 1) as i64)
        }
    };
    let mut join = Vec::with_capacity(m * m);
    let mut metric = Vec::with_capacity(m * m);
    for x in &parts {
        for y in &parts {
            let j = noncrossing_join(x, y);
            metric.push(rank(&j) * 2 - rank(x) - rank(y));
            join.push(index[&j]);
        }
    }
    LatticeTables { labels: parts.iter().map(format_partition).collect(), join, metric }
}
