//! Explicit constructions on partitions: nearest singular partitions, the
//! paired partition `x*`, and the selector repair/trim/χ witnesses.
//!
//! Whenever a construction has a free choice it keeps or adds minimum elements.

use alloc::vec::Vec;

use super::{ElementSet, Partition, PartitionError};
use crate::rational::Rational;

/// `d(x, Σ_n) = max([x] - 1, 0)/(n - 1)`.
pub fn dist_to_singular(x: &Partition) -> Result<Rational, PartitionError> {
    let n = x.n();
    if n < 2 {
        return Err(PartitionError::DegenerateLattice);
    }
    let large = x.large_blocks();
    Ok(Rational::new(large.saturating_sub(1) as i64, (n - 1) as i64))
}

/// The singular partition whose basic block is the union of the non-singleton
/// blocks of `x`; it realizes [`dist_to_singular`].
pub fn nearest_singular(x: &Partition) -> Partition {
    let b = x.blocks().into_iter().filter(|b| b.len() >= 2).fold(ElementSet::EMPTY, ElementSet::union);
    Partition::singular(x.n(), b)
}

fn min_two(b: ElementSet) -> (usize, usize) {
    let mut it = b.iter();
    (it.next().unwrap(), it.next().unwrap())
}

/// The paired partition `x*`.
///
/// Blocks of size at least two are taken in order of their minimum `a_i`;
/// `b_i` is the second smallest element and `R_i` the rest. Consecutive pairs
/// swap their second elements: `{a_{2i-1}, b_{2i}} ∪ R_{2i}` and
/// `{a_{2i}, b_{2i-1}} ∪ R_{2i-1}`. With an odd number of such blocks the last
/// one is kept.
pub fn star_partition(x: &Partition) -> Result<Partition, PartitionError> {
    let large: Vec<ElementSet> = x.blocks().into_iter().filter(|b| b.len() >= 2).collect();
    if large.is_empty() {
        return Err(PartitionError::SingularInput);
    }
    let n = x.n();
    let mut label: Vec<usize> = (0..n).map(|e| n + e).collect();
    let mut put = |set: ElementSet, id: usize| {
        for e in set.iter() {
            label[e - 1] = id;
        }
    };
    for (i, pair) in large.chunks(2).enumerate() {
        match pair {
            [p, q] => {
                let (ap, bp) = min_two(*p);
                let (aq, bq) = min_two(*q);
                let rp = ElementSet(p.0 & !(1 << (ap - 1)) & !(1 << (bp - 1)));
                let rq = ElementSet(q.0 & !(1 << (aq - 1)) & !(1 << (bq - 1)));
                put(ElementSet::from_elements([ap, bq]).union(rq), 2 * i);
                put(ElementSet::from_elements([aq, bp]).union(rp), 2 * i + 1);
            }
            [p] => put(*p, 2 * i),
            _ => unreachable!(),
        }
    }
    Ok(Partition::from_labels(&label))
}

fn require_singular(z: &Partition) -> Result<ElementSet, PartitionError> {
    z.basic_block().ok_or(PartitionError::NotSingular)
}

/// Grows the singular `y` into a singular `z ≥ y` with `x + z = 1` by adding
/// the minimum of every `x`-block that `B_y` misses.
pub fn selector_repair(x: &Partition, y: &Partition) -> Result<Partition, PartitionError> {
    x.same_n(y)?;
    let mut b = require_singular(y)?;
    for block in x.blocks() {
        if block.intersection(b).is_empty() {
            b.insert(block.min().unwrap());
        }
    }
    Ok(Partition::singular(x.n(), b))
}

/// The selector `w ∈ Γ(y)` close to the singular `z`: from each `y`-block
/// meeting `B_z` twice or more keep only the smallest common element, and add
/// the minimum of each `y`-block that `B_z` misses.
pub fn chi_witness(y: &Partition, z: &Partition) -> Result<Partition, PartitionError> {
    y.same_n(z)?;
    let bz = require_singular(z)?;
    let mut bw = ElementSet::EMPTY;
    for block in y.blocks() {
        let common = block.intersection(bz);
        bw.insert(common.min().unwrap_or_else(|| block.min().unwrap()));
    }
    Ok(Partition::singular(y.n(), bw))
}

/// For singular `z` with `x + z = 1`, keeps the smallest element of `B_z` in
/// each `x`-block, giving a selector `w ∈ Γ(x)` below `z`.
pub fn selector_trim(x: &Partition, z: &Partition) -> Result<Partition, PartitionError> {
    x.same_n(z)?;
    let bz = require_singular(z)?;
    if x.incidence(bz) != x.block_count() {
        return Err(PartitionError::NotCovering);
    }
    let bw = ElementSet::from_elements(x.blocks().iter().map(|b| b.intersection(bz).min().unwrap()));
    Ok(Partition::singular(x.n(), bw))
}
