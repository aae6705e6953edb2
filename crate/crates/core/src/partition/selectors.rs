//! Selectors: singular partitions whose basic block picks one element from
//! every block of a given partition, and the Hausdorff distance between
//! selector sets.

use alloc::vec;
use alloc::vec::Vec;

use super::{metric_numerator, ElementSet, Partition, PartitionError};
use crate::rational::Rational;

/// The selector set `Γ(x)`, enumerated lazily.
#[derive(Debug, Clone)]
pub struct SelectorSet {
    base: Partition,
    blocks: Vec<Vec<usize>>,
}

/// `Γ(x)`.
pub fn selectors(x: &Partition) -> SelectorSet {
    let blocks = x.blocks().into_iter().map(|b| b.to_vec()).collect();
    SelectorSet { base: x.clone(), blocks }
}

impl SelectorSet {
    pub fn base(&self) -> &Partition {
        &self.base
    }

    /// Number of distinct selectors. Every choice of representatives gives a
    /// different partition, except for `x = 1` where all choices collapse to
    /// the zero partition.
    pub fn len(&self) -> usize {
        if self.blocks.len() == 1 {
            1
        } else {
            self.blocks.iter().map(Vec::len).product()
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Basic blocks of the selectors, in odometer order over the choices
    /// (first block varies slowest).
    pub fn basic_blocks(&self) -> impl Iterator<Item = ElementSet> + '_ {
        let k = self.blocks.len();
        let mut idx = vec![0usize; k];
        let mut done = false;
        let single = k == 1;
        core::iter::from_fn(move || {
            if done {
                return None;
            }
            let set = if single {
                ElementSet::from_elements([1])
            } else {
                ElementSet::from_elements((0..k).map(|i| self.blocks[i][idx[i]]))
            };
            done = single;
            if !single {
                let mut i = k;
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < self.blocks[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
            Some(set)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Partition> + '_ {
        let n = self.base.n();
        self.basic_blocks().map(move |b| Partition::singular(n, b))
    }

    pub fn contains(&self, y: &Partition) -> bool {
        is_selector(&self.base, y)
    }
}

/// Combinatorial test: `y` is singular and its basic block meets every block
/// of `x` exactly once.
pub fn is_selector(x: &Partition, y: &Partition) -> bool {
    if x.n() != y.n() {
        return false;
    }
    match y.basic_block() {
        None => false,
        Some(b) => b.len() == x.block_count() && x.incidence(b) == x.block_count(),
    }
}

/// Metric test: `x + y = 1` and `|x| + |y| = 1`. This characterizes
/// selectors only among modular `y` (for instance `13|24` passes it against
/// `12|3|4` without being singular), so callers restrict `y` to `μ(P_n)`.
pub fn is_selector_metric(x: &Partition, y: &Partition) -> bool {
    x.n() == y.n() && x.join_unchecked(y).block_count() == 1 && x.block_count() + y.block_count() == x.n() + 1
}

/// `d(z,w) = (#x + #y - 2 max{1, |B_z ∩ B_w|})/(n-1)` for `z ∈ Γ(x)`,
/// `w ∈ Γ(y)`, given as basic blocks (`#x = |B_z|`, `#y = |B_w|`).
pub fn selector_distance(n: usize, bz: ElementSet, bw: ElementSet) -> Rational {
    let common = bz.intersection(bw).len().max(1);
    Rational::new((bz.len() + bw.len() - 2 * common) as i64, (n - 1) as i64)
}

/// `γ(x,y) = min_{z∈Γ(x)} max_{w∈Γ(y)} max{1, |B_z ∩ B_w|}`.
///
/// Since `max_w |B_z ∩ B_w| = i(y, B_z)`, this is the least number of
/// `y`-blocks that meet every `x`-block, found by branch and bound.
pub fn gamma(x: &Partition, y: &Partition) -> Result<usize, PartitionError> {
    x.same_n(y)?;
    let xb = x.blocks();
    let yb = y.blocks();
    // cover[j]: bitmask of x-blocks met by y-block j.
    let cover: Vec<u64> = yb
        .iter()
        .map(|&yj| {
            xb.iter()
                .enumerate()
                .filter(|(_, &xi)| !xi.intersection(yj).is_empty())
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let all = if xb.len() == 64 { u64::MAX } else { (1u64 << xb.len()) - 1 };
    let mut best = greedy_cover(&cover, all);
    branch(&cover, all, 0, &mut best);
    Ok(best)
}

fn greedy_cover(cover: &[u64], mut left: u64) -> usize {
    let mut used = 0;
    while left != 0 {
        let j = (0..cover.len()).max_by_key(|&j| ((cover[j] & left).count_ones(), usize::MAX - j)).unwrap();
        left &= !cover[j];
        used += 1;
    }
    used
}

fn branch(cover: &[u64], left: u64, used: usize, best: &mut usize) {
    if left == 0 {
        *best = (*best).min(used);
        return;
    }
    let widest = cover.iter().map(|c| (c & left).count_ones()).max().unwrap_or(0) as usize;
    let bound = (left.count_ones() as usize).div_ceil(widest.max(1));
    if used + bound >= *best {
        return;
    }
    // Branch on the uncovered x-block with the fewest candidate y-blocks.
    let target = (0..64)
        .filter(|&i| left >> i & 1 == 1)
        .min_by_key(|&i| cover.iter().filter(|&&c| c >> i & 1 == 1).count())
        .unwrap();
    let mut cands: Vec<usize> = (0..cover.len()).filter(|&j| cover[j] >> target & 1 == 1).collect();
    cands.sort_by_key(|&j| core::cmp::Reverse((cover[j] & left).count_ones()));
    for j in cands {
        branch(cover, left & !cover[j], used + 1, best);
    }
}

/// `γ(x,y)` straight from the definition over explicit selector pairs.
pub fn gamma_brute_force(x: &Partition, y: &Partition) -> Result<usize, PartitionError> {
    x.same_n(y)?;
    let gy: Vec<ElementSet> = selectors(y).basic_blocks().collect();
    Ok(selectors(x)
        .basic_blocks()
        .map(|bz| gy.iter().map(|&bw| bz.intersection(bw).len().max(1)).max().unwrap())
        .min()
        .unwrap())
}

/// `d_Haus(Γ(x), Γ(y)) = (#x + #y - 2 min{γ(x,y), γ(y,x)})/(n-1)`.
pub fn hausdorff_selectors(x: &Partition, y: &Partition) -> Result<Rational, PartitionError> {
    x.same_n(y)?;
    let n = x.n();
    if n < 2 {
        return Err(PartitionError::DegenerateLattice);
    }
    let g = gamma(x, y)?.min(gamma(y, x)?);
    Ok(Rational::new((x.block_count() + y.block_count()) as i64 - 2 * g as i64, (n - 1) as i64))
}

/// Hausdorff distance between the explicit selector sets, with every
/// distance computed by the partition metric itself.
pub fn hausdorff_brute_force(x: &Partition, y: &Partition) -> Result<Rational, PartitionError> {
    x.same_n(y)?;
    let n = x.n();
    if n < 2 {
        return Err(PartitionError::DegenerateLattice);
    }
    let gx: Vec<Partition> = selectors(x).iter().collect();
    let gy: Vec<Partition> = selectors(y).iter().collect();
    let dist: Vec<Vec<usize>> = gx.iter().map(|z| gy.iter().map(|w| metric_numerator(z, w)).collect()).collect();
    let a = dist.iter().map(|row| *row.iter().min().unwrap()).max().unwrap();
    let b = (0..gy.len()).map(|j| dist.iter().map(|row| row[j]).min().unwrap()).max().unwrap();
    Ok(Rational::new(a.max(b) as i64, (n - 1) as i64))
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_partitions, enumerate_singular, parse_partition, partition_metric};
    use super::*;

    fn p(s: &str, n: usize) -> Partition {
        parse_partition(s, n).unwrap()
    }

    #[test]
    fn trivial_selector_sets() {
        for n in 2..=5 {
            let g1: Vec<Partition> = selectors(&Partition::one(n)).iter().collect();
            assert_eq!(g1, vec![Partition::zero(n)]);
            let g0: Vec<Partition> = selectors(&Partition::zero(n)).iter().collect();
            assert_eq!(g0, vec![Partition::one(n)]);
        }
        assert_eq!(selectors(&p("1,2|3,4", 4)).len(), 4);
    }

    #[test]
    fn characterizations_agree() {
        for n in 2..=6 {
            let all: Vec<Partition> = enumerate_partitions(n).collect();
            for x in &all {
                let listed: Vec<Partition> = selectors(x).iter().collect();
                assert_eq!(listed.len(), selectors(x).len());
                let by_scan: Vec<&Partition> =
                    all.iter().filter(|y| y.is_singular() && is_selector_metric(x, y)).collect();
                assert_eq!(by_scan.len(), listed.len());
                for y in &all {
                    if y.is_singular() {
                        assert_eq!(is_selector(x, y), is_selector_metric(x, y), "{x} {y}");
                    } else {
                        assert!(!is_selector(x, y));
                    }
                }
                for y in &listed {
                    assert_eq!(partition_metric(x, y).unwrap(), Rational::from(1));
                }
            }
        }
    }

    #[test]
    fn pairwise_selector_formula_is_the_metric() {
        for n in 2..=5 {
            for x in enumerate_partitions(n) {
                for y in enumerate_partitions(n) {
                    for bz in selectors(&x).basic_blocks() {
                        for bw in selectors(&y).basic_blocks() {
                            let z = Partition::singular(n, bz);
                            let w = Partition::singular(n, bw);
                            assert_eq!(selector_distance(n, bz, bw), partition_metric(&z, &w).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hausdorff_of_the_p6_pair() {
        let x = p("1,4|2,3|5,6", 6);
        let y = p("1,2|4,5|3|6", 6);
        assert_eq!(gamma(&x, &y).unwrap(), 2);
        assert_eq!(gamma(&y, &x).unwrap(), 2);
        assert_eq!(hausdorff_selectors(&x, &y).unwrap(), Rational::new(3, 5));
        assert_eq!(hausdorff_brute_force(&x, &y).unwrap(), Rational::new(3, 5));
    }

    #[test]
    fn gamma_matches_brute_force() {
        for n in 1..=5 {
            let all: Vec<Partition> = enumerate_partitions(n).collect();
            for x in &all {
                assert_eq!(gamma(x, x).unwrap(), x.block_count());
                assert_eq!(gamma(x, &Partition::one(n)).unwrap(), 1);
                for y in &all {
                    let g = gamma(x, y).unwrap();
                    assert_eq!(g, gamma_brute_force(x, y).unwrap(), "{x} {y}");
                    assert!(g >= x.join(y).unwrap().block_count());
                }
            }
        }
    }

    #[test]
    fn reduction_to_incidence() {
        // max_w |B_z ∩ B_w| = i(y, B_z), clamped below by 1.
        for n in 2..=5 {
            for x in enumerate_partitions(n) {
                for y in enumerate_partitions(n) {
                    let gy: Vec<ElementSet> = selectors(&y).basic_blocks().collect();
                    for bz in selectors(&x).basic_blocks() {
                        let m = gy.iter().map(|&bw| bz.intersection(bw).len().max(1)).max().unwrap();
                        assert_eq!(m, y.incidence(bz));
                    }
                }
            }
        }
    }

    #[test]
    fn hausdorff_matches_brute_force() {
        for n in 2..=5 {
            for x in enumerate_partitions(n) {
                assert_eq!(hausdorff_selectors(&x, &x).unwrap(), Rational::from(0));
                for y in enumerate_partitions(n) {
                    assert_eq!(hausdorff_selectors(&x, &y).unwrap(), hausdorff_brute_force(&x, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn singular_partitions_are_selectors_of_something() {
        for n in 2..=6 {
            for y in enumerate_singular(n) {
                assert!(enumerate_partitions(n).any(|x| is_selector(&x, &y)));
            }
        }
    }
}
