//! Partitions of `{0..n}` (written `Π_n`) and the embeddings
//! `φ_n^{kn}: Π_n → Π_{kn}`.
//!
//! `Π_n` is stored as a partition of `{1..n+1}`: element `e` of `{0..n}` sits at
//! position `e + 1`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{format_blocks, parse_blocks, partition_metric, Partition, PartitionError};
use crate::rational::Rational;

/// Builds an element of `Π_n` from blocks over `{0..n}`.
pub fn pi_from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition, PartitionError> {
    if !blocks.iter().flatten().any(|&e| e == 0) {
        return Err(PartitionError::BadIndexing(String::from("element 0 missing")));
    }
    let shifted: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().map(|e| e + 1).collect()).collect();
    Partition::from_blocks(n + 1, &shifted)
}

/// Parses block syntax over `{0..n}`, e.g. `0|1,2|3`.
pub fn parse_pi(text: &str, n: usize) -> Result<Partition, PartitionError> {
    pi_from_blocks(n, &parse_blocks(text, 0)?)
}

/// Block syntax over `{0..n}`.
pub fn format_pi(x: &Partition) -> String {
    format_blocks(x, 1)
}

/// `φ_n^{kn}(π)`: each block `B` of `π` avoiding 0 is spread into the `k`
/// blocks `{kb - j : b ∈ B}` for `j = 0..k-1`; everything else (including 0)
/// forms one block.
pub fn bjorner_embed(pi: &Partition, k: usize) -> Result<Partition, PartitionError> {
    if k == 0 {
        return Err(PartitionError::BadIndexing(String::from("k must be at least 1")));
    }
    let n = pi.n() - 1;
    let m = k * n;
    if m + 1 > super::MAX_N {
        return Err(PartitionError::BadSize(m + 1));
    }
    // label[e] for e in {0..m}; 0 marks the block of 0.
    let mut label = vec![0usize; m + 1];
    let zero_block = pi.block_of(1);
    for (i, block) in pi.blocks().iter().enumerate() {
        if i == zero_block {
            continue;
        }
        for pos in block.iter() {
            let b = pos - 1;
            for j in 0..k {
                label[k * b - j] = 1 + i * k + j;
            }
        }
    }
    Ok(Partition::from_labels(&label))
}

/// `{{0}} ∪ {{2i-1, 2i}}` in `Π_{2n}`.
pub fn bjorner_pairing(n: usize) -> Partition {
    let mut label = vec![0usize; 2 * n + 1];
    for e in 1..=2 * n {
        label[e] = e.div_ceil(2);
    }
    Partition::from_labels(&label)
}

/// `min_i d(x_i, y)`.
pub fn psi_min_distance(witnesses: &[Partition], y: &Partition) -> Result<Rational, PartitionError> {
    let mut best: Option<Rational> = None;
    for x in witnesses {
        let d = partition_metric(x, y)?;
        best = Some(best.map_or(d, |b| b.min(d)));
    }
    best.ok_or(PartitionError::EmptySubset)
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_partitions;
    use super::*;

    #[test]
    fn embedding_examples() {
        let pi = parse_pi("0|1,2", 2).unwrap();
        assert_eq!(format_pi(&bjorner_embed(&pi, 2).unwrap()), "0|1,3|2,4");
        let bottom = parse_pi("0|1|2", 2).unwrap();
        let img = bjorner_embed(&bottom, 2).unwrap();
        assert_eq!(img, Partition::zero(5));
        assert!(matches!(parse_pi("1|2", 2), Err(PartitionError::BadIndexing(_))));
        assert_eq!(format_pi(&bjorner_pairing(2)), "0|1,2|3,4");
    }

    #[test]
    fn embedding_is_isometric_and_preserves_joins() {
        for n in 1..=4 {
            for k in 1..=3 {
                let all: Vec<Partition> = enumerate_partitions(n + 1).collect();
                let img: Vec<Partition> = all.iter().map(|x| bjorner_embed(x, k).unwrap()).collect();
                for (a, x) in all.iter().enumerate() {
                    for (b, y) in all.iter().enumerate() {
                        let j = bjorner_embed(&x.join(y).unwrap(), k).unwrap();
                        assert_eq!(j, img[a].join(&img[b]).unwrap());
                        if n >= 1 {
                            assert_eq!(partition_metric(x, y).unwrap(), partition_metric(&img[a], &img[b]).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn paired_partition_is_at_distance_one_half() {
        for n in 2..=4 {
            let z = bjorner_pairing(n);
            for x in enumerate_partitions(n + 1) {
                let img = bjorner_embed(&x, 2).unwrap();
                assert_eq!(partition_metric(&img, &z).unwrap(), Rational::new(1, 2));
            }
        }
    }

    #[test]
    fn psi_examples() {
        let w = [Partition::zero(4)];
        assert_eq!(psi_min_distance(&w, &Partition::one(4)).unwrap(), Rational::from(1));
        let all: Vec<Partition> = enumerate_partitions(4).collect();
        for y in &all {
            assert_eq!(psi_min_distance(&all, y).unwrap(), Rational::from(0));
        }
        assert_eq!(psi_min_distance(&[], &all[0]), Err(PartitionError::EmptySubset));
    }
}
