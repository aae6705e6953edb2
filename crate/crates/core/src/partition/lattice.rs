//! `P_n` as a [`FiniteMetricLattice`], with the map back to partitions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{enumerate_partitions, format_partition, metric_numerator, Partition};
use crate::lattice::{FiniteMetricLattice, LatticeError, LatticeTables};
use crate::rational::Rational;

/// The partition lattice `P_n` with `d(x,y) = (#x + #y - 2#(x+y))/(n-1)`.
#[derive(Debug, Clone)]
pub struct PartitionLattice {
    n: usize,
    lattice: FiniteMetricLattice,
    parts: Vec<Partition>,
    lookup: BTreeMap<Partition, usize>,
}

impl PartitionLattice {
    /// Builds and validates `P_n`. Tables are quadratic in Bell(n), so this is
    /// meant for `2 ≤ n ≤ 7`.
    pub fn new(n: usize) -> Result<Self, LatticeError> {
        if n < 2 {
            return Err(LatticeError::Shape("P_n needs n >= 2"));
        }
        let parts: Vec<Partition> = enumerate_partitions(n).collect();
        let m = parts.len();
        let labels = parts.iter().map(format_partition).collect();
        let input: BTreeMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut join = Vec::with_capacity(m * m);
        let mut metric = Vec::with_capacity(m * m);
        let den = (n - 1) as i64;
        for x in &parts {
            for y in &parts {
                join.push(input[&x.join_unchecked(y)]);
                metric.push(Rational::new(metric_numerator(x, y) as i64, den));
            }
        }
        let lattice = FiniteMetricLattice::build(LatticeTables { labels, join, metric })?;
        let by_label: BTreeMap<String, &Partition> = parts.iter().map(|p| (format_partition(p), p)).collect();
        let sorted: Vec<Partition> = (0..m).map(|i| by_label[lattice.label(i)].clone()).collect();
        let lookup = sorted.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(PartitionLattice { n, lattice, parts: sorted, lookup })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &FiniteMetricLattice {
        &self.lattice
    }

    /// Partitions in lattice index order.
    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.parts[i]
    }

    pub fn index_of(&self, x: &Partition) -> Option<usize> {
        self.lookup.get(x).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_singular, parse_partition};

    #[test]
    fn p4_is_valid_and_sorted() {
        let p = PartitionLattice::new(4).unwrap();
        let l = p.lattice();
        assert_eq!(l.len(), 15);
        assert_eq!(p.partition(0), &Partition::zero(4));
        assert_eq!(p.partition(14), &Partition::one(4));
        for i in 0..15 {
            for j in 0..15 {
                assert_eq!(l.join(i, j), p.index_of(&p.partition(i).join(p.partition(j)).unwrap()).unwrap());
                assert_eq!(l.meet(i, j), p.index_of(&p.partition(i).meet(p.partition(j)).unwrap()).unwrap());
                if l.leq(i, j) {
                    assert!(i <= j);
                }
            }
        }
    }

    #[test]
    fn p4_complement_pair() {
        let p = PartitionLattice::new(4).unwrap();
        let l = p.lattice();
        let x = p.index_of(&parse_partition("1,2|3,4", 4).unwrap()).unwrap();
        let y = p.index_of(&parse_partition("1,3|2,4", 4).unwrap()).unwrap();
        assert_eq!(l.d(x, y), Rational::new(2, 3));
        assert_eq!(l.dprime(x, y), Rational::new(2, 3));
        assert_eq!(l.norm(x) + l.norm(y), Rational::new(4, 3));
        assert_eq!(l.norm(l.join(x, y)) + l.norm(l.meet(x, y)), Rational::from(1));
        assert_eq!(l.delta_quasimetric(x, y), Rational::new(4, 3));
        assert_eq!(l.phi_defect(x, y).0, Rational::new(1, 3));
        assert!(l.complements(x).contains(&y));
        assert!(!l.is_weak_complement(x, y));
    }

    #[test]
    fn modular_elements_are_singular() {
        for n in 2..=6 {
            let p = PartitionLattice::new(n).unwrap();
            let mut modular: Vec<Partition> =
                p.lattice().modular_elements().iter().map(|&i| p.partition(i).clone()).collect();
            let mut singular: Vec<Partition> = enumerate_singular(n).collect();
            modular.sort();
            singular.sort();
            assert_eq!(modular, singular);
        }
    }
}
