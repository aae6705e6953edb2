//! Small helpers on raw partitions shared by the checks.

use metriclat_core::partition::{enumerate_partitions, format_partition, Partition};
use metriclat_core::Rational;

pub(crate) fn fp(x: &Partition) -> String {
    format_partition(x)
}

pub(crate) fn all(n: usize) -> Vec<Partition> {
    enumerate_partitions(n).collect()
}

/// `n - 1`, the denominator of every distance in `P_n`.
pub(crate) fn den(n: usize) -> i64 {
    n as i64 - 1
}

pub(crate) fn over(v: i64, n: usize) -> Rational {
    Rational::new(v, den(n))
}

pub(crate) fn blocks(x: &Partition) -> i64 {
    x.block_count() as i64
}

/// `φ(x,y) · (n-1)` minimized over `universe`, with the smallest minimizer.
/// Works on ground sets too large for lattice tables.
pub(crate) fn phi_raw(x: &Partition, y: &Partition, universe: &[Partition]) -> (i64, usize) {
    let (bx, by) = (blocks(x), blocks(y));
    let bxy = blocks(&x.join(y).expect("same n"));
    let mut best = (i64::MAX, 0);
    for (i, z) in universe.iter().enumerate() {
        let base = bxy + blocks(z) - bx - by;
        let v = base
            .max(0)
            .max(bx - blocks(&x.join(z).expect("same n")))
            .max(by - blocks(&y.join(z).expect("same n")));
        if v < best.0 {
            best = (v, i);
            if v == 0 {
                break;
            }
        }
    }
    best
}
