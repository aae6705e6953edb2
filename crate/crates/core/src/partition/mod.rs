//! Set partitions of `{1..n}` and the partition lattice `P_n`.
//!
//! A partition is stored as a restricted growth string: `rgs[i]` is the block
//! id of element `i+1`, block ids appear in order of first occurrence, so
//! blocks are numbered by their minimum element.

mod bjorner;
mod constructions;
mod lattice;
mod noncrossing;
mod selectors;

pub use bjorner::{bjorner_embed, bjorner_pairing, format_pi, parse_pi, pi_from_blocks, psi_min_distance};
pub use constructions::{
    chi_witness, dist_to_singular, nearest_singular, selector_repair, selector_trim, star_partition,
};
pub use lattice::PartitionLattice;
pub use noncrossing::{is_noncrossing, noncrossing_join, noncrossing_lattice};
pub use selectors::{
    gamma, gamma_brute_force, hausdorff_brute_force, hausdorff_selectors, is_selector, is_selector_metric,
    selector_distance, selectors, SelectorSet,
};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use thiserror::Error;

use crate::rational::Rational;

/// Largest ground set supported (element sets are 64-bit masks).
pub const MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("ground sets differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("metric undefined on P_1 (denominator n-1 = 0)")]
    DegenerateLattice,
    #[error("construction needs at least one block of size >= 2")]
    SingularInput,
    #[error("second argument must be singular")]
    NotSingular,
    #[error("x + z is not the top partition")]
    NotCovering,
    #[error("restriction to the empty set")]
    EmptySubset,
    #[error("bad Björner indexing: {0}")]
    BadIndexing(String),
    #[error("ground set size {0} outside 1..=64")]
    BadSize(usize),
}

/// A subset of `{1..n}` as a bitmask (bit `i-1` is element `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        let mut m = 0u64;
        for e in elems {
            debug_assert!((1..=MAX_N).contains(&e));
            m |= 1 << (e - 1);
        }
        ElementSet(m)
    }

    /// `{1..n}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e >= 1 && self.0 >> (e - 1) & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn intersection(self, o: ElementSet) -> ElementSet {
        ElementSet(self.0 & o.0)
    }

    #[inline]
    pub fn union(self, o: ElementSet) -> ElementSet {
        ElementSet(self.0 | o.0)
    }

    #[inline]
    pub fn insert(&mut self, e: usize) {
        self.0 |= 1 << (e - 1);
    }

    /// Smallest element, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        core::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(e + 1)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `(#x, ⟨x⟩, [x])`: blocks, singleton blocks, blocks of size at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockStats {
    pub blocks: usize,
    pub singletons: usize,
    pub large: usize,
}

/// A set partition of `{1..n}` in restricted-growth normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Vec<u8>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({})", format_partition(self))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_partition(self))
    }
}

fn check_n(n: usize) -> Result<(), PartitionError> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(PartitionError::BadSize(n))
    }
}

impl Partition {
    /// Accepts a string that already satisfies the restricted-growth property.
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self, PartitionError> {
        check_n(rgs.len())?;
        let mut next = 0u8;
        for (i, &b) in rgs.iter().enumerate() {
            if b > next {
                return Err(PartitionError::NotAPartition(format!(
                    "block id {b} at position {i} skips ahead of {next}"
                )));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(Partition { rgs })
    }

    /// Normalizes arbitrary block labels (one per element) to rgs form.
    pub fn from_labels<T: PartialEq + Copy>(labels: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let rgs = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(p) => p as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        Partition { rgs }
    }

    /// Builds a partition of `{1..n}` from blocks of 1-based elements. Every
    /// element must appear exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        check_n(n)?;
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::NotAPartition(String::from("empty block")));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(PartitionError::NotAPartition(format!("element {e} outside 1..{n}")));
                }
                if label[e - 1] != usize::MAX {
                    return Err(PartitionError::NotAPartition(format!("element {e} appears twice")));
                }
                label[e - 1] = b;
            }
        }
        if let Some(e) = label.iter().position(|&l| l == usize::MAX) {
            return Err(PartitionError::NotAPartition(format!("element {} missing", e + 1)));
        }
        Ok(Self::from_labels(&label))
    }

    /// The all-singletons partition `0`.
    pub fn zero(n: usize) -> Self {
        Partition { rgs: (0..n as u8).collect() }
    }

    /// The one-block partition `1`.
    pub fn one(n: usize) -> Self {
        Partition { rgs: vec![0; n] }
    }

    /// The singular partition with basic block `b`; `0` when `|b| ≤ 1`.
    pub fn singular(n: usize, b: ElementSet) -> Self {
        if b.len() <= 1 {
            return Self::zero(n);
        }
        let labels: Vec<usize> = (1..=n).map(|e| if b.contains(e) { 0 } else { e }).collect();
        Self::from_labels(&labels)
    }

    /// Ground set size.
    #[inline]
    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    #[inline]
    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    /// Block id of element `e` (1-based).
    #[inline]
    pub fn block_of(&self, e: usize) -> usize {
        self.rgs[e - 1] as usize
    }

    /// `#x`.
    pub fn block_count(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Blocks ordered by minimum element.
    pub fn blocks(&self) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::EMPTY; self.block_count()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].insert(i + 1);
        }
        out
    }

    /// `(#x, ⟨x⟩, [x])`.
    pub fn stats(&self) -> BlockStats {
        let mut sizes = vec![0usize; self.block_count()];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        let singletons = sizes.iter().filter(|&&s| s == 1).count();
        BlockStats { blocks: sizes.len(), singletons, large: sizes.len() - singletons }
    }

    /// `[x]`, the number of blocks with at least two elements.
    pub fn large_blocks(&self) -> usize {
        self.stats().large
    }

    /// `i(x,S)`: blocks of `x` meeting `S`.
    pub fn incidence(&self, s: ElementSet) -> usize {
        let mut hit = 0u64;
        for e in s.iter().filter(|&e| e <= self.n()) {
            hit |= 1 << self.rgs[e - 1];
        }
        hit.count_ones() as usize
    }

    fn same_n(&self, o: &Partition) -> Result<(), PartitionError> {
        if self.n() == o.n() {
            Ok(())
        } else {
            Err(PartitionError::DimensionMismatch(self.n(), o.n()))
        }
    }

    /// Finest common coarsening.
    pub fn join(&self, o: &Partition) -> Result<Partition, PartitionError> {
        self.same_n(o)?;
        Ok(self.join_unchecked(o))
    }

    pub(crate) fn join_unchecked(&self, o: &Partition) -> Partition {
        // Union-find over the blocks of `self`; each block of `o` glues the
        // `self`-blocks of its elements together.
        let mut parent: [u8; MAX_N] = [0; MAX_N];
        for (i, p) in parent.iter_mut().enumerate().take(self.block_count()) {
            *p = i as u8;
        }
        fn find(p: &mut [u8; MAX_N], mut a: u8) -> u8 {
            while p[a as usize] != a {
                p[a as usize] = p[p[a as usize] as usize];
                a = p[a as usize];
            }
            a
        }
        let mut anchor: [u8; MAX_N] = [u8::MAX; MAX_N];
        for (i, &b) in o.rgs.iter().enumerate() {
            let a = self.rgs[i];
            if anchor[b as usize] == u8::MAX {
                anchor[b as usize] = a;
            } else {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, anchor[b as usize]));
                if ra != rb {
                    parent[ra.max(rb) as usize] = ra.min(rb);
                }
            }
        }
        let labels: Vec<u8> = self.rgs.iter().map(|&a| find(&mut parent, a)).collect();
        // Roots are the minimum block id of each class, so relabelling by first
        // occurrence keeps the order.
        Partition::from_labels(&labels)
    }

    /// Common refinement: pairwise block intersections.
    pub fn meet(&self, o: &Partition) -> Result<Partition, PartitionError> {
        self.same_n(o)?;
        let labels: Vec<(u8, u8)> = self.rgs.iter().zip(&o.rgs).map(|(&a, &b)| (a, b)).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// `self ≤ o`: every block of `self` lies inside a block of `o`.
    pub fn leq(&self, o: &Partition) -> bool {
        if self.n() != o.n() {
            return false;
        }
        let mut image = [u8::MAX; MAX_N];
        for (i, &a) in self.rgs.iter().enumerate() {
            let b = o.rgs[i];
            if image[a as usize] == u8::MAX {
                image[a as usize] = b;
            } else if image[a as usize] != b {
                return false;
            }
        }
        true
    }

    /// At most one block of size at least two.
    pub fn is_singular(&self) -> bool {
        self.large_blocks() <= 1
    }

    /// The unique block of size at least two, or `{1}` for the zero partition.
    /// `None` if the partition is not singular.
    pub fn basic_block(&self) -> Option<ElementSet> {
        let big: Vec<ElementSet> = self.blocks().into_iter().filter(|b| b.len() >= 2).collect();
        match big.len() {
            0 => Some(ElementSet::from_elements([1])),
            1 => Some(big[0]),
            _ => None,
        }
    }

    /// `x_S = {B ∩ S}`, relabelled onto `1..|S|` in increasing order.
    pub fn restrict(&self, s: ElementSet) -> Result<Partition, PartitionError> {
        let elems: Vec<usize> = s.iter().filter(|&e| e <= self.n()).collect();
        if elems.is_empty() {
            return Err(PartitionError::EmptySubset);
        }
        if elems.len() != s.len() {
            return Err(PartitionError::NotAPartition(String::from("subset leaves the ground set")));
        }
        let labels: Vec<u8> = elems.iter().map(|&e| self.rgs[e - 1]).collect();
        Ok(Partition::from_labels(&labels))
    }
}

/// `|x| = (n - #x)/(n - 1)`.
pub fn partition_norm(x: &Partition) -> Result<Rational, PartitionError> {
    let n = x.n();
    if n < 2 {
        return Err(PartitionError::DegenerateLattice);
    }
    Ok(Rational::new((n - x.block_count()) as i64, (n - 1) as i64))
}

/// `d(x,y) = (#x + #y - 2#(x+y))/(n - 1)`.
pub fn partition_metric(x: &Partition, y: &Partition) -> Result<Rational, PartitionError> {
    x.same_n(y)?;
    let n = x.n();
    if n < 2 {
        return Err(PartitionError::DegenerateLattice);
    }
    Ok(Rational::new(metric_numerator(x, y) as i64, (n - 1) as i64))
}

/// `(n-1)·d(x,y)` as an integer.
pub fn metric_numerator(x: &Partition, y: &Partition) -> usize {
    x.block_count() + y.block_count() - 2 * x.join_unchecked(y).block_count()
}

/// Parses block syntax (`1,4|2,3|5,6`) or `rgs:0,1,1,0,2,2`.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition, PartitionError> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("rgs:") {
        let offset = text.len() - rest.len();
        let mut rgs = Vec::new();
        let mut pos = offset;
        for tok in rest.split(',') {
            let v: u8 = tok.trim().parse().map_err(|_| PartitionError::Parse {
                pos,
                msg: format!("expected block id, found {:?}", tok.trim()),
            })?;
            rgs.push(v);
            pos += tok.len() + 1;
        }
        if rgs.len() != n {
            return Err(PartitionError::NotAPartition(format!("rgs has {} entries, expected {n}", rgs.len())));
        }
        return Partition::from_rgs(rgs);
    }
    let blocks = parse_blocks(text, 1)?;
    Partition::from_blocks(n, &blocks)
}

/// Splits block syntax into integer blocks; `min` is the smallest legal element.
pub(crate) fn parse_blocks(text: &str, min: usize) -> Result<Vec<Vec<usize>>, PartitionError> {
    let mut blocks = Vec::new();
    let mut pos = 0;
    for part in text.split('|') {
        let mut block = Vec::new();
        let mut p = pos;
        for tok in part.split(',') {
            let v: usize = tok.trim().parse().map_err(|_| PartitionError::Parse {
                pos: p,
                msg: format!("expected element, found {:?}", tok.trim()),
            })?;
            if v < min {
                return Err(PartitionError::Parse { pos: p, msg: format!("element {v} below {min}") });
            }
            block.push(v);
            p += tok.len() + 1;
        }
        blocks.push(block);
        pos += part.len() + 1;
    }
    Ok(blocks)
}

/// Block syntax: blocks by minimum element, elements ascending.
pub fn format_partition(x: &Partition) -> String {
    format_blocks(x, 0)
}

pub(crate) fn format_blocks(x: &Partition, shift: usize) -> String {
    let mut s = String::new();
    for (i, b) in x.blocks().iter().enumerate() {
        if i > 0 {
            s.push('|');
        }
        for (j, e) in b.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&format!("{}", e - shift));
        }
    }
    s
}

/// `rgs:` syntax.
pub fn format_rgs(x: &Partition) -> String {
    let body: Vec<String> = x.rgs.iter().map(|b| format!("{b}")).collect();
    format!("rgs:{}", body.join(","))
}

/// All partitions of `{1..n}` in lexicographic rgs order.
pub fn enumerate_partitions(n: usize) -> PartitionIter {
    PartitionIter { rgs: vec![0; n], maxes: vec![0; n], done: n == 0 || n > MAX_N }
}

pub struct PartitionIter {
    rgs: Vec<u8>,
    // maxes[i] = max(rgs[0..=i])
    maxes: Vec<u8>,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition { rgs: self.rgs.clone() };
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.maxes[i - 1] {
                self.rgs[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                break;
            }
        }
        Some(out)
    }
}

/// Singular partitions of `{1..n}`: `0` first, then one per basic block of
/// size at least two, in increasing bitmask order.
pub fn enumerate_singular(n: usize) -> impl Iterator<Item = Partition> {
    let limit: u64 = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    core::iter::once(Partition::zero(n)).chain(
        (1..=limit)
            .filter(|m| m.count_ones() >= 2)
            .map(move |m| Partition::singular(n, ElementSet(m))),
    )
}

/// Bell numbers `B_0..=B_n` (fits `u128` up to `n = 40`).
pub fn bell_numbers(n: usize) -> Vec<u128> {
    // Bell triangle.
    let mut out = vec![1u128];
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        out.push(next[0]);
        row = next;
    }
    out.truncate(n + 1);
    out
}

/// A uniformly random partition of `{1..n}` (uniform over restricted growth
/// strings), by unranking through completion counts. `n ≤ 40`.
pub fn random_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Partition {
    assert!((1..=40).contains(&n), "random_partition supports 1 <= n <= 40");
    // count[i][m]: completions of positions i.. given m blocks opened so far.
    let mut count = vec![vec![0u128; n + 2]; n + 1];
    for m in 0..=n + 1 {
        count[n][m] = 1;
    }
    for i in (1..n).rev() {
        for m in 1..=i {
            count[i][m] = m as u128 * count[i + 1][m] + count[i + 1][m + 1];
        }
    }
    let mut rgs = vec![0u8; n];
    let mut m = 1usize;
    for i in 1..n {
        let r = rng.random_range(0..count[i][m]);
        let stay = m as u128 * count[i + 1][m];
        if r < stay {
            rgs[i] = (r / count[i + 1][m]) as u8;
        } else {
            rgs[i] = m as u8;
            m += 1;
        }
    }
    Partition { rgs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use rand::SeedableRng;

    fn p(s: &str, n: usize) -> Partition {
        parse_partition(s, n).unwrap()
    }

    #[test]
    fn bell_counts_match_enumeration() {
        let bell = bell_numbers(9);
        assert_eq!(&bell[..], &[1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147]);
        for n in 1..=8 {
            let all: Vec<Partition> = enumerate_partitions(n).collect();
            assert_eq!(all.len() as u128, bell[n]);
            let distinct: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.windows(2).all(|w| w[0].rgs < w[1].rgs));
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("1,2|3,4", 4).rgs(), &[0, 0, 1, 1]);
        assert_eq!(p("1,4|2,3|5,6", 6).block_count(), 3);
        assert!(matches!(parse_partition("1,2|2,3", 3), Err(PartitionError::NotAPartition(_))));
        assert!(matches!(parse_partition("1,2", 3), Err(PartitionError::NotAPartition(_))));
        assert!(matches!(parse_partition("1,a", 2), Err(PartitionError::Parse { .. })));
        assert_eq!(p("rgs:0,1,1,0,2,2", 6), p("1,4|2,3|5,6", 6));
        assert!(parse_partition("rgs:0,2", 2).is_err());
    }

    #[test]
    fn format_round_trips() {
        for n in 1..=6 {
            for x in enumerate_partitions(n) {
                assert_eq!(p(&format_partition(&x), n), x);
                assert_eq!(p(&format_rgs(&x), n), x);
            }
        }
        assert_eq!(format_partition(&p("6|5,1|4,3,2", 6)), "1,5|2,3,4|6");
    }

    /// Join via the definition: the finest partition coarser than both,
    /// found by scanning every partition.
    fn join_by_scan(x: &Partition, y: &Partition) -> Partition {
        let uppers: Vec<Partition> = enumerate_partitions(x.n()).filter(|u| x.leq(u) && y.leq(u)).collect();
        uppers.iter().find(|u| uppers.iter().all(|v| u.leq(v))).unwrap().clone()
    }

    #[test]
    fn join_and_meet_agree_with_order() {
        let all: Vec<Partition> = enumerate_partitions(4).collect();
        for x in &all {
            for y in &all {
                let j = x.join(y).unwrap();
                assert_eq!(j, join_by_scan(x, y));
                let m = x.meet(y).unwrap();
                let lowers: Vec<&Partition> = all.iter().filter(|l| l.leq(x) && l.leq(y)).collect();
                assert!(lowers.iter().all(|l| l.leq(&m)));
                assert!(m.leq(x) && m.leq(y));
            }
        }
    }

    #[test]
    fn join_meet_examples() {
        let x = p("1,4|2,3|5,6", 6);
        let y = p("1,2|4,5|3|6", 6);
        assert_eq!(x.join(&y).unwrap(), Partition::one(6));
        assert_eq!(x.meet(&x).unwrap(), x);
        let a = p("1,2|3,4", 4);
        let b = p("1,3|2,4", 4);
        assert_eq!(a.meet(&b).unwrap(), Partition::zero(4));
        assert!(matches!(a.join(&x), Err(PartitionError::DimensionMismatch(4, 6))));
    }

    #[test]
    fn stats_and_incidence() {
        let z = Partition::zero(5).stats();
        assert_eq!((z.blocks, z.singletons, z.large), (5, 5, 0));
        let x = p("1,2|3,4|5|6", 6).stats();
        assert_eq!((x.blocks, x.singletons, x.large), (4, 2, 2));
        let x = p("1,4|2,3|5,6", 6);
        assert_eq!(x.incidence(ElementSet::full(6)), 3);
        assert_eq!(x.incidence(ElementSet::from_elements([1, 4])), 1);
        assert_eq!(x.incidence(ElementSet::from_elements([1, 2, 5])), 3);
    }

    #[test]
    fn metric_examples() {
        let d = partition_metric(&p("1,2|3,4", 4), &p("1,3|2,4", 4)).unwrap();
        assert_eq!(d, Rational::new(2, 3));
        assert_eq!(partition_metric(&Partition::zero(5), &Partition::one(5)).unwrap(), Rational::from(1));
        let d = partition_metric(&p("1,4|2,3|5,6", 6), &p("1,2|4,5|3|6", 6)).unwrap();
        assert_eq!(d, Rational::from(1));
        assert_eq!(partition_metric(&Partition::zero(1), &Partition::one(1)), Err(PartitionError::DegenerateLattice));
    }

    #[test]
    fn metric_equals_dprime() {
        for x in enumerate_partitions(5) {
            for y in enumerate_partitions(5) {
                let j = x.join(&y).unwrap();
                let dp = partition_norm(&j).unwrap() * 2 - partition_norm(&x).unwrap() - partition_norm(&y).unwrap();
                assert_eq!(partition_metric(&x, &y).unwrap(), dp);
            }
        }
    }

    #[test]
    fn singular_partitions() {
        assert!(Partition::zero(4).is_singular());
        assert_eq!(Partition::zero(4).basic_block(), Some(ElementSet::from_elements([1])));
        assert_eq!(enumerate_singular(4).count(), 12);
        assert!(!p("1,2|3,4", 4).is_singular());
        assert_eq!(p("1,2|3,4", 4).basic_block(), None);
        for n in 2..=7 {
            let direct = enumerate_partitions(n).filter(|x| x.is_singular()).count();
            assert_eq!(direct, enumerate_singular(n).count());
            assert_eq!(direct, (1usize << n) - n);
        }
    }

    #[test]
    fn restriction() {
        let x = p("1,4|2,3|5,6", 6);
        assert_eq!(x.restrict(ElementSet::full(6)).unwrap(), x);
        assert_eq!(x.restrict(ElementSet::from_elements([1, 2, 3])).unwrap(), p("1|2,3", 3));
        assert_eq!(x.restrict(ElementSet::EMPTY), Err(PartitionError::EmptySubset));
        // #x = Σ #x_B over the blocks of a coarsening.
        let coarse = p("1,2,3,4|5,6", 6);
        let total: usize = coarse.blocks().iter().map(|&b| x.restrict(b).unwrap().block_count()).sum();
        assert_eq!(total, x.block_count());
    }

    #[test]
    fn random_partitions_are_uniform() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut counts = alloc::collections::BTreeMap::new();
        let trials = 15_000;
        for _ in 0..trials {
            *counts.entry(random_partition(4, &mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 15);
        // Each of the 15 partitions expects 1000 hits.
        assert!(counts.values().all(|&c| (850..1150).contains(&c)), "{counts:?}");
        for n in [1, 2, 9, 20] {
            let x = random_partition(n, &mut rng);
            assert_eq!(Partition::from_rgs(x.rgs().to_vec()).unwrap(), x);
        }
    }
}
