//! Matroid rank functions, the rank pseudo-metric and the lattice of flats.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use super::KernelError;
use crate::lattice::{subset_label, FiniteMetricLattice, LatticeTables};
use crate::rational::Rational;

/// Largest ground set with an explicit rank table.
pub const MAX_GROUND: usize = 20;

/// An integer set function on `2^E`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidRank {
    ground: usize,
    rank: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankAxiom {
    /// `0 ≤ r(A) ≤ |A|`.
    Bounded,
    Monotone,
    Submodular,
}

impl fmt::Display for RankAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankAxiom::Bounded => "r(A) <= |A|",
            RankAxiom::Monotone => "monotonicity",
            RankAxiom::Submodular => "submodularity",
        })
    }
}

impl MatroidRank {
    pub fn new(ground: usize, rank: Vec<u32>) -> Result<Self, KernelError> {
        if ground > MAX_GROUND || rank.len() != 1 << ground {
            return Err(KernelError::BadSize(rank.len()));
        }
        Ok(MatroidRank { ground, rank })
    }

    pub fn from_fn(ground: usize, f: impl Fn(usize) -> u32) -> Result<Self, KernelError> {
        if ground > MAX_GROUND {
            return Err(KernelError::BadSize(ground));
        }
        Ok(MatroidRank { ground, rank: (0..1usize << ground).map(f).collect() })
    }

    /// `r(A) = min(|A|, k)`.
    pub fn uniform(ground: usize, k: u32) -> Result<Self, KernelError> {
        Self::from_fn(ground, |a| a.count_ones().min(k))
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn full(&self) -> usize {
        (1 << self.ground) - 1
    }

    pub fn rank(&self, a: usize) -> u32 {
        self.rank[a]
    }

    pub fn values(&self) -> &[u32] {
        &self.rank
    }

    /// `D_r(A,B) = 2 r(A ∪ B) - r(A) - r(B)`.
    pub fn rank_distance(&self, a: usize, b: usize) -> i64 {
        2 * i64::from(self.rank[a | b]) - i64::from(self.rank[a]) - i64::from(self.rank[b])
    }

    /// `cl(A) = {e : r(A ∪ e) = r(A)}`.
    pub fn closure(&self, a: usize) -> usize {
        (0..self.ground).filter(|e| self.rank[a | 1 << e] == self.rank[a]).fold(a, |acc, e| acc | 1 << e)
    }
}

/// Checks boundedness, monotonicity (one element at a time) and
/// submodularity over all pairs.
pub fn validate_matroid(r: &MatroidRank) -> Result<(), KernelError> {
    let bad = |axiom, a, b| Err(KernelError::NotARank { axiom, a, b });
    for a in 0..r.rank.len() {
        if r.rank[a] > a.count_ones() {
            return bad(RankAxiom::Bounded, a, a);
        }
        for e in 0..r.ground {
            if r.rank[a | 1 << e] < r.rank[a] {
                return bad(RankAxiom::Monotone, a, a | 1 << e);
            }
        }
    }
    for a in 0..r.rank.len() {
        for b in a + 1..r.rank.len() {
            if r.rank[a | b] + r.rank[a & b] > r.rank[a] + r.rank[b] {
                return bad(RankAxiom::Submodular, a, b);
            }
        }
    }
    Ok(())
}

/// `d_r(A,B) = D_r(A,B) / r(E)`.
pub fn rank_pseudometric(r: &MatroidRank, a: usize, b: usize) -> Result<Rational, KernelError> {
    let total = r.rank[r.full()];
    if total == 0 {
        return Err(KernelError::RankZero);
    }
    Ok(Rational::new(r.rank_distance(a, b), i64::from(total)))
}

/// The metric quotient of `(2^E, d_r)`: classes of `d_r = 0` are the flats,
/// with `F + G = cl(F ∪ G)`.
pub fn flats_lattice(r: &MatroidRank) -> Result<FiniteMetricLattice, KernelError> {
    validate_matroid(r)?;
    let total = r.rank[r.full()];
    if total == 0 {
        return Err(KernelError::RankZero);
    }
    let flats: Vec<usize> = (0..r.rank.len()).map(|a| r.closure(a)).collect::<BTreeSet<_>>().into_iter().collect();
    let pos = |f: usize| flats.binary_search(&f).unwrap();
    let labels = flats.iter().map(|&f| subset_label(f)).collect();
    let mut join = Vec::with_capacity(flats.len() * flats.len());
    let mut metric = Vec::with_capacity(flats.len() * flats.len());
    for &f in &flats {
        for &g in &flats {
            join.push(pos(r.closure(f | g)));
            metric.push(Rational::new(r.rank_distance(f, g), i64::from(total)));
        }
    }
    Ok(FiniteMetricLattice::build(LatticeTables { labels, join, metric })?)
}

/// Rank of the graphic matroid: `|V|` minus the number of components of
/// `(V, A)`. Edges index the ground set.
pub fn graphic_rank(vertices: usize, edges: &[(usize, usize)]) -> Result<MatroidRank, KernelError> {
    if edges.iter().any(|&(u, v)| u >= vertices || v >= vertices) {
        return Err(KernelError::BadSize(vertices));
    }
    MatroidRank::from_fn(edges.len(), |a| {
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut merged = 0;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if a >> i & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    merged += 1;
                }
            }
        }
        merged
    })
}

/// `|E| ≤ k · r(E)`.
pub fn k_sparse(r: &MatroidRank, k: u32) -> bool {
    r.ground as u64 <= u64::from(k) * u64::from(r.rank[r.full()])
}
