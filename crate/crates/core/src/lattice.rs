//! Finite metric lattices: construction, axiom checking and the metric calculus.
//!
//! A lattice is given by its join table and a rational metric. Meet, order and
//! rank are derived. Elements are re-sorted into a deterministic linear
//! extension (rank first, then label), so index 0 is the bottom and the last
//! index is the top.
//!
//! Internally every distance is an integer numerator over one common
//! denominator ([`FiniteMetricLattice::scale`]); the `*_scaled` accessors expose
//! that form for tight loops.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::rational::{common_denominator, Rational};

/// Raw, unvalidated lattice data in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTables {
    pub labels: Vec<String>,
    /// Row-major `len × len` join table.
    pub join: Vec<usize>,
    /// Row-major `len × len` metric.
    pub metric: Vec<Rational>,
}

impl LatticeTables {
    /// Builds tables from nested rows, checking only that the shapes agree.
    pub fn from_rows(
        labels: Vec<String>,
        join: Vec<Vec<usize>>,
        metric: Vec<Vec<Rational>>,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if join.len() != n || metric.len() != n {
            return Err(LatticeError::Shape("row count differs from element count"));
        }
        if join.iter().any(|r| r.len() != n) || metric.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Shape("table rows must have one entry per element"));
        }
        Ok(LatticeTables {
            labels,
            join: join.into_iter().flatten().collect(),
            metric: metric.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Rescales the metric so that `d(0,1) = 1` and returns the factor that was
    /// applied. The bottom and top are located from the join table.
    pub fn normalize_metric(&self) -> Result<(LatticeTables, Rational), LatticeError> {
        let n = self.len();
        self.check_shape()?;
        let bottom = find_bottom(n, &self.join).ok_or(LatticeError::AxiomViolation {
            kind: Axiom::Bottom,
            witness: Vec::new(),
        })?;
        let top = find_top(n, &self.join).ok_or(LatticeError::AxiomViolation {
            kind: Axiom::Top,
            witness: Vec::new(),
        })?;
        let diam = self.metric[bottom * n + top];
        if !diam.is_positive() {
            return Err(LatticeError::AxiomViolation {
                kind: Axiom::Diameter,
                witness: vec![self.labels[bottom].clone(), self.labels[top].clone()],
            });
        }
        let factor = diam.recip();
        let mut out = self.clone();
        for v in &mut out.metric {
            *v *= factor;
        }
        Ok((out, factor))
    }

    fn check_shape(&self) -> Result<(), LatticeError> {
        let n = self.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if self.join.len() != n * n || self.metric.len() != n * n {
            return Err(LatticeError::Shape("tables must be len × len"));
        }
        if self.join.iter().any(|&j| j >= n) {
            return Err(LatticeError::Shape("join entry out of range"));
        }
        Ok(())
    }
}

/// The axiom that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    JoinIdempotent,
    JoinCommutative,
    JoinAssociative,
    Bottom,
    Top,
    MetricRange,
    MetricSymmetry,
    MetricIdentity,
    TriangleInequality,
    Diameter,
    JoinContraction,
    SemiModular,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::JoinIdempotent => "join idempotence",
            Axiom::JoinCommutative => "join commutativity",
            Axiom::JoinAssociative => "join associativity",
            Axiom::Bottom => "bottom element",
            Axiom::Top => "top element",
            Axiom::MetricRange => "metric range [0,1]",
            Axiom::MetricSymmetry => "metric symmetry",
            Axiom::MetricIdentity => "identity of indiscernibles",
            Axiom::TriangleInequality => "triangle inequality",
            Axiom::Diameter => "d(0,1) = 1",
            Axiom::JoinContraction => "d(x+z,y+z) <= d(x,y)",
            Axiom::SemiModular => "d(x,y) <= |x+y| - |xy|",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("malformed tables: {0}")]
    Shape(&'static str),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("axiom violated ({kind}) at {witness:?}")]
    AxiomViolation { kind: Axiom, witness: Vec<String> },
    #[error("no unique greatest lower bound for {0:?} and {1:?}")]
    MeetUndefined(String, String),
    #[error("common denominator of the metric overflows 64 bits")]
    Overflow,
}

/// A finite lattice with an exact metric, stored in linear-extension order.
#[derive(Debug, Clone)]
pub struct FiniteMetricLattice {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    n: usize,
    join: Vec<u32>,
    meet: Vec<u32>,
    scale: i64,
    dist: Vec<i64>,
    validated: bool,
}

/// Validates and builds a lattice from nested rows.
pub fn build_lattice(
    elements: Vec<String>,
    join: Vec<Vec<usize>>,
    metric: Vec<Vec<Rational>>,
) -> Result<FiniteMetricLattice, LatticeError> {
    FiniteMetricLattice::build(LatticeTables::from_rows(elements, join, metric)?)
}

fn find_bottom(n: usize, join: &[usize]) -> Option<usize> {
    (0..n).find(|&b| (0..n).all(|x| join[b * n + x] == x))
}

fn find_top(n: usize, join: &[usize]) -> Option<usize> {
    (0..n).find(|&t| (0..n).all(|x| join[t * n + x] == t))
}

impl FiniteMetricLattice {
    /// Validates every lattice and metric axiom, then builds the lattice.
    pub fn build(tables: LatticeTables) -> Result<Self, LatticeError> {
        Self::construct(tables, true)
    }

    /// Builds the order structure (join laws, bottom, top, meet) but skips the
    /// metric axioms. Used for candidates that are expected to fail them, such
    /// as noncrossing partition lattices, so their defects can be measured.
    pub fn build_unvalidated(tables: LatticeTables) -> Result<Self, LatticeError> {
        Self::construct(tables, false)
    }

    fn construct(tables: LatticeTables, validate_metric: bool) -> Result<Self, LatticeError> {
        tables.check_shape()?;
        let n = tables.len();
        let LatticeTables { labels, join, metric } = tables;
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        let lab = |ix: &[usize]| ix.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>();
        let violation = |kind: Axiom, ix: &[usize]| LatticeError::AxiomViolation { kind, witness: lab(ix) };
        let j = |a: usize, b: usize| join[a * n + b];

        for x in 0..n {
            if j(x, x) != x {
                return Err(violation(Axiom::JoinIdempotent, &[x]));
            }
            for y in x + 1..n {
                if j(x, y) != j(y, x) {
                    return Err(violation(Axiom::JoinCommutative, &[x, y]));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = j(x, y);
                let row = &join[y * n..(y + 1) * n];
                let xy_row = &join[xy * n..(xy + 1) * n];
                for z in 0..n {
                    if xy_row[z] != j(x, row[z]) {
                        return Err(violation(Axiom::JoinAssociative, &[x, y, z]));
                    }
                }
            }
        }
        let bottom = find_bottom(n, &join).ok_or_else(|| violation(Axiom::Bottom, &[]))?;
        let top = find_top(n, &join).ok_or_else(|| violation(Axiom::Top, &[]))?;

        let scale = common_denominator(metric.iter()).ok_or(LatticeError::Overflow)?;
        let mut dist = Vec::with_capacity(n * n);
        for v in &metric {
            let num = v.numer().checked_mul(scale / v.denom()).ok_or(LatticeError::Overflow)?;
            dist.push(num);
        }

        if validate_metric {
            validate_metric_axioms(n, &join, &dist, scale, bottom, top, &violation)?;
        }

        // Linear extension: Kahn's algorithm, always releasing the smallest
        // (rank, label) among the available elements.
        let leq = |a: usize, b: usize| j(a, b) == b;
        let mut indeg = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    indeg[b] += 1;
                }
            }
        }
        let key = |i: usize| (dist[i * n + bottom], labels[i].clone(), i);
        let mut heap: BinaryHeap<Reverse<(i64, String, usize)>> =
            (0..n).filter(|&i| indeg[i] == 0).map(|i| Reverse(key(i))).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, _, a))) = heap.pop() {
            order.push(a);
            for b in 0..n {
                if a != b && leq(a, b) {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        heap.push(Reverse(key(b)));
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        let mut pos = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }

        let mut new_join = vec![0u32; n * n];
        let mut new_dist = vec![0i64; n * n];
        for a in 0..n {
            for b in 0..n {
                new_join[pos[a] * n + pos[b]] = pos[j(a, b)] as u32;
                new_dist[pos[a] * n + pos[b]] = dist[a * n + b];
            }
        }
        let new_labels: Vec<String> = order.iter().map(|&o| labels[o].clone()).collect();
        let index = new_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();

        let mut lat = FiniteMetricLattice {
            labels: new_labels,
            index,
            n,
            join: new_join,
            meet: Vec::new(),
            scale,
            dist: new_dist,
            validated: validate_metric,
        };
        lat.meet = lat.derive_meet()?;
        if validate_metric {
            lat.validate_semimodular()?;
        }
        Ok(lat)
    }

    /// Meet as the join of all common lower bounds, then checked to be one.
    fn derive_meet(&self) -> Result<Vec<u32>, LatticeError> {
        let n = self.n;
        let down: Vec<Vec<usize>> = (0..n).map(|x| (0..=x).filter(|&z| self.leq(z, x)).collect()).collect();
        let mut meet = vec![0u32; n * n];
        for x in 0..n {
            for y in x..n {
                let mut acc = 0usize;
                for &z in &down[x] {
                    if self.leq(z, y) {
                        acc = self.join(acc, z);
                    }
                }
                if !(self.leq(acc, x) && self.leq(acc, y)) {
                    return Err(LatticeError::MeetUndefined(self.labels[x].clone(), self.labels[y].clone()));
                }
                meet[x * n + y] = acc as u32;
                meet[y * n + x] = acc as u32;
            }
        }
        Ok(meet)
    }

    fn validate_semimodular(&self) -> Result<(), LatticeError> {
        match self.semimodular_violation() {
            None => Ok(()),
            Some((x, y)) => Err(LatticeError::AxiomViolation {
                kind: Axiom::SemiModular,
                witness: vec![self.labels[x].clone(), self.labels[y].clone()],
            }),
        }
    }

    /// The pair maximizing `d(x,y) - (|x+y| - |xy|)` when that is positive.
    pub fn semimodular_violation(&self) -> Option<(usize, usize)> {
        let mut worst: Option<(i64, usize, usize)> = None;
        for x in 0..self.n {
            for y in x + 1..self.n {
                let excess = self.d_scaled(x, y)
                    - (self.norm_scaled(self.join(x, y)) - self.norm_scaled(self.meet(x, y)));
                if excess > 0 && worst.is_none_or(|(w, _, _)| excess > w) {
                    worst = Some((excess, x, y));
                }
            }
        }
        worst.map(|(_, x, y)| (x, y))
    }

    /// Number of elements.
    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index of the bottom element.
    #[inline]
    pub fn zero(&self) -> usize {
        0
    }

    /// Index of the top element.
    #[inline]
    pub fn one(&self) -> usize {
        self.n - 1
    }

    /// Whether the metric axioms were checked at construction.
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }

    /// `x ≤ y` iff `x + y = y`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.join(x, y) == y
    }

    /// Common denominator of all metric entries.
    #[inline]
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// `d(x,y) · scale`.
    #[inline]
    pub fn d_scaled(&self, x: usize, y: usize) -> i64 {
        self.dist[x * self.n + y]
    }

    /// `|x| · scale`.
    #[inline]
    pub fn norm_scaled(&self, x: usize) -> i64 {
        self.dist[x * self.n]
    }

    #[inline]
    pub fn unscale(&self, v: i64) -> Rational {
        Rational::new(v, self.scale)
    }

    pub fn d(&self, x: usize, y: usize) -> Rational {
        self.unscale(self.d_scaled(x, y))
    }

    /// `|x| = d(x,0)`.
    pub fn norm(&self, x: usize) -> Rational {
        self.unscale(self.norm_scaled(x))
    }

    /// The rank vector `|x|` in element order.
    pub fn rank(&self) -> Vec<Rational> {
        (0..self.n).map(|x| self.norm(x)).collect()
    }

    /// Tables in the stored (linearly extended) order.
    pub fn tables(&self) -> LatticeTables {
        let n = self.n;
        LatticeTables {
            labels: self.labels.clone(),
            join: self.join.iter().map(|&j| j as usize).collect(),
            metric: (0..n * n).map(|i| self.unscale(self.dist[i])).collect(),
        }
    }

    /// `d'(x,y) = 2|x+y| - |x| - |y|`.
    pub fn dprime(&self, x: usize, y: usize) -> Rational {
        self.unscale(self.dprime_scaled(x, y))
    }

    #[inline]
    pub fn dprime_scaled(&self, x: usize, y: usize) -> i64 {
        2 * self.norm_scaled(self.join(x, y)) - self.norm_scaled(x) - self.norm_scaled(y)
    }

    /// `[x,y,z]_d = |x+y| + |x+z| + |y+z| - |x| - |y| - |z|`.
    pub fn triple_bracket(&self, x: usize, y: usize, z: usize) -> Rational {
        let r = |a| self.norm_scaled(a);
        self.unscale(
            r(self.join(x, y)) + r(self.join(x, z)) + r(self.join(y, z)) - r(x) - r(y) - r(z),
        )
    }

    /// `δ(x,y) = |x| + |y| - 2|xy|`.
    pub fn delta_quasimetric(&self, x: usize, y: usize) -> Rational {
        self.unscale(self.norm_scaled(x) + self.norm_scaled(y) - 2 * self.norm_scaled(self.meet(x, y)))
    }

    /// `|x+y| + |xy| = |x| + |y|`.
    pub fn is_modular_pair(&self, x: usize, y: usize) -> bool {
        self.norm_scaled(self.join(x, y)) + self.norm_scaled(self.meet(x, y))
            == self.norm_scaled(x) + self.norm_scaled(y)
    }

    /// The modularity defect `φ(x,y)` times `scale`, with the smallest
    /// minimizing `z`.
    pub fn phi_scaled(&self, x: usize, y: usize) -> (i64, usize) {
        let n = self.n;
        let r = |a| self.norm_scaled(a);
        let base = r(x) + r(y) - r(self.join(x, y));
        let jx = &self.join[x * n..(x + 1) * n];
        let jy = &self.join[y * n..(y + 1) * n];
        let mut best = i64::MAX;
        let mut arg = 0;
        for z in 0..n {
            let t1 = (base - r(z)).max(0);
            let t2 = self.d_scaled(jx[z] as usize, x);
            let t3 = self.d_scaled(jy[z] as usize, y);
            let v = t1.max(t2).max(t3);
            if v < best {
                best = v;
                arg = z;
                if v == 0 {
                    break;
                }
            }
        }
        (best, arg)
    }

    /// `φ(x,y) = min_z max{(|x|+|y|) ∸ (|x+y|+|z|), d(x+z,x), d(y+z,y)}`,
    /// minimized over every element, with the smallest minimizing `z`.
    pub fn phi_defect(&self, x: usize, y: usize) -> (Rational, usize) {
        let (v, z) = self.phi_scaled(x, y);
        (self.unscale(v), z)
    }

    /// Metrically modular elements, in index order.
    pub fn modular_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| (0..self.n).all(|y| self.is_modular_pair(x, y))).collect()
    }

    /// `{y : x + y = 1 and xy = 0}`.
    pub fn complements(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| self.join(x, y) == self.one() && self.meet(x, y) == self.zero())
            .collect()
    }

    /// `d'(x,y) = 1`.
    pub fn is_weak_complement(&self, x: usize, y: usize) -> bool {
        self.dprime_scaled(x, y) == self.scale
    }

    /// Checks `f(x+y) + f(z) ≤ f(x) + f(y+z)` for all `z ≤ x` and all `y`.
    /// Returns the first failing `(x, y, z)`.
    pub fn check_exchange_relation(&self, f: &[Rational]) -> Result<(), [usize; 3]> {
        assert_eq!(f.len(), self.n, "kernel must be total on the lattice");
        for x in 0..self.n {
            for z in (0..=x).filter(|&z| self.leq(z, x)) {
                for y in 0..self.n {
                    if f[self.join(x, y)] + f[z] > f[x] + f[self.join(y, z)] {
                        return Err([x, y, z]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Values of the seven metric-lattice sentences, each a sup over all
    /// assignments (sums are exact, not truncated).
    pub fn t_ml_sentence_values(&self) -> [Rational; 7] {
        let n = self.n;
        let (zero, one) = (self.zero(), self.one());
        let d = |a, b| self.d_scaled(a, b);
        let s = self.scale;
        let mut v = [0i64; 7];
        v[0] = (d(zero, one) - s).abs();
        for x in 0..n {
            v[1] = v[1].max(d(self.join(x, zero), x) + d(self.join(x, one), one));
            v[2] = v[2].max(d(self.join(x, x), x));
            for y in 0..n {
                let xy = self.join(x, y);
                v[3] = v[3].max(d(xy, self.join(y, x)));
                let dxy = d(x, y);
                let nxy = self.norm_scaled(xy);
                for z in 0..n {
                    let xz = self.join(x, z);
                    let yz = self.join(y, z);
                    v[4] = v[4].max(d(self.join(xy, z), self.join(x, yz)));
                    v[5] = v[5].max(d(xz, yz) - dxy);
                    let lhs = dxy + self.norm_scaled(z);
                    let rhs = nxy + d(xz, x) + d(yz, y);
                    v[6] = v[6].max(lhs - rhs);
                }
            }
        }
        v.map(|a| self.unscale(a.max(0)))
    }
}

fn validate_metric_axioms(
    n: usize,
    join: &[usize],
    dist: &[i64],
    scale: i64,
    bottom: usize,
    top: usize,
    violation: &dyn Fn(Axiom, &[usize]) -> LatticeError,
) -> Result<(), LatticeError> {
    let d = |a: usize, b: usize| dist[a * n + b];
    for x in 0..n {
        for y in 0..n {
            let v = d(x, y);
            if v < 0 || v > scale {
                return Err(violation(Axiom::MetricRange, &[x, y]));
            }
            if v != d(y, x) {
                return Err(violation(Axiom::MetricSymmetry, &[x, y]));
            }
            if (v == 0) != (x == y) {
                return Err(violation(Axiom::MetricIdentity, &[x, y]));
            }
        }
    }
    if d(bottom, top) != scale {
        return Err(violation(Axiom::Diameter, &[bottom, top]));
    }
    for x in 0..n {
        for y in x + 1..n {
            let dxy = d(x, y);
            let rx = &dist[x * n..(x + 1) * n];
            let ry = &dist[y * n..(y + 1) * n];
            for z in 0..n {
                if rx[z] > dxy + ry[z] || ry[z] > dxy + rx[z] {
                    return Err(violation(Axiom::TriangleInequality, &[x, y, z]));
                }
            }
            let jx = &join[x * n..(x + 1) * n];
            let jy = &join[y * n..(y + 1) * n];
            for z in 0..n {
                if d(jx[z], jy[z]) > dxy {
                    return Err(violation(Axiom::JoinContraction, &[x, y, z]));
                }
            }
        }
    }
    Ok(())
}

/// The Boolean lattice `2^E` with `d(A,B) = μ(A Δ B)`, where `μ` is the
/// normalized weight measure. Elements are bitmasks labelled like `{1,3}`.
pub fn boolean_measure_lattice(weights: &[Rational]) -> Result<FiniteMetricLattice, LatticeError> {
    let m = weights.len();
    if m == 0 {
        return Err(LatticeError::Empty);
    }
    if m > 16 {
        return Err(LatticeError::Shape("ground set too large for an explicit Boolean lattice"));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(LatticeError::Shape("weights must be positive"));
    }
    let total: Rational = weights.iter().copied().sum();
    let size = 1usize << m;
    let measure = |a: usize| -> Rational {
        (0..m).filter(|i| a >> i & 1 == 1).map(|i| weights[i]).sum::<Rational>() / total
    };
    let labels = (0..size).map(subset_label).collect();
    let join = (0..size * size).map(|i| (i / size) | (i % size)).collect();
    let metric = (0..size * size).map(|i| measure((i / size) ^ (i % size))).collect();
    FiniteMetricLattice::build(LatticeTables { labels, join, metric })
}

/// Label of a subset bitmask over `{1..}`: `{}` or `{1,3}`.
pub fn subset_label(mask: usize) -> String {
    let mut s = String::from("{");
    let mut first = true;
    for i in 0..usize::BITS as usize {
        if mask >> i & 1 == 1 {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(&alloc::format!("{}", i + 1));
        }
    }
    s.push('}');
    s
}

/// Inverse of [`subset_label`].
pub fn parse_subset_label(label: &str) -> Option<usize> {
    let inner = label.strip_prefix('{')?.strip_suffix('}')?;
    if inner.is_empty() {
        return Some(0);
    }
    let mut mask = 0usize;
    for part in inner.split(',') {
        let e: usize = part.trim().parse().ok()?;
        if e == 0 || e > usize::BITS as usize {
            return None;
        }
        mask |= 1 << (e - 1);
    }
    Some(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn labels(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    fn chain(k: usize) -> FiniteMetricLattice {
        let join = (0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect();
        let metric = (0..k).map(|i| (0..k).map(|j| r(i.abs_diff(j) as i64, k as i64 - 1)).collect()).collect();
        build_lattice(labels(k), join, metric).unwrap()
    }

    fn kind(e: LatticeError) -> Axiom {
        match e {
            LatticeError::AxiomViolation { kind, .. } => kind,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_chain() {
        let l = chain(2);
        assert_eq!((l.zero(), l.one()), (0, 1));
        assert_eq!(l.d(0, 1), r(1, 1));
        assert_eq!(l.meet(0, 1), 0);
        assert_eq!(l.t_ml_sentence_values(), [Rational::from(0); 7]);
    }

    #[test]
    fn input_order_is_replaced_by_linear_extension() {
        // Top listed first.
        let join = vec![vec![0, 0], vec![0, 1]];
        let metric = vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]];
        let l = build_lattice(vec!["top".into(), "bot".into()], join, metric).unwrap();
        assert_eq!(l.label(l.zero()), "bot");
        assert_eq!(l.label(l.one()), "top");
        assert_eq!(l.index_of("top"), Some(1));
    }

    #[test]
    fn non_associative_join_is_rejected() {
        // a+b = 1, b+c = 1, but a+c = b: (a+c)+c = b+c = 1 while a+(c+c) = a+c = b.
        let join = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 1, 4, 2, 4],
            vec![2, 4, 2, 4, 4],
            vec![3, 2, 4, 3, 4],
            vec![4, 4, 4, 4, 4],
        ];
        let metric = (0..5).map(|i| (0..5).map(|j| if i == j { r(0, 1) } else { r(1, 1) }).collect()).collect();
        let err = build_lattice(labels(5), join, metric).unwrap_err();
        assert_eq!(kind(err), Axiom::JoinAssociative);
    }

    #[test]
    fn half_diameter_fails_validation_but_builds_unvalidated() {
        let join = vec![vec![0, 1], vec![1, 1]];
        let metric = vec![vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]];
        let tables = LatticeTables::from_rows(labels(2), join, metric).unwrap();
        assert_eq!(kind(FiniteMetricLattice::build(tables.clone()).unwrap_err()), Axiom::Diameter);
        let l = FiniteMetricLattice::build_unvalidated(tables.clone()).unwrap();
        assert!(!l.is_validated());
        assert_eq!(l.t_ml_sentence_values()[0], r(1, 2));
        let (norm, factor) = tables.normalize_metric().unwrap();
        assert_eq!(factor, r(2, 1));
        assert!(FiniteMetricLattice::build(norm).unwrap().is_validated());
    }

    #[test]
    fn shape_and_label_errors() {
        assert!(matches!(LatticeTables::from_rows(labels(2), vec![vec![0, 1]], vec![]), Err(LatticeError::Shape(_))));
        let join = vec![vec![0, 1], vec![1, 1]];
        let metric = vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]];
        let dup = build_lattice(vec!["a".into(), "a".into()], join, metric);
        assert!(matches!(dup, Err(LatticeError::DuplicateLabel(_))));
        assert!(matches!(boolean_measure_lattice(&[]), Err(LatticeError::Empty)));
        assert!(boolean_measure_lattice(&[r(0, 1)]).is_err());
    }

    #[test]
    fn meet_matches_lower_bound_scan() {
        let l = boolean_measure_lattice(&[r(1, 1), r(2, 1), r(3, 1)]).unwrap();
        for x in 0..l.len() {
            for y in 0..l.len() {
                let lower: Vec<usize> = (0..l.len()).filter(|&z| l.leq(z, x) && l.leq(z, y)).collect();
                let m = l.meet(x, y);
                assert!(lower.contains(&m));
                assert!(lower.iter().all(|&z| l.leq(z, m)));
                let (a, b) = (parse_subset_label(l.label(x)).unwrap(), parse_subset_label(l.label(y)).unwrap());
                assert_eq!(parse_subset_label(l.label(m)), Some(a & b));
            }
        }
    }

    #[test]
    fn boolean_lattices_are_modular() {
        let l = boolean_measure_lattice(&[r(1, 1), r(1, 2), r(5, 3)]).unwrap();
        assert_eq!(l.modular_elements().len(), l.len());
        assert_eq!(l.semimodular_violation(), None);
        assert_eq!(l.check_exchange_relation(&l.rank()), Ok(()));
        for x in 0..l.len() {
            assert_eq!(l.complements(x).len(), 1);
            assert!(l.is_weak_complement(x, l.complements(x)[0]));
            for y in 0..l.len() {
                assert_eq!(l.d(x, y), l.dprime(x, y));
                assert_eq!(l.delta_quasimetric(x, y), l.d(x, y));
                assert_eq!(l.phi_defect(x, y).0, Rational::from(0));
            }
        }
    }

    #[test]
    fn subset_labels_round_trip() {
        for mask in [0usize, 1, 5, 0b1011_0000] {
            assert_eq!(parse_subset_label(&subset_label(mask)), Some(mask));
        }
        assert_eq!(parse_subset_label("{0}"), None);
        assert_eq!(parse_subset_label("1,2"), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn metric_calculus_invariants(w in proptest::collection::vec(1i64..6, 1..5)) {
            let weights: Vec<Rational> = w.iter().map(|&v| Rational::from(v)).collect();
            let l = boolean_measure_lattice(&weights).unwrap();
            prop_assert_eq!(l.t_ml_sentence_values(), [Rational::from(0); 7]);
            for x in 0..l.len() {
                for y in 0..l.len() {
                    let (d, dp) = (l.d(x, y), l.dprime(x, y));
                    prop_assert!(d <= dp && dp <= d * 2);
                    prop_assert!(l.norm(l.join(x, y)) + l.norm(l.meet(x, y)) <= l.norm(x) + l.norm(y));
                    for z in 0..l.len() {
                        prop_assert!(l.triple_bracket(x, y, z) >= Rational::from(0));
                    }
                }
            }
        }
    }
}
