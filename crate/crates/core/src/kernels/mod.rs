//! Functions on finite lattices viewed as kernels `(x, y) ↦ f(x + y)`.
//!
//! Exact work (zeta/Möbius, minors, the CND test) is done over `BigRational`.
//! Floating point appears only in the eigenvalue cross-checks.
//!
//! Eigenvalue contract: `nalgebra`'s symmetric QR eigensolver, whose relative
//! error is far below `1e-12` at the sizes used here (at most 64×64). A matrix
//! counts as PSD when `λ_min ≥ -tol` and PD when `λ_min > tol`, with
//! `tol = 1e-9 · max|a_ij|`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{FiniteMetricLattice, LatticeError, LatticeTables};
use crate::rational::Rational;

pub mod linalg;
pub mod matroid;
pub mod minors;

pub use linalg::BigQ;
use linalg::{big, is_psd_exact, min_eigenvalue, small, to_f64};
pub use matroid::{flats_lattice, graphic_rank, k_sparse, rank_pseudometric, validate_matroid, MatroidRank, RankAxiom};
pub use minors::{
    chains, determinantal_kernel, fkg_check, kotelyanskii_violation, random_psd_contraction, totally_p_nonnegative,
};

pub const EIGEN_TOLERANCE: f64 = 1e-9;

/// Scale points for the sampled Schoenberg check.
pub const SCHOENBERG_T: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("kernel has {got} values, lattice has {expected} elements")]
    Length { expected: usize, got: usize },
    #[error("Möbius says {mobius:?} but eigenvalues say {eigen:?} (λ_min = {min_eigenvalue:e})")]
    MethodDisagreement { mobius: Definiteness, eigen: Definiteness, min_eigenvalue: f64 },
    #[error("function is not conditionally negative definite")]
    NotCnd,
    #[error("η(1) = η(0), so d_η cannot be normalized")]
    Degenerate,
    #[error("exp(-η) is not positive definite; d_η is only a pseudo-metric")]
    NotPromotable,
    #[error("not a rank function: {axiom} fails at {a:#b}, {b:#b}")]
    NotARank { axiom: RankAxiom, a: usize, b: usize },
    #[error("rank of the ground set is 0")]
    RankZero,
    #[error("size {0} is out of range")]
    BadSize(usize),
    #[error("value does not fit in a 64-bit rational")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Exact values indexed by the elements of `lattice`.
#[derive(Debug, Clone)]
pub struct KernelFunction<'a> {
    lattice: &'a FiniteMetricLattice,
    values: Vec<BigQ>,
}

impl<'a> KernelFunction<'a> {
    pub fn new(lattice: &'a FiniteMetricLattice, values: Vec<BigQ>) -> Result<Self, KernelError> {
        if values.len() != lattice.len() {
            return Err(KernelError::Length { expected: lattice.len(), got: values.len() });
        }
        Ok(KernelFunction { lattice, values })
    }

    pub fn from_rationals(lattice: &'a FiniteMetricLattice, values: &[Rational]) -> Result<Self, KernelError> {
        Self::new(lattice, values.iter().map(big).collect())
    }

    pub fn from_fn(lattice: &'a FiniteMetricLattice, mut f: impl FnMut(usize) -> BigQ) -> Self {
        KernelFunction { lattice, values: (0..lattice.len()).map(&mut f).collect() }
    }

    pub fn lattice(&self) -> &'a FiniteMetricLattice {
        self.lattice
    }

    pub fn values(&self) -> &[BigQ] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &BigQ {
        &self.values[x]
    }

    /// `[f(x_i + x_j)]`.
    pub fn gram(&self) -> linalg::QMatrix {
        let l = self.lattice;
        (0..l.len()).map(|i| (0..l.len()).map(|j| self.values[l.join(i, j)].clone()).collect()).collect()
    }

    fn gram_f64(&self) -> Vec<Vec<f64>> {
        let v: Vec<f64> = self.values.iter().map(to_f64).collect();
        let l = self.lattice;
        (0..l.len()).map(|i| (0..l.len()).map(|j| v[l.join(i, j)]).collect()).collect()
    }
}

/// `ζ_ij = 1` iff `x_i ≤ x_j`; upper unitriangular in the stored order.
pub fn zeta_matrix(l: &FiniteMetricLattice) -> Vec<Vec<i64>> {
    (0..l.len()).map(|i| (0..l.len()).map(|j| i64::from(l.leq(i, j))).collect()).collect()
}

/// The unique `f^μ` with `f(x) = Σ_{y ≥ x} f^μ(y)`.
pub fn mobius_invert<'a>(f: &KernelFunction<'a>) -> KernelFunction<'a> {
    let l = f.lattice;
    let n = l.len();
    let mut mu = vec![BigQ::zero(); n];
    for x in (0..n).rev() {
        let mut v = f.values[x].clone();
        for y in x + 1..n {
            if l.leq(x, y) {
                v -= &mu[y];
            }
        }
        mu[x] = v;
    }
    KernelFunction { lattice: l, values: mu }
}

/// `f(x) = Σ_{y ≥ x} g(y)`; the inverse of [`mobius_invert`].
pub fn zeta_transform<'a>(g: &KernelFunction<'a>) -> KernelFunction<'a> {
    let l = g.lattice;
    KernelFunction::from_fn(l, |x| {
        (x..l.len()).filter(|&y| l.leq(x, y)).fold(BigQ::zero(), |acc, y| acc + &g.values[y])
    })
}

/// `ζ D_{f^μ} ζ^t`, computed by explicit matrix products.
pub fn wilf_product(f: &KernelFunction) -> linalg::QMatrix {
    let zeta: linalg::QMatrix = zeta_matrix(f.lattice)
        .into_iter()
        .map(|r| r.into_iter().map(|v| BigQ::from_integer(v.into())).collect())
        .collect();
    let mu = mobius_invert(f);
    let n = zeta.len();
    let mut diag = vec![vec![BigQ::zero(); n]; n];
    for (i, row) in diag.iter_mut().enumerate() {
        row[i] = mu.values[i].clone();
    }
    linalg::mat_mul(&linalg::mat_mul(&zeta, &diag), &linalg::transpose(&zeta))
}

/// Whether `[f(x_i + x_j)] = ζ D_{f^μ} ζ^t` holds exactly.
pub fn wilf_identity_holds(f: &KernelFunction) -> bool {
    wilf_product(f) == f.gram()
}

/// Classification from the signs of `f^μ`.
pub fn classify_mobius(f: &KernelFunction) -> Definiteness {
    let mu = mobius_invert(f);
    if mu.values.iter().all(Signed::is_positive) {
        Definiteness::PositiveDefinite
    } else if mu.values.iter().all(|v| !v.is_negative()) {
        Definiteness::PositiveSemidefinite
    } else {
        Definiteness::Neither
    }
}

fn tolerance(m: &[Vec<f64>]) -> f64 {
    EIGEN_TOLERANCE * m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

fn classify_eigen_matrix(m: &[Vec<f64>]) -> (Definiteness, f64) {
    let lambda = min_eigenvalue(m);
    let tol = tolerance(m);
    let class = if lambda > tol {
        Definiteness::PositiveDefinite
    } else if lambda >= -tol {
        Definiteness::PositiveSemidefinite
    } else {
        Definiteness::Neither
    };
    (class, lambda)
}

/// Classification from the smallest eigenvalue of `[f(x_i + x_j)]`.
pub fn classify_eigen(f: &KernelFunction) -> (Definiteness, f64) {
    classify_eigen_matrix(&f.gram_f64())
}

/// Classifies `f` by both methods and fails if they disagree.
pub fn psd_classify(f: &KernelFunction) -> Result<Definiteness, KernelError> {
    let mobius = classify_mobius(f);
    let (eigen, min_eigenvalue) = classify_eigen(f);
    if mobius != eigen {
        return Err(KernelError::MethodDisagreement { mobius, eigen, min_eigenvalue });
    }
    Ok(mobius)
}

/// Exact test of `Σ c_i c_j η(x_i + x_j) ≤ 0` for `Σ c_i = 0`: the form is
/// restricted to the basis `e_i - e_n` of the sum-zero subspace and its
/// negation is tested for PSD.
pub fn cnd_test(eta: &KernelFunction) -> bool {
    let m = eta.gram();
    let n = m.len();
    if n < 2 {
        return true;
    }
    let last = n - 1;
    let q: linalg::QMatrix = (0..last)
        .map(|i| (0..last).map(|j| -(&m[i][j] - &m[i][last] - &m[last][j] + &m[last][last])).collect())
        .collect();
    is_psd_exact(&q)
}

/// Sampled Schoenberg check: `exp(-t η)` is PSD (by eigenvalues) for every
/// `t` in [`SCHOENBERG_T`]. Never authoritative, since the criterion quantifies
/// over all `t ≥ 0`.
pub fn schoenberg_heuristic(eta: &KernelFunction) -> bool {
    let g = eta.gram_f64();
    SCHOENBERG_T.iter().all(|&t| {
        let e: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|v| Float::exp(-t * v)).collect()).collect();
        classify_eigen_matrix(&e).0 != Definiteness::Neither
    })
}

/// Definiteness of `exp(-η)`, by Möbius inversion in floating point checked
/// against the eigenvalue method.
pub fn exp_neg_definiteness(eta: &KernelFunction) -> Result<Definiteness, KernelError> {
    let l = eta.lattice;
    let n = l.len();
    let g: Vec<f64> = eta.values.iter().map(|v| Float::exp(-to_f64(v))).collect();
    let mut mu = vec![0.0f64; n];
    for x in (0..n).rev() {
        mu[x] = g[x] - (x + 1..n).filter(|&y| l.leq(x, y)).map(|y| mu[y]).sum::<f64>();
    }
    let tol = EIGEN_TOLERANCE * g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mobius = if mu.iter().all(|&v| v > tol) {
        Definiteness::PositiveDefinite
    } else if mu.iter().all(|&v| v >= -tol) {
        Definiteness::PositiveSemidefinite
    } else {
        Definiteness::Neither
    };
    let gram: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| g[l.join(i, j)]).collect()).collect();
    let (eigen, min_eigenvalue) = classify_eigen_matrix(&gram);
    if mobius != eigen {
        return Err(KernelError::MethodDisagreement { mobius, eigen, min_eigenvalue });
    }
    Ok(mobius)
}

/// Axioms of a pseudo-metric semilattice, checked on `(L, +, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemilatticeAxiom {
    NonNegative,
    Reflexive,
    Symmetric,
    Triangle,
    Diameter,
    JoinContraction,
    /// `d(x,y) ≤ d(x+y,0) + d(x+z,x) + d(y+z,y) - d(z,0)`.
    Defect,
}

/// First violated axiom and its witness, if any.
pub fn semilattice_violation(l: &FiniteMetricLattice, d: &[Rational]) -> Option<(SemilatticeAxiom, [usize; 3])> {
    let n = l.len();
    let dd = |a: usize, b: usize| d[a * n + b];
    let (zero, one) = (l.zero(), l.one());
    let nil = Rational::zero();
    for x in 0..n {
        if dd(x, x) != nil {
            return Some((SemilatticeAxiom::Reflexive, [x, x, x]));
        }
        for y in 0..n {
            if dd(x, y) < nil {
                return Some((SemilatticeAxiom::NonNegative, [x, y, y]));
            }
            if dd(x, y) != dd(y, x) {
                return Some((SemilatticeAxiom::Symmetric, [x, y, y]));
            }
        }
    }
    if dd(zero, one) != Rational::one() {
        return Some((SemilatticeAxiom::Diameter, [zero, one, one]));
    }
    for x in 0..n {
        for y in 0..n {
            let xy = l.join(x, y);
            for z in 0..n {
                if dd(x, z) > dd(x, y) + dd(y, z) {
                    return Some((SemilatticeAxiom::Triangle, [x, y, z]));
                }
                let (xz, yz) = (l.join(x, z), l.join(y, z));
                if dd(xz, yz) > dd(x, y) {
                    return Some((SemilatticeAxiom::JoinContraction, [x, y, z]));
                }
                if dd(x, y) > dd(xy, zero) + dd(xz, x) + dd(yz, y) - dd(z, zero) {
                    return Some((SemilatticeAxiom::Defect, [x, y, z]));
                }
            }
        }
    }
    None
}

/// `(L, d_η)` with `d_η(x,y) = 2η(x+y) - η(x) - η(y)`, normalized so that
/// `d(0,1) = 1`.
#[derive(Debug, Clone)]
pub struct CndMetric {
    /// Normalized metric tables in the lattice's order.
    pub tables: LatticeTables,
    pub violation: Option<(SemilatticeAxiom, [usize; 3])>,
    pub exp_neg_pd: bool,
    /// `d(x,y) > 0` whenever `x ≠ y`.
    pub separating: bool,
}

impl CndMetric {
    /// The metric lattice, available when `exp(-η)` is PD.
    pub fn promote(&self) -> Result<FiniteMetricLattice, KernelError> {
        if !self.exp_neg_pd {
            return Err(KernelError::NotPromotable);
        }
        Ok(FiniteMetricLattice::build(self.tables.clone())?)
    }
}

pub fn metric_from_cnd(eta: &KernelFunction) -> Result<CndMetric, KernelError> {
    if !cnd_test(eta) {
        return Err(KernelError::NotCnd);
    }
    let l = eta.lattice;
    let n = l.len();
    let v = &eta.values;
    let scale = &v[l.one()] - &v[l.zero()];
    if scale.is_zero() {
        return Err(KernelError::Degenerate);
    }
    let mut metric = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let raw = BigQ::from_integer(2.into()) * &v[l.join(x, y)] - &v[x] - &v[y];
            metric.push(small(&(raw / &scale)).ok_or(KernelError::Overflow)?);
        }
    }
    let violation = semilattice_violation(l, &metric);
    let separating = (0..n).all(|x| (0..n).all(|y| x == y || metric[x * n + y] > Rational::zero()));
    let exp_neg_pd = exp_neg_definiteness(eta)? == Definiteness::PositiveDefinite;
    let join = (0..n * n).map(|i| l.join(i / n, i % n)).collect();
    let tables = LatticeTables { labels: l.labels().to_vec(), join, metric };
    Ok(CndMetric { tables, violation, exp_neg_pd, separating })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boolean_measure_lattice, build_lattice};
    use crate::partition::PartitionLattice;
    use alloc::string::ToString;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(v: i64) -> BigQ {
        BigQ::from_integer(v.into())
    }

    fn chain(k: usize) -> FiniteMetricLattice {
        let labels = (0..k).map(|i| i.to_string()).collect();
        let join = (0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect();
        let metric = (0..k)
            .map(|i| (0..k).map(|j| Rational::new(i.abs_diff(j) as i64, k as i64 - 1)).collect())
            .collect();
        build_lattice(labels, join, metric).unwrap()
    }

    fn boolean(m: usize) -> FiniteMetricLattice {
        boolean_measure_lattice(&vec![Rational::one(); m]).unwrap()
    }

    fn test_lattices() -> Vec<FiniteMetricLattice> {
        vec![
            PartitionLattice::new(3).unwrap().lattice().clone(),
            PartitionLattice::new(4).unwrap().lattice().clone(),
            boolean(4),
        ]
    }

    fn random_kernel<'a>(l: &'a FiniteMetricLattice, rng: &mut ChaCha8Rng) -> KernelFunction<'a> {
        KernelFunction::from_fn(l, |_| q(rng.random_range(-10..=10)))
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_matrix(&chain(2)), vec![vec![1, 1], vec![0, 1]]);
        let l = PartitionLattice::new(4).unwrap();
        let z = zeta_matrix(l.lattice());
        for (i, row) in z.iter().enumerate() {
            assert_eq!(row[i], 1);
            assert!(row[..i].iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn constant_one_inverts_to_top_indicator() {
        for l in test_lattices() {
            let f = KernelFunction::from_fn(&l, |_| q(1));
            let mu = mobius_invert(&f);
            for x in 0..l.len() {
                assert_eq!(mu.values()[x], q(i64::from(x == l.one())));
            }
            assert_eq!(psd_classify(&f), Ok(Definiteness::PositiveSemidefinite));
        }
    }

    #[test]
    fn mobius_round_trip_and_wilf() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p5 = PartitionLattice::new(5).unwrap();
        for l in test_lattices().iter().chain([p5.lattice()]) {
            for _ in 0..20 {
                let f = random_kernel(l, &mut rng);
                assert_eq!(zeta_transform(&mobius_invert(&f)).values(), f.values());
                assert_eq!(mobius_invert(&zeta_transform(&f)).values(), f.values());
            }
        }
        let p3 = PartitionLattice::new(3).unwrap();
        for _ in 0..20 {
            assert!(wilf_identity_holds(&random_kernel(p3.lattice(), &mut rng)));
        }
    }

    #[test]
    fn down_set_indicator_is_psd() {
        for l in test_lattices() {
            for x in 0..l.len() {
                let rho = KernelFunction::from_fn(&l, |y| q(i64::from(l.leq(y, x))));
                let class = psd_classify(&rho).unwrap();
                assert_ne!(class, Definiteness::Neither);
            }
        }
    }

    #[test]
    fn measure_kernels_are_pd_and_methods_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in test_lattices() {
            for _ in 0..20 {
                let m = KernelFunction::from_fn(&l, |_| q(rng.random_range(1..=5)));
                assert_eq!(psd_classify(&zeta_transform(&m)), Ok(Definiteness::PositiveDefinite));
                assert!(psd_classify(&random_kernel(&l, &mut rng)).is_ok());
            }
        }
    }

    #[test]
    fn boolean_measure_is_cnd() {
        let l = boolean_measure_lattice(&[Rational::new(1, 2), Rational::from(1), Rational::new(3, 2)]).unwrap();
        let eta = KernelFunction::from_rationals(&l, &l.rank()).unwrap();
        assert!(cnd_test(&eta));
        assert!(schoenberg_heuristic(&eta));
        let m = metric_from_cnd(&eta).unwrap();
        assert_eq!(m.violation, None);
        assert!(m.exp_neg_pd && m.separating);
        let promoted = m.promote().unwrap();
        for x in 0..l.len() {
            for y in 0..l.len() {
                assert_eq!(promoted.d(x, y), l.d(x, y));
            }
        }
    }

    #[test]
    fn shifted_psd_is_cnd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for l in test_lattices() {
            let n = l.len() as i64;
            for trial in 0..10 {
                // Zero weights allowed on odd trials.
                let lo = i64::from(trial % 2 == 0);
                let m = KernelFunction::from_fn(&l, |_| BigQ::new(rng.random_range(lo..=4).into(), (4 * n).into()));
                let rho = zeta_transform(&m);
                let eta = KernelFunction::from_fn(&l, |x| q(2) - rho.value(x));
                assert!(cnd_test(&eta));
                let out = metric_from_cnd(&eta).unwrap();
                for x in 0..l.len() {
                    assert_eq!(out.tables.metric[x * l.len() + x], Rational::zero());
                }
                assert_eq!(out.violation, None);
                if out.exp_neg_pd {
                    assert!(out.separating);
                    out.promote().unwrap();
                }
            }
        }
    }

    #[test]
    fn non_cnd_is_rejected() {
        let l = boolean(2);
        let eta = KernelFunction::from_fn(&l, |x| q(-(l.norm(x) * 2).to_integer()));
        assert!(!cnd_test(&eta));
        assert!(matches!(metric_from_cnd(&eta), Err(KernelError::NotCnd)));
        let flat = KernelFunction::from_fn(&l, |_| q(1));
        assert!(matches!(metric_from_cnd(&flat), Err(KernelError::Degenerate)));
    }

    #[test]
    fn partition_rank_satisfies_exchange_relation() {
        for n in 2..=5 {
            let l = PartitionLattice::new(n).unwrap();
            assert_eq!(l.lattice().check_exchange_relation(&l.lattice().rank()), Ok(()));
        }
    }

    #[test]
    fn kernel_length_is_checked() {
        let l = chain(3);
        assert!(matches!(KernelFunction::new(&l, vec![q(1)]), Err(KernelError::Length { expected: 3, got: 1 })));
    }
}
