//! Chain minors of `[f(x_i + x_j)]`, the FKG inequality, and determinantal
//! kernels `S ↦ det(K_S)` on Boolean lattices.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;

use super::linalg::{det, mat_mul, transpose, QMatrix};
use super::{BigQ, KernelError, KernelFunction};
use crate::lattice::{parse_subset_label, FiniteMetricLattice};

/// All chains of size `1..=max_len`, as increasing index lists. Indices are in
/// linear-extension order, so a chain is increasing exactly when each element
/// lies below the next.
pub fn chains(l: &FiniteMetricLattice, max_len: usize) -> Vec<Vec<usize>> {
    fn extend(l: &FiniteMetricLattice, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        let last = *cur.last().unwrap();
        for next in last + 1..l.len() {
            if l.leq(last, next) {
                cur.push(next);
                extend(l, max_len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    for start in 0..l.len() {
        extend(l, max_len, &mut vec![start], &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Checks `det(A_{S,T}) ≥ 0` for all chains `S`, `T` of equal size at most
/// `max_chain`, where `A = [f(x_i + x_j)]`. Returns the first failing pair.
pub fn totally_p_nonnegative(f: &KernelFunction, max_chain: usize) -> Result<(), (Vec<usize>, Vec<usize>)> {
    let l = f.lattice();
    let all = chains(l, max_chain);
    let mut start = 0;
    while start < all.len() {
        let k = all[start].len();
        let end = all[start..].iter().position(|c| c.len() != k).map_or(all.len(), |p| start + p);
        let group = &all[start..end];
        // A is symmetric, so (S, T) and (T, S) give the same determinant.
        for (a, s) in group.iter().enumerate() {
            for t in &group[a..] {
                let minor: QMatrix =
                    s.iter().map(|&i| t.iter().map(|&j| f.value(l.join(i, j)).clone()).collect()).collect();
                if det(&minor) < BigQ::zero() {
                    return Err((s.clone(), t.clone()));
                }
            }
        }
        start = end;
    }
    Ok(())
}

/// Checks `f(x+y) f(z) ≥ f(x) f(y)` whenever `z ≤ x, y`. Returns the first
/// failing `(x, y, z)`.
pub fn fkg_check(f: &KernelFunction) -> Result<(), [usize; 3]> {
    let l = f.lattice();
    for x in 0..l.len() {
        for y in x..l.len() {
            let rhs = f.value(x) * f.value(y);
            let lhs = f.value(l.join(x, y));
            for z in (0..=x).filter(|&z| l.leq(z, x) && l.leq(z, y)) {
                if lhs * f.value(z) < rhs {
                    return Err([x, y, z]);
                }
            }
        }
    }
    Ok(())
}

fn householder(v: &[BigQ]) -> QMatrix {
    let n = v.len();
    let norm: BigQ = v.iter().fold(BigQ::zero(), |a, x| a + x * x);
    let two = BigQ::from_integer(2.into());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j { BigQ::one() } else { BigQ::zero() };
                    id - &two * &v[i] * &v[j] / &norm
                })
                .collect()
        })
        .collect()
}

/// A symmetric `K = H D H^t` with spectrum in `(0, 1]`, exact over the
/// rationals. `D` has entries `k/16` with `k ∈ 1..=16` and `H` is a product of
/// `dim` Householder reflections with small integer vectors.
pub fn random_psd_contraction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> QMatrix {
    let mut h: QMatrix = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { BigQ::one() } else { BigQ::zero() }).collect())
        .collect();
    for _ in 0..dim {
        let v: Vec<BigQ> = loop {
            let v: Vec<i64> = (0..dim).map(|_| rng.random_range(-3..=3)).collect();
            if v.iter().any(|&x| x != 0) {
                break v.into_iter().map(|x| BigQ::from_integer(x.into())).collect();
            }
        };
        h = mat_mul(&h, &householder(&v));
    }
    let mut d = vec![vec![BigQ::zero(); dim]; dim];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = BigQ::new(rng.random_range(1..=16i64).into(), 16.into());
    }
    mat_mul(&mat_mul(&h, &d), &transpose(&h))
}

fn principal_minor(k: &QMatrix, mask: usize) -> BigQ {
    let idx: Vec<usize> = (0..k.len()).filter(|i| mask >> i & 1 == 1).collect();
    det(&idx.iter().map(|&i| idx.iter().map(|&j| k[i][j].clone()).collect()).collect())
}

/// `S ↦ det(K_S)` on a Boolean lattice whose labels are subsets of
/// `{1..dim}` (as built by `boolean_measure_lattice`); `det(K_∅) = 1`.
pub fn determinantal_kernel<'a>(l: &'a FiniteMetricLattice, k: &QMatrix) -> Result<KernelFunction<'a>, KernelError> {
    let mut values = Vec::with_capacity(l.len());
    for label in l.labels() {
        let mask = parse_subset_label(label).filter(|m| *m >> k.len() == 0).ok_or(KernelError::BadSize(l.len()))?;
        values.push(principal_minor(k, mask));
    }
    KernelFunction::new(l, values)
}

/// Checks `det(K_{S∪T}) det(K_{S∩T}) ≤ det(K_S) det(K_T)` over all subset
/// pairs; returns the first failing `(S, T)` as bitmasks.
pub fn kotelyanskii_violation(k: &QMatrix) -> Option<(usize, usize)> {
    let size = 1usize << k.len();
    let minors: Vec<BigQ> = (0..size).map(|m| principal_minor(k, m)).collect();
    for s in 0..size {
        for t in s..size {
            if &minors[s | t] * &minors[s & t] > &minors[s] * &minors[t] {
                return Some((s, t));
            }
        }
    }
    None
}
