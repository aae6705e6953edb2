//! Sentences on partition lattices: C1, C10 and C25.

use metriclat_core::lattice::boolean_measure_lattice;
use metriclat_core::logic::{builtin, Compiled, Model};
use metriclat_core::partition::{chi_witness, partition_metric, partition_norm, Partition};
use metriclat_core::rational::fmt_rational;
use metriclat_core::{FiniteMetricLattice, Rational};
use num_traits::Signed;
use rayon::prelude::*;

use super::pn::fp;
use super::{bell, NRange, Outcome, Run, VerifyError};
use crate::sweep::{par_worst, partition_lattice, Worst};

/// Names of the seven metric-lattice sentences.
const TML: [&str; 7] = ["tml1", "tml2", "tml3", "tml4", "tml5", "tml6", "tml7"];

/// Sup of every metric-lattice sentence on `l`, in lattice units, as one
/// worst case over sentences and assignments.
fn tml_worst(l: &FiniteMetricLattice, name: &str) -> Worst {
    let d = |a, b| l.d_scaled(a, b);
    let (zero, one, s) = (l.zero(), l.one(), l.scale());
    let label = |i: usize| l.label(i).to_string();
    let mut w = Worst::new();
    w.record(l.unscale((d(zero, one) - s).abs()), || format!("{name} {}", TML[0]));
    let per_x = par_worst(l.len(), |x| {
        let mut w = Worst::new();
        let v = d(l.join(x, zero), x) + d(l.join(x, one), one);
        w.record(l.unscale(v), || format!("{name} {} x={}", TML[1], label(x)));
        w.record(l.unscale(d(l.join(x, x), x)), || format!("{name} {} x={}", TML[2], label(x)));
        for y in 0..l.len() {
            let xy = l.join(x, y);
            let v = d(xy, l.join(y, x));
            w.record(l.unscale(v), || format!("{name} {} x={} y={}", TML[3], label(x), label(y)));
            let dxy = d(x, y);
            let nxy = l.norm_scaled(xy);
            let (mut v4, mut v5, mut v6) = ((i64::MIN, 0), (i64::MIN, 0), (i64::MIN, 0));
            for z in 0..l.len() {
                let xz = l.join(x, z);
                let yz = l.join(y, z);
                let a = d(l.join(xy, z), l.join(x, yz));
                let b = d(xz, yz) - dxy;
                let c = dxy + l.norm_scaled(z) - (nxy + d(xz, x) + d(yz, y));
                if a > v4.0 {
                    v4 = (a, z);
                }
                if b > v5.0 {
                    v5 = (b, z);
                }
                if c > v6.0 {
                    v6 = (c, z);
                }
            }
            w.add_instances(3 * l.len() as u64 - 3);
            for (k, (v, z)) in [v4, v5, v6].into_iter().enumerate() {
                w.record(l.unscale(v), || format!("{name} {} x={} y={} z={}", TML[4 + k], label(x), label(y), label(z)));
            }
        }
        w
    });
    w.merge(per_x)
}

/// The metric-lattice sentences vanish on `P_n` and on the uniform Boolean
/// lattices `2^1..2^5`.
pub(crate) fn c1(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 7), 1, 7, 7)?;
    let boolean = NRange::new(1, 5);
    for n in r.iter() {
        run.plan(7 * bell(n).pow(3))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        worst = worst.merge(tml_worst(p.lattice(), &format!("P_{n}")));
    }
    for m in boolean.iter() {
        let l = boolean_measure_lattice(&vec![Rational::from(1); m])?;
        worst = worst.merge(tml_worst(&l, &format!("2^{m}")));
    }
    run.note("boolean", boolean);
    Ok(Outcome::new(r, worst))
}

/// `χ_z(y) ∸ 2d(y+z, 1) = 0` for every `y` and singular `z`, evaluated through
/// the formula. The selector `w = chi_witness(y, z)` satisfies
/// `d(z+w, z) = d(y+z, 1)` and `d(z, w) ≤ 2d(y+z,1) + |1 - |y| - |z||`.
pub(crate) fn c10(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    for n in r.iter() {
        let sing = (1u128 << n) - n as u128;
        run.plan(bell(n) * sing * sing)?;
    }
    let chi = builtin("chi")?;
    let two = Rational::from(2);
    let one = Rational::from(1);
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let l = p.lattice();
        let model = Model::partition(&p);
        let c = Compiled::new(&chi.formula, &chi.free, &model)?;
        let modular = model.modular().to_vec();
        let top = Partition::one(n);
        worst = worst.merge(par_worst(l.len(), |y| {
            let mut w = Worst::new();
            let py = p.partition(y);
            for &z in &modular {
                let pz = p.partition(z);
                let bound = two * l.d(l.join(y, z), l.one());
                let v = c.eval(&model, &[y, z]).unwrap() - bound;
                let wit = || format!("y={} z={}", fp(py), fp(pz));
                w.record(v, wit);
                let s = chi_witness(py, pz).unwrap();
                let dyz = partition_metric(&py.join(pz).unwrap(), &top).unwrap();
                let gap = (one - partition_norm(py).unwrap() - partition_norm(pz).unwrap()).abs();
                let repair = (partition_metric(&pz.join(&s).unwrap(), pz).unwrap() - dyz).abs();
                let near = partition_metric(pz, &s).unwrap() - (two * dyz + gap);
                w.offer(repair.max(near), wit);
            }
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// Greedy search for `x_1..x_k` in `P_n` such that `Σ φ(x_i, y) < δ` forces
/// `d(y, Σ_n) < ε`, with `ε = 1/(n-1)`. For a fixed family the largest usable
/// `δ` is the minimum of `Σ φ(x_i, y)` over `y` with `d(y, Σ_n) ≥ ε`.
pub(crate) fn c25(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(5, 5), 3, 6, 6)?;
    if r.lo != r.hi {
        return Err(run.bad("takes a single n"));
    }
    let n = r.lo;
    let k = run.k().unwrap_or(6);
    if !(1..=12).contains(&k) {
        return Err(run.bad("k must be in 1..=12"));
    }
    run.plan(bell(n).pow(3) + k as u128 * bell(n).pow(2))?;
    let p = partition_lattice(n)?;
    let l = p.lattice();
    let far: Vec<usize> = (0..l.len()).filter(|&y| p.partition(y).large_blocks() >= 2).collect();
    // φ(x, y) for every x and every far y.
    let table: Vec<Vec<i64>> =
        (0..l.len()).into_par_iter().map(|x| far.iter().map(|&y| l.phi_scaled(x, y).0).collect()).collect();
    let mut sums = vec![0i64; far.len()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut trail = Vec::new();
    for _ in 0..k {
        // Largest new minimum; among equals, the fewest far points still at it.
        let mut best: Option<((i64, i64), usize)> = None;
        for (x, row) in table.iter().enumerate() {
            let next: Vec<i64> = sums.iter().zip(row).map(|(s, v)| s + v).collect();
            let low = next.iter().copied().min().unwrap_or(i64::MAX);
            let key = (low, -(next.iter().filter(|&&v| v == low).count() as i64));
            if best.is_none_or(|(b, _)| key > b) {
                best = Some((key, x));
            }
        }
        let ((low, _), x) = best.expect("P_n is nonempty");
        chosen.push(x);
        for (s, v) in sums.iter_mut().zip(&table[x]) {
            *s += v;
        }
        trail.push(fmt_rational(&l.unscale(low)));
    }
    let delta = l.unscale(sums.iter().copied().min().unwrap_or(0));
    let names: Vec<String> = chosen.iter().map(|&x| fp(p.partition(x))).collect();
    let mut w = Worst::new();
    w.add_instances((l.len() * far.len()) as u64);
    w.offer(delta, || names.join(" ; "));
    run.note("k", k);
    run.note("epsilon", fmt_rational(&Rational::new(1, n as i64 - 1)));
    run.note("delta", fmt_rational(&delta));
    run.note("delta_by_step", trail.join(","));
    run.note("far_points", far.len());
    run.note("delta_positive", delta > Rational::from(0));
    Ok(Outcome { exploratory: true, ..Outcome::new(n, w) })
}
