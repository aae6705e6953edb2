//! Selectors and selector sets: C8, C9, C11 to C16 and C24.

use metriclat_core::partition::{
    enumerate_singular, gamma, gamma_brute_force, hausdorff_brute_force, hausdorff_selectors, is_selector,
    is_selector_metric, metric_numerator, partition_metric, random_partition, selector_repair, selector_trim,
    selectors, ElementSet, Partition, PartitionLattice,
};
use metriclat_core::Rational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pn::{blocks, fp, over};
use super::{bell, flag, Estimate, NRange, Outcome, Run, VerifyError};
use crate::sweep::{par_worst, partition_lattice, sup_phi, Worst};

/// Basic blocks of every selector of every element, in lattice order.
fn selector_blocks(p: &PartitionLattice) -> Vec<Vec<ElementSet>> {
    p.partitions().iter().map(|x| selectors(x).basic_blocks().collect()).collect()
}

fn selector_pairs(sel: &[Vec<ElementSet>]) -> u128 {
    sel.iter().map(|s| s.len() as u128).sum()
}

/// `d(z,w) · (n-1)` for selectors given by their basic blocks.
fn selector_numerator(bz: ElementSet, bw: ElementSet) -> i64 {
    (bz.len() + bw.len()) as i64 - 2 * bz.intersection(bw).len().max(1) as i64
}

/// Combinatorial and metric selector tests agree on modular `y`, `|Γ(x)|` is
/// the product of the block sizes (`Γ(1) = {0}`), and selectors lie at
/// distance 1.
pub(crate) fn c8(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    for n in r.iter() {
        run.plan(bell(n) * ((1u128 << n) - n as u128))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let sing: Vec<Partition> = enumerate_singular(n).collect();
        let parts = p.partitions();
        worst = worst.merge(par_worst(parts.len(), |i| {
            let x = &parts[i];
            let mut w = Worst::new();
            let mut found: Vec<&Partition> = Vec::new();
            for y in &sing {
                let comb = is_selector(x, y);
                w.record(flag(comb == is_selector_metric(x, y)), || format!("x={} y={}", fp(x), fp(y)));
                if comb {
                    found.push(y);
                    let at_one = metric_numerator(x, y) as i64 == n as i64 - 1;
                    w.offer(flag(at_one), || format!("selector at distance != 1: x={} y={}", fp(x), fp(y)));
                }
            }
            let expected = if x.block_count() == 1 {
                1
            } else {
                x.blocks().iter().map(|b| b.len()).product::<usize>()
            };
            w.offer(flag(found.len() == expected), || format!("|Γ(x)| = {} for x={}", found.len(), fp(x)));
            let mut listed: Vec<Partition> = selectors(x).iter().collect();
            listed.sort();
            listed.dedup();
            let mut found: Vec<Partition> = found.into_iter().cloned().collect();
            found.sort();
            w.offer(flag(listed == found), || format!("selector enumeration differs at x={}", fp(x)));
            if x.block_count() == 1 {
                w.offer(flag(found == [Partition::zero(n)]), || "Γ(1) != {0}".into());
            }
            if x.block_count() == n {
                w.offer(flag(found == [Partition::one(n)]), || "Γ(0) != {1}".into());
            }
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// `selector_repair(x, y)` for singular `y` is a singular `z ≥ y` with
/// `x + z = 1` and `d(y,z) = (#x - i(x,B_y))/(n-1) = d(x+y,1) ≤ 4d(x+y,1)`.
pub(crate) fn c9(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 7, 9)?;
    for n in r.iter() {
        run.plan(bell(n) * ((1u128 << n) - n as u128))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let parts: Vec<Partition> = super::pn::all(n);
        let sing: Vec<Partition> = enumerate_singular(n).collect();
        worst = worst.merge(par_worst(parts.len(), |i| {
            let x = &parts[i];
            let mut w = Worst::new();
            for y in &sing {
                let z = selector_repair(x, y).unwrap();
                let wit = || format!("x={} y={} z={}", fp(x), fp(y), fp(&z));
                let shape = z.is_singular() && y.leq(&z) && x.join(&z).unwrap().block_count() == 1;
                w.record(flag(shape), wit);
                let k = blocks(x) - x.incidence(y.basic_block().unwrap()) as i64;
                let dyz = metric_numerator(y, &z) as i64;
                let gap = blocks(&x.join(y).unwrap()) - 1;
                w.offer(over((dyz - k).abs().max((dyz - gap).abs()), n), wit);
                w.offer(over(dyz - 4 * gap, n), wit);
            }
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// For singular `z` with `x + z = 1`, `w = selector_trim(x, z)` is a selector
/// of `x` inside `B_z` with `d(z,w) = |x| + |z| - 1 ≤ 4|1 - |x| - |z||`.
pub(crate) fn c11(run: &mut Run) -> Result<Outcome, VerifyError> {
    let (r, worst, _) = trim_sweep(run)?;
    Ok(Outcome::new(r, worst))
}

/// Returns the check result and the largest `d(z,w)/|1-|x|-|z||`.
fn trim_sweep(run: &mut Run) -> Result<(NRange, Worst, Worst), VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 7, 9)?;
    for n in r.iter() {
        run.plan(bell(n) * ((1u128 << n) - n as u128))?;
    }
    let mut worst = Worst::new();
    let mut ratio = Worst::new();
    for n in r.iter() {
        let parts: Vec<Partition> = super::pn::all(n);
        let sing: Vec<Partition> = enumerate_singular(n).collect();
        let out: Vec<(Worst, Worst)> = {
            use rayon::prelude::*;
            (0..parts.len())
                .into_par_iter()
                .map(|i| {
                    let x = &parts[i];
                    let mut w = Worst::new();
                    let mut q = Worst::new();
                    for z in sing.iter().filter(|z| x.join(z).unwrap().block_count() == 1) {
                        let t = selector_trim(x, z).unwrap();
                        let wit = || format!("x={} z={} w={}", fp(x), fp(z), fp(&t));
                        // B_w ⊆ B_z, read as w ≤ z so that a one-element B_w is covered.
                        w.record(flag(is_selector(x, &t) && t.leq(z)), wit);
                        let dzw = metric_numerator(z, &t) as i64;
                        let excess = n as i64 + 1 - blocks(x) - blocks(z);
                        w.offer(over((dzw - excess).abs(), n), wit);
                        let gap = (blocks(x) + blocks(z) - n as i64 - 1).abs();
                        w.offer(over(dzw - 4 * gap, n), wit);
                        if gap > 0 {
                            q.record(Rational::new(dzw, gap), wit);
                        }
                    }
                    (w, q)
                })
                .collect()
        };
        for (w, q) in out {
            worst = worst.merge(w);
            ratio = ratio.merge(q);
        }
    }
    Ok((r, worst, ratio))
}

pub(crate) fn estimate_c11(run: &mut Run) -> Result<Estimate, VerifyError> {
    let (r, _, ratio) = trim_sweep(run)?;
    Ok(estimate("C11", r, ratio, 4))
}

fn estimate(id: &str, r: NRange, w: Worst, bound: i64) -> Estimate {
    Estimate {
        check_id: id.into(),
        n: r.to_string(),
        value: w.max_violation(),
        bound: Rational::from(bound),
        witness: w.witness,
        instances: w.instances,
    }
}

/// For `z ∈ Γ(x)` some `w ∈ Γ(y)` has `d(z,w) ≤ 24 d(x,y)`. The second
/// result is the largest `min_w d(z,w) / d(x,y)` over `x ≠ y`.
fn c12_sweep(run: &mut Run) -> Result<(NRange, Worst, Worst), VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    let mut sels = Vec::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let sel = selector_blocks(&p);
        let s = selector_pairs(&sel);
        run.plan(s * s)?;
        sels.push((p, sel));
    }
    let mut worst = Worst::new();
    let mut ratio = Worst::new();
    for (p, sel) in &sels {
        let n = p.n();
        let parts = p.partitions();
        let out: Vec<(Worst, Worst)> = {
            use rayon::prelude::*;
            (0..parts.len())
                .into_par_iter()
                .map(|x| {
                    let mut w = Worst::new();
                    let mut q = Worst::new();
                    for &bz in &sel[x] {
                        for y in 0..parts.len() {
                            let (near, bw) = sel[y]
                                .iter()
                                .map(|&bw| (selector_numerator(bz, bw), bw))
                                .min_by_key(|t| t.0)
                                .unwrap();
                            w.add_instances(sel[y].len() as u64 - 1);
                            let dxy = metric_numerator(&parts[x], &parts[y]) as i64;
                            let wit = || {
                                format!(
                                    "x={} z={} y={} w={}",
                                    fp(&parts[x]),
                                    fp(&Partition::singular(n, bz)),
                                    fp(&parts[y]),
                                    fp(&Partition::singular(n, bw))
                                )
                            };
                            w.record(over(near - 24 * dxy, n), wit);
                            if dxy > 0 {
                                q.record(Rational::new(near, dxy), wit);
                            }
                        }
                    }
                    (w, q)
                })
                .collect()
        };
        for (w, q) in out {
            worst = worst.merge(w);
            ratio = ratio.merge(q);
        }
    }
    Ok((r, worst, ratio))
}

pub(crate) fn c12(run: &mut Run) -> Result<Outcome, VerifyError> {
    let (r, worst, _) = c12_sweep(run)?;
    Ok(Outcome::new(r, worst))
}

pub(crate) fn estimate_c12(run: &mut Run) -> Result<Estimate, VerifyError> {
    let (r, _, ratio) = c12_sweep(run)?;
    Ok(estimate("C12", r, ratio, 24))
}

/// `d(y, Γ(x)) ≤ 4|1-|x|-|y|| + 20 d(x+y,1) + 1200 max_w φ(y,w)`.
pub(crate) fn c13(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    let mut work = 0u128;
    for n in r.iter() {
        work += bell(n).pow(3);
    }
    run.plan(work)?;
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let l = p.lattice();
        let sp = sup_phi(n)?;
        let parts = p.partitions();
        let sel: Vec<Vec<Partition>> = parts.iter().map(|x| selectors(x).iter().collect()).collect();
        let c1200 = Rational::from(1200);
        worst = worst.merge(par_worst(parts.len(), |x| {
            let mut w = Worst::new();
            for y in 0..parts.len() {
                let (dist, z) = sel[x]
                    .iter()
                    .map(|z| (metric_numerator(&parts[y], z) as i64, z))
                    .min_by_key(|t| t.0)
                    .unwrap();
                let (bx, by) = (blocks(&parts[x]), blocks(&parts[y]));
                let gap = (bx + by - n as i64 - 1).abs();
                let top = blocks(&parts[l.join(x, y)]) - 1;
                let rhs = over(4 * gap + 20 * top, n) + c1200 * l.unscale(sp[y].0);
                w.record(over(dist, n) - rhs, || {
                    format!("x={} y={} z={}", fp(&parts[x]), fp(&parts[y]), fp(z))
                });
            }
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// Hausdorff closed form and branch-and-bound γ against brute force:
/// exhaustive over the range, plus seeded uniform samples at `n = 6, 7`.
pub(crate) fn c14(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    let samples = run.samples(10_000);
    for n in r.iter() {
        run.plan(bell(n) * bell(n))?;
    }
    run.plan(2 * samples as u128)?;
    let compare = |x: &Partition, y: &Partition, w: &mut Worst| {
        let h = (hausdorff_selectors(x, y).unwrap() - hausdorff_brute_force(x, y).unwrap()).abs();
        let g = (gamma(x, y).unwrap() as i64 - gamma_brute_force(x, y).unwrap() as i64).abs();
        w.record(h.max(Rational::from(g)), || format!("x={} y={}", fp(x), fp(y)));
    };
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let parts = p.partitions();
        worst = worst.merge(par_worst(parts.len(), |x| {
            let mut w = Worst::new();
            for y in parts {
                compare(&parts[x], y, &mut w);
            }
            w
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed());
    for n in [6, 7] {
        let pairs: Vec<(Partition, Partition)> =
            (0..samples).map(|_| (random_partition(n, &mut rng), random_partition(n, &mut rng))).collect();
        worst = worst.merge(par_worst(pairs.len(), |i| {
            let mut w = Worst::new();
            compare(&pairs[i].0, &pairs[i].1, &mut w);
            w
        }));
    }
    run.note("sampled", format!("{samples} pairs at n=6 and {samples} pairs at n=7"));
    run.note("sampling", "uniform over restricted growth strings");
    Ok(Outcome::new(r, worst))
}

/// Sweeps all pairs of the range with `f(x, y, d_Haus, d)`.
fn hausdorff_sweep(
    run: &mut Run,
    f: impl Fn(&Partition, &Partition, Rational, Rational, &mut Worst) + Sync,
) -> Result<(NRange, Worst), VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    for n in r.iter() {
        run.plan(bell(n) * bell(n))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let parts = p.partitions();
        worst = worst.merge(par_worst(parts.len(), |x| {
            let mut w = Worst::new();
            let x = &parts[x];
            for y in parts {
                let dh = hausdorff_selectors(x, y).unwrap();
                f(x, y, dh, partition_metric(x, y).unwrap(), &mut w);
            }
            w
        }));
    }
    Ok((r, worst))
}

/// `d_Haus(Γ(x), Γ(y)) ≤ d(x,y)`.
pub(crate) fn c15(run: &mut Run) -> Result<Outcome, VerifyError> {
    let (r, worst) = hausdorff_sweep(run, |x, y, dh, d, w| {
        w.record(dh - d, || format!("x={} y={}", fp(x), fp(y)));
    })?;
    Ok(Outcome::new(r, worst))
}

/// `d(x,y) ≤ 4 d_Haus` and `d(x, x+y) ≤ 2 d_Haus`.
pub(crate) fn c16(run: &mut Run) -> Result<Outcome, VerifyError> {
    let (four, two) = (Rational::from(4), Rational::from(2));
    let (r, worst) = hausdorff_sweep(run, |x, y, dh, d, w| {
        let up = partition_metric(x, &x.join(y).unwrap()).unwrap();
        w.record((d - four * dh).max(up - two * dh), || format!("x={} y={}", fp(x), fp(y)));
    })?;
    Ok(Outcome::new(r, worst))
}

pub(crate) fn estimate_c16(run: &mut Run) -> Result<Estimate, VerifyError> {
    let (r, worst) = hausdorff_sweep(run, |x, y, dh, d, w| {
        if x != y {
            w.record(d / dh, || format!("x={} y={}", fp(x), fp(y)));
        }
    })?;
    Ok(estimate("C16", r, worst, 4))
}

/// Selector sets under `P ⊗ Q ⊆ {zw : z ∈ P, w ∈ Q}`: every `Γ(x)` has a
/// single norm, `Γ(x+y)` lies inside `Γ(x)Γ(y)` and is the greatest selector
/// set there (any `Γ(u)` inside has `u ≥ x+y`), and
/// `ρ = ‖Γ(x)‖ + ‖Γ(y)‖ - 2‖Γ(x+y)‖ = d'(x,y)`.
///
/// In finite `P_n` other selector sets can also lie inside `Γ(x)Γ(y)`
/// (from `n = 3` on, e.g. `Γ(1) = {0}` for `x = y = 12|3`), so uniqueness is
/// only counted; those counts are reported as `non_unique_pairs`.
pub(crate) fn c24(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 5), 2, 5, 6)?;
    for n in r.iter() {
        run.plan(bell(n).pow(3))?;
    }
    let mut worst = Worst::new();
    let mut non_unique = Vec::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let l = p.lattice();
        let parts = p.partitions();
        let sel: Vec<Vec<usize>> =
            parts.iter().map(|x| selectors(x).iter().map(|z| p.index_of(&z).unwrap()).collect()).collect();
        let mut w = Worst::new();
        for (u, s) in sel.iter().enumerate() {
            let norm = l.norm(s[0]);
            let same = s.iter().all(|&z| l.norm(z) == norm);
            w.record(flag(same && norm == Rational::from(1) - l.norm(u)), || {
                format!("‖Γ(u)‖ = 1 - |u| at u={}", fp(&parts[u]))
            });
        }
        worst = worst.merge(w);
        let out: Vec<(Worst, u64, Option<String>)> = {
            use rayon::prelude::*;
            (0..parts.len())
                .into_par_iter()
                .map(|x| {
                    let mut w = Worst::new();
                    let mut count = 0u64;
                    let mut example = None;
                    let mut inside = vec![false; parts.len()];
                    for y in 0..parts.len() {
                        inside.iter_mut().for_each(|b| *b = false);
                        for &z in &sel[x] {
                            for &t in &sel[y] {
                                inside[l.meet(z, t)] = true;
                            }
                        }
                        let j = l.join(x, y);
                        let wit = || format!("x={} y={}", fp(&parts[x]), fp(&parts[y]));
                        w.record(flag(sel[j].iter().all(|&z| inside[z])), wit);
                        let contained: Vec<usize> =
                            (0..parts.len()).filter(|&u| sel[u].iter().all(|&z| inside[z])).collect();
                        w.offer(flag(contained.iter().all(|&u| l.leq(j, u))), wit);
                        if contained.len() > 1 {
                            count += 1;
                            if example.is_none() {
                                let other = contained.iter().find(|&&u| u != j).unwrap();
                                example = Some(format!("{} with Γ({}) also inside", wit(), fp(&parts[*other])));
                            }
                        }
                        let norm = |u: usize| l.norm(sel[u][0]);
                        let rho = norm(x) + norm(y) - Rational::from(2) * norm(j);
                        w.offer((rho - l.dprime(x, y)).abs(), wit);
                    }
                    (w, count, example)
                })
                .collect()
        };
        let mut count = 0;
        let mut example = None;
        for (w, c, e) in out {
            worst = worst.merge(w);
            count += c;
            example = example.or(e);
        }
        non_unique.push(format!("n={n}: {count}"));
        if let Some(e) = example {
            run.note(&format!("non_unique_example_n{n}"), e);
        }
    }
    run.note("non_unique_pairs", non_unique.join(", "));
    Ok(Outcome::new(r, worst))
}
