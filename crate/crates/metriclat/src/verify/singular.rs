//! Singular partitions: C2 to C7.

use std::collections::HashSet;

use metriclat_core::partition::{
    dist_to_singular, enumerate_singular, metric_numerator, star_partition, Partition,
};
use metriclat_core::Rational;
use num_traits::Signed;

use super::pn::{all, blocks, den, fp, over, phi_raw};
use super::{bell, flag, Estimate, NRange, Outcome, Run, VerifyError};
use crate::sweep::{par_worst, partition_lattice, sup_phi, Worst};

fn singular_with_blocks(n: usize) -> Vec<(Partition, metriclat_core::partition::ElementSet)> {
    enumerate_singular(n).map(|y| {
        let b = y.basic_block().expect("singular");
        (y, b)
    }).collect()
}

/// `#(x+y) = #x - i(x,B_y) + 1` and `#xy = #y + i(x,B_y) - 1` for singular `y`.
pub(crate) fn c2(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 7), 2, 7, 9)?;
    for n in r.iter() {
        run.plan(bell(n) * ((1u128 << n) - n as u128))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let parts = all(n);
        let sing = singular_with_blocks(n);
        worst = worst.merge(par_worst(parts.len(), |i| {
            let x = &parts[i];
            let mut w = Worst::new();
            for (y, b) in &sing {
                let inc = x.incidence(*b) as i64;
                let j = blocks(&x.join(y).unwrap());
                let m = blocks(&x.meet(y).unwrap());
                let v = (j - (blocks(x) - inc + 1)).abs().max((m - (blocks(y) + inc - 1)).abs());
                w.record(Rational::from(v), || format!("x={} y={}", fp(x), fp(y)));
            }
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// Closed form for `d(x, Σ_n)` against the minimum over all singular partitions.
pub(crate) fn c3(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 9), 2, 9, 10)?;
    for n in r.iter() {
        run.plan(bell(n) * ((1u128 << n) - n as u128))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let parts = all(n);
        let sing: Vec<Partition> = enumerate_singular(n).collect();
        worst = worst.merge(par_worst(parts.len(), |i| {
            let x = &parts[i];
            let brute = sing.iter().map(|y| metric_numerator(x, y) as i64).min().unwrap();
            let mut w = Worst::new();
            w.add_instances(sing.len() as u64 - 1);
            let closed = dist_to_singular(x).unwrap();
            w.record((closed - over(brute, n)).abs(), || format!("x={}", fp(x)));
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// `x ≤ y` implies `⟨x⟩ - ⟨y⟩ ≤ 2(#x - #y)`.
pub(crate) fn c4(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 7), 2, 7, 7)?;
    for n in r.iter() {
        run.plan(bell(n) * bell(n))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let l = p.lattice();
        let stats: Vec<_> = p.partitions().iter().map(Partition::stats).collect();
        worst = worst.merge(par_worst(l.len(), |x| {
            let mut w = Worst::new();
            for y in (x..l.len()).filter(|&y| l.leq(x, y)) {
                let (sx, sy) = (stats[x], stats[y]);
                let v = (sx.singletons as i64 - sy.singletons as i64) - 2 * (sx.blocks as i64 - sy.blocks as i64);
                w.record(Rational::from(v), || format!("x={} y={}", fp(p.partition(x)), fp(p.partition(y))));
            }
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// `d(x, Σ_n) ≤ 48 max_y φ(x,y)` exhaustively, and
/// `φ(x, x*) ≥ ([x]-1)/(48(n-1))` for every `x` with `[x] ≥ 1` up to `n = 7`.
pub(crate) fn c5(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    let star = NRange::new(r.lo, r.hi.max(7));
    let mut triples = 0u128;
    for n in r.iter() {
        triples += bell(n).pow(3);
    }
    run.plan(triples)?;
    run.note("triples", triples);
    let forty_eight = Rational::from(48);
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let l = p.lattice();
        let sp = sup_phi(n)?;
        let per_x = (l.len() * l.len()) as u64;
        worst = worst.merge(par_worst(l.len(), |x| {
            let mut w = Worst::new();
            w.add_instances(per_x - 1);
            let (phi, y) = sp[x];
            let v = dist_to_singular(p.partition(x)).unwrap() - forty_eight * l.unscale(phi);
            w.record(v, || format!("x={} y={}", fp(p.partition(x)), fp(p.partition(y))));
            w
        }));
    }
    let mut star_pairs = 0u64;
    for n in star.iter() {
        let parts = all(n);
        let w = par_worst(parts.len(), |i| {
            let x = &parts[i];
            let mut w = Worst::new();
            let large = x.large_blocks() as i64;
            if large >= 1 {
                let y = star_partition(x).unwrap();
                let (phi, _) = phi_raw(x, &y, &parts);
                // ([x]-1)/(48(n-1)) - φ, in units of 1/(48(n-1)).
                let v = Rational::new(large - 1 - 48 * phi, 48 * den(n));
                w.record(v, || format!("x={} x*={}", fp(x), fp(&y)));
            }
            w
        });
        star_pairs += w.instances;
        worst = worst.merge(w);
    }
    run.note("star_n", star);
    run.note("star_pairs", star_pairs);
    Ok(Outcome::new(r, worst))
}

/// Largest `d(x, Σ_n) / max_y φ(x,y)` over non-singular `x`.
pub(crate) fn estimate_c5(run: &mut Run) -> Result<Estimate, VerifyError> {
    let r = run.range(NRange::new(2, 6), 2, 6, 7)?;
    let mut worst = Worst::new();
    for n in r.iter() {
        run.plan(bell(n).pow(3))?;
        let p = partition_lattice(n)?;
        let l = p.lattice();
        let sp = sup_phi(n)?;
        for x in 0..l.len() {
            let dist = dist_to_singular(p.partition(x))?;
            if dist > Rational::from(0) {
                let (phi, y) = sp[x];
                worst.record(dist / l.unscale(phi), || format!("x={} y={}", fp(p.partition(x)), fp(p.partition(y))));
            }
        }
    }
    Ok(Estimate {
        check_id: "C5".into(),
        n: r.to_string(),
        value: worst.max_violation(),
        bound: Rational::from(48),
        witness: worst.witness,
        instances: worst.instances,
    })
}

/// Modular elements of `P_n` are exactly the singular partitions.
pub(crate) fn c6(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 7), 2, 7, 7)?;
    for n in r.iter() {
        run.plan(bell(n) * bell(n))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let p = partition_lattice(n)?;
        let l = p.lattice();
        worst = worst.merge(par_worst(l.len(), |x| {
            let mut w = Worst::new();
            let modular = (0..l.len()).all(|y| l.is_modular_pair(x, y));
            let v = flag(modular == p.partition(x).is_singular());
            w.record(v, || format!("x={} modular={modular}", fp(p.partition(x))));
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}

/// With `A = {0} ∪ {singular x : 1 ∈ B_x}` (a Boolean sublattice with
/// `2^(n-1)` elements), every singular `x` has `d(x, A) ≤ 1/(n-1)`.
pub(crate) fn c7(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 7), 2, 9, 10)?;
    for n in r.iter() {
        run.plan(1u128 << (2 * n))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let sing: Vec<Partition> = enumerate_singular(n).collect();
        // B_0 = {1}, so the zero partition is picked up too.
        let a: Vec<&Partition> = sing.iter().filter(|x| x.basic_block().unwrap().contains(1)).collect();
        let members: HashSet<&Partition> = a.iter().copied().collect();
        let mut w = Worst::new();
        w.record(flag(a.len() == 1 << (n - 1)), || format!("|A|={}", a.len()));
        for (i, x) in a.iter().enumerate() {
            for y in &a[i..] {
                let closed = members.contains(&x.join(y).unwrap()) && members.contains(&x.meet(y).unwrap());
                if !closed {
                    w.offer(Rational::from(1), || format!("A not closed at x={} y={}", fp(x), fp(y)));
                }
            }
        }
        worst = worst.merge(w);
        worst = worst.merge(par_worst(sing.len(), |i| {
            let x = &sing[i];
            let near = a.iter().map(|y| metric_numerator(x, y) as i64).min().unwrap();
            let mut w = Worst::new();
            w.add_instances(a.len() as u64 - 1);
            w.record(over(near - 1, n), || format!("x={}", fp(x)));
            w
        }));
    }
    Ok(Outcome::new(r, worst))
}
