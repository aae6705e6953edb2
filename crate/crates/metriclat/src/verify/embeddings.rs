//! Björner embeddings `φ_n^{kn}: Π_n → Π_kn`: C20 and C21.
//!
//! `Π_n` is `P_{n+1}`, with element 0 of `{0..n}` at position 1.

use metriclat_core::logic::{psi_formula, Compiled, Model};
use metriclat_core::partition::{
    bjorner_embed, bjorner_pairing, format_pi, partition_metric, psi_min_distance, star_partition, Partition,
};
use metriclat_core::Rational;
use num_traits::Signed;

use super::pn::{all, over, phi_raw};
use super::{bell, flag, NRange, Outcome, Run, VerifyError};
use crate::sweep::{par_eval, par_worst, partition_lattice, sup_phi, Worst};

/// `φ_n^{kn}` preserves joins and distances, yet is not elementary: a nonzero
/// singular `a` satisfies `sup_y φ(a,y) = 0` in `Π_n`, while for `0 ∉ B_a` its
/// image `b` has `φ(b, b*) > 0` in `Π_2n`. When `0 ∈ B_a` the image stays
/// singular and the defect stays 0.
pub(crate) fn c20(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(1, 5), 1, 5, 5)?;
    let ks = 1..=3usize;
    for n in r.iter() {
        run.plan(3 * bell(n + 1) * bell(n + 1))?;
    }
    let mut worst = Worst::new();
    for n in r.iter() {
        let parts = all(n + 1);
        for k in ks.clone() {
            let img: Vec<Partition> = parts.iter().map(|x| bjorner_embed(x, k)).collect::<Result<_, _>>()?;
            worst = worst.merge(par_worst(parts.len(), |i| {
                let mut w = Worst::new();
                for j in 0..parts.len() {
                    let (x, y) = (&parts[i], &parts[j]);
                    let joined = bjorner_embed(&x.join(y).unwrap(), k).unwrap() == img[i].join(&img[j]).unwrap();
                    let d = partition_metric(x, y).unwrap();
                    let e = partition_metric(&img[i], &img[j]).unwrap();
                    let v = flag(joined).max((d - e).abs());
                    w.record(v, || format!("k={k} x={} y={}", format_pi(x), format_pi(y)));
                }
                w
            }));
        }
    }
    run.note("k", "1..3");

    // Non-elementarity at k = 2.
    let (mut broken, mut kept) = (0u64, 0u64);
    for n in 3..=4usize {
        let small = partition_lattice(n + 1)?;
        let sp = sup_phi(n + 1)?;
        let big = all(2 * n + 1);
        for (i, a) in small.partitions().iter().enumerate() {
            if !a.is_singular() || *a == Partition::zero(n + 1) {
                continue;
            }
            let mut w = Worst::new();
            w.record(small.lattice().unscale(sp[i].0), || format!("Π_{n}: sup φ(a,·) > 0 at a={}", format_pi(a)));
            let b = bjorner_embed(a, 2)?;
            if a.basic_block().unwrap().contains(1) {
                kept += 1;
                w.record(flag(b.is_singular()), || format!("image of singular a={}", format_pi(a)));
                if n == 3 {
                    let sup = big.iter().map(|y| phi_raw(&b, y, &big).0).max().unwrap();
                    w.record(over(sup, 2 * n + 1), || format!("Π_6: sup φ(b,·) > 0 at b={}", format_pi(&b)));
                }
            } else {
                broken += 1;
                let star = star_partition(&b)?;
                let (phi, _) = phi_raw(&b, &star, &big);
                w.record(flag(phi > 0), || format!("Π_{}: φ(b,b*) = 0 at a={}", 2 * n, format_pi(a)));
            }
            worst = worst.merge(w);
        }
    }
    worst.record(flag(broken > 0), || "no singular a lost modularity".into());
    run.note("non_elementary_n", "3..4");
    run.note("images_not_modular", broken);
    run.note("images_singular", kept);
    Ok(Outcome::new(r, worst))
}

/// With `a_1..a_N` all of `Π_n`, `ψ_N(a) = 0` in `Π_n` but in `Π_2n` the
/// pairing `z = {0} ∪ {{2i-1,2i}}` sits at distance exactly `1/2` from every
/// image, so `ψ_N(φ(a)) ≥ 1/2`. The formula itself is evaluated for small `n`.
pub(crate) fn c21(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(2, 5), 1, 5, 5)?;
    let dsl = NRange::new(r.lo, r.hi.min(3));
    let half = Rational::new(1, 2);
    let mut worst = Worst::new();
    for n in r.iter() {
        let parts = all(n + 1);
        let z = bjorner_pairing(n);
        let img: Vec<Partition> = parts.iter().map(|x| bjorner_embed(x, 2)).collect::<Result<_, _>>()?;
        for (x, b) in parts.iter().zip(&img) {
            let d = partition_metric(b, &z)?;
            worst.record((d - half).abs(), || format!("n={n} x={}", format_pi(x)));
        }
        let psi = psi_min_distance(&img, &z)?;
        worst.record((psi - half).abs(), || format!("n={n}: min_i d(φ(a_i), z)"));
    }
    for n in dsl.iter() {
        let formula = psi_formula(bell(n + 1) as usize);
        let names: Vec<String> = (1..=bell(n + 1)).map(|i| format!("x{i}")).collect();
        let free: Vec<&str> = names.iter().map(String::as_str).collect();

        let small = partition_lattice(n + 1)?;
        let model = Model::partition(&small);
        let c = Compiled::new(&formula, &free, &model)?;
        let at_small: Vec<usize> = (0..small.lattice().len()).collect();
        let v = par_eval(&c, &model, &at_small)?;
        worst.record(v, || format!("n={n}: ψ_N(a) in Π_{n}"));

        let big = partition_lattice(2 * n + 1)?;
        let model = Model::partition(&big);
        let c = Compiled::new(&formula, &free, &model)?;
        let at_big: Vec<usize> = small
            .partitions()
            .iter()
            .map(|x| big.index_of(&bjorner_embed(x, 2).unwrap()).unwrap())
            .collect();
        let v = par_eval(&c, &model, &at_big)?;
        worst.record(half - v, || format!("n={n}: ψ_N(φ(a)) in Π_{}", 2 * n));
    }
    run.note("dsl_n", dsl);
    Ok(Outcome::new(r, worst))
}
