//! Kernel suite: C22.

use metriclat_core::kernels::{
    classify_eigen, classify_mobius, fkg_check, kotelyanskii_violation, metric_from_cnd, random_psd_contraction,
    totally_p_nonnegative, wilf_identity_holds, zeta_transform, BigQ, Definiteness, KernelError, KernelFunction,
};
use metriclat_core::lattice::boolean_measure_lattice;
use metriclat_core::{FiniteMetricLattice, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{flag, Outcome, Run, VerifyError};
use crate::sweep::{partition_lattice, Worst};

const ROUNDS: usize = 100;

fn q(v: i64) -> BigQ {
    BigQ::from_integer(v.into())
}

fn random_kernel<'a>(l: &'a FiniteMetricLattice, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> KernelFunction<'a> {
    KernelFunction::from_fn(l, |_| q(rng.random_range(lo..=hi)))
}

/// `ρ = ζ g` with `g ≥ 0` in quarters, so `[ρ(x+y)]` is PSD.
fn random_psd<'a>(l: &'a FiniteMetricLattice, rng: &mut ChaCha8Rng) -> KernelFunction<'a> {
    let g = KernelFunction::from_fn(l, |_| BigQ::new(rng.random_range(0..=2i64).into(), 4.into()));
    zeta_transform(&g)
}

/// Exact sub-checks on `P_3`, `P_4` and `2^4`, with the eigenvalue
/// comparisons at tolerance `1e-9`:
/// - the Wilf factorization `[f(x_i+x_j)] = ζ D_{f^μ} ζ^t`;
/// - Möbius and eigenvalue classifications agree;
/// - `η = a - ρ` with `ρ` PSD is CND, and when `exp(-η)` is PD the induced
///   distance satisfies the semilattice axioms;
/// - random PSD contractions satisfy Kotelyanskii's inequality;
/// - totally 3-nonnegative kernels satisfy FKG.
pub(crate) fn c22(run: &mut Run) -> Result<Outcome, VerifyError> {
    if run.params_n().is_some() {
        return Err(run.bad("runs on fixed lattices and takes no n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed());
    let p3 = partition_lattice(3)?;
    let p4 = partition_lattice(4)?;
    let b3 = boolean_measure_lattice(&[Rational::from(1); 3])?;
    let b4 = boolean_measure_lattice(&[Rational::from(1); 4])?;
    let lattices: [(&str, &FiniteMetricLattice); 3] = [("P_3", p3.lattice()), ("P_4", p4.lattice()), ("2^4", &b4)];
    let mut w = Worst::new();
    let (mut pd, mut psd, mut neither, mut cnd_pd, mut tpn) = (0u64, 0u64, 0u64, 0u64, 0u64);

    for (name, l) in lattices {
        for i in 0..ROUNDS {
            let f = random_kernel(l, &mut rng, -5, 5);
            w.record(flag(wilf_identity_holds(&f)), || format!("{name} round {i}: Wilf factorization"));
        }
        for i in 0..ROUNDS {
            let f = if i % 2 == 0 { random_psd(l, &mut rng) } else { random_kernel(l, &mut rng, -3, 5) };
            let mobius = classify_mobius(&f);
            let (eigen, lambda) = classify_eigen(&f);
            match mobius {
                Definiteness::PositiveDefinite => pd += 1,
                Definiteness::PositiveSemidefinite => psd += 1,
                Definiteness::Neither => neither += 1,
            }
            w.record(flag(mobius == eigen), || {
                format!("{name} round {i}: Möbius says {mobius:?}, eigenvalues say {eigen:?} (λ_min = {lambda:e})")
            });
        }
        for i in 0..ROUNDS {
            let rho = random_psd(l, &mut rng);
            let a = q(rng.random_range(0..=3));
            let eta = KernelFunction::from_fn(l, |x| &a - rho.value(x));
            match metric_from_cnd(&eta) {
                Ok(m) => {
                    if m.exp_neg_pd {
                        cnd_pd += 1;
                        w.record(flag(m.violation.is_none()), || {
                            format!("{name} round {i}: exp(-η) PD but {:?}", m.violation)
                        });
                    }
                }
                Err(KernelError::Degenerate) => {}
                Err(e) => w.record(Rational::from(1), || format!("{name} round {i}: {e}")),
            }
        }
    }
    w.record(flag(cnd_pd > 0), || "no CND kernel with exp(-η) PD".into());

    for i in 0..ROUNDS {
        let k = random_psd_contraction(3, &mut rng);
        let v = kotelyanskii_violation(&k);
        w.record(flag(v.is_none()), || format!("contraction {i}: violating pair {v:?}"));
    }

    let mut fkg = |name: &str, f: &KernelFunction, w: &mut Worst| {
        if totally_p_nonnegative(f, 3).is_ok() {
            tpn += 1;
            let r = fkg_check(f);
            w.record(flag(r.is_ok()), || format!("{name}: TP_3, FKG result {r:?}"));
        }
    };
    let b3l: &FiniteMetricLattice = &b3;
    fkg("2^3, f = 1", &KernelFunction::from_fn(b3l, |_| q(1)), &mut w);
    for atom in (0..b3l.len()).filter(|&x| b3l.label(x).len() == 3) {
        let f = KernelFunction::from_fn(b3l, |y| q(i64::from(!b3l.leq(atom, y))));
        fkg(&format!("2^3, f = 1[y ≱ {}]", b3l.label(atom)), &f, &mut w);
    }
    for (name, l) in [("P_3", p3.lattice()), ("2^3", b3l)] {
        for i in 0..ROUNDS {
            let f = random_kernel(l, &mut rng, 0, 3);
            fkg(&format!("{name} round {i}"), &f, &mut w);
        }
    }
    w.record(flag(tpn > 0), || "no totally 3-nonnegative kernel found".into());

    run.note("rounds", ROUNDS);
    run.note("pd", pd);
    run.note("psd", psd);
    run.note("neither", neither);
    run.note("cnd_exp_pd", cnd_pd);
    run.note("tp3", tpn);
    Ok(Outcome::new("P3,P4,B3,B4", w))
}
