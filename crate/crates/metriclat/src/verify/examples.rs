//! Fixed worked examples: C17, C18, C19 and C23.

use metriclat_core::lattice::FiniteMetricLattice;
use metriclat_core::partition::{noncrossing_lattice, parse_partition, partition_metric, partition_norm, Partition};
use metriclat_core::rational::{fmt_rational, tsub};
use metriclat_core::Rational;
use num_traits::Signed;

use super::pn::fp;
use super::{flag, NRange, Outcome, Run, VerifyError};
use crate::sweep::{partition_lattice, Worst};

fn eq(w: &mut Worst, what: &str, got: Rational, want: Rational) {
    w.record((got - want).abs(), || format!("{what} = {}, expected {}", fmt_rational(&got), fmt_rational(&want)));
}

fn holds(w: &mut Worst, what: &str, ok: bool) {
    w.record(flag(ok), || what.to_string());
}

/// `φ(a, b)` evaluated at the single candidate `c`; an upper bound on the
/// infimum over all candidates.
fn phi_at(a: &Partition, b: &Partition, c: &Partition) -> Result<Rational, VerifyError> {
    let norm = |p: &Partition| partition_norm(p);
    let base = tsub(norm(a)? + norm(b)?, norm(&a.join(b)?)? + norm(c)?);
    let da = partition_metric(&a.join(c)?, a)?;
    let db = partition_metric(&b.join(c)?, b)?;
    Ok(base.max(da).max(db))
}

/// In `P_3n` with `x = {1..2n | 2n+1..3n}`, `y = {1..n | n+1..3n}`,
/// `z = {{i, i+n, i+2n}}` and `ε = 1/(3n-2)`: `φ(x,z), φ(y,z) < ε` while
/// `d(xz, yz) > 2d(x,y) + Kε`, for `n > K + 2`.
///
/// `d(x,y)` recomputed from the partitions is `2/(3n-1)`; `φ` is bounded
/// above by its value at the candidate `z` since `P_3n` is too large to scan.
pub(crate) fn c17(run: &mut Run) -> Result<Outcome, VerifyError> {
    let r = run.range(NRange::new(5, 5), 2, 21, 21)?;
    if r.lo != r.hi {
        return Err(run.bad("takes a single n"));
    }
    let n = r.lo;
    let k = run.k().unwrap_or(2);
    if k < 0 || n as i64 <= k + 2 {
        return Err(run.bad(format!("needs n > K + 2 and K >= 0, got n = {n}, K = {k}")));
    }
    let big = 3 * n;
    let range = |a: usize, b: usize| (a..=b).collect::<Vec<usize>>();
    let x = Partition::from_blocks(big, &[range(1, 2 * n), range(2 * n + 1, 3 * n)])?;
    let y = Partition::from_blocks(big, &[range(1, n), range(n + 1, 3 * n)])?;
    let z = Partition::from_blocks(big, &(1..=n).map(|i| vec![i, i + n, i + 2 * n]).collect::<Vec<_>>())?;
    let xz = x.meet(&z)?;
    let yz = y.meet(&z)?;
    let q = |a: i64, b: i64| Rational::new(a, b);
    let (n_, den) = (n as i64, 3 * n as i64 - 1);
    let eps = q(1, 3 * n as i64 - 2);
    let one = Partition::one(big);

    let mut w = Worst::new();
    holds(&mut w, "x+z = y+z = x+y = 1", x.join(&z)? == one && y.join(&z)? == one && x.join(&y)? == one);
    let mut xz_blocks: Vec<Vec<usize>> = (1..=n).map(|i| vec![i, i + n]).collect();
    xz_blocks.extend((2 * n + 1..=3 * n).map(|j| vec![j]));
    holds(&mut w, "xz", xz == Partition::from_blocks(big, &xz_blocks)?);
    let mut yz_blocks: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    yz_blocks.extend((n + 1..=2 * n).map(|j| vec![j, j + n]));
    holds(&mut w, "yz", yz == Partition::from_blocks(big, &yz_blocks)?);
    holds(&mut w, "xz+yz = z", xz.join(&yz)? == z);
    eq(&mut w, "|x|", partition_norm(&x)?, q(3 * n_ - 2, den));
    eq(&mut w, "|y|", partition_norm(&y)?, q(3 * n_ - 2, den));
    eq(&mut w, "|z|", partition_norm(&z)?, q(2 * n_, den));
    eq(&mut w, "|xz|", partition_norm(&xz)?, q(n_, den));
    eq(&mut w, "|yz|", partition_norm(&yz)?, q(n_, den));
    let dxy = partition_metric(&x, &y)?;
    let dxzyz = partition_metric(&xz, &yz)?;
    eq(&mut w, "d(x,y)", dxy, q(2, den));
    eq(&mut w, "d(xz,yz)", dxzyz, q(2 * n_, den));
    let phi_x = phi_at(&x, &z, &z)?;
    let phi_y = phi_at(&y, &z, &z)?;
    eq(&mut w, "φ(x,z) at z", phi_x, q(1, den));
    eq(&mut w, "φ(y,z) at z", phi_y, q(1, den));
    holds(&mut w, "φ(x,z) < ε", phi_x < eps);
    holds(&mut w, "φ(y,z) < ε", phi_y < eps);
    let rhs = Rational::from(2) * dxy + Rational::from(k) * eps;
    holds(&mut w, "d(xz,yz) > 2d(x,y) + Kε", dxzyz > rhs);

    run.note("K", k);
    run.note("eps", fmt_rational(&eps));
    run.note("d(x,y)", fmt_rational(&dxy));
    run.note("d(xz,yz)", fmt_rational(&dxzyz));
    run.note("2d(x,y)+K*eps", fmt_rational(&rhs));
    run.note("phi_upper", fmt_rational(&phi_x.max(phi_y)));
    run.note("x", fp(&x));
    run.note("y", fp(&y));
    run.note("z", fp(&z));
    Ok(Outcome::new(big, w))
}

/// `x = 12|34`, `y = 13|24` in `P_4`: complements with
/// `|x+y| + |xy| = 1 < 4/3 = |x| + |y|` and `d(x,y) = 2/3 < 1`.
pub(crate) fn c18(run: &mut Run) -> Result<Outcome, VerifyError> {
    let p = partition_lattice(4)?;
    let l = p.lattice();
    let x = p.index_of(&parse_partition("1,2|3,4", 4)?).unwrap();
    let y = p.index_of(&parse_partition("1,3|2,4", 4)?).unwrap();
    let q = Rational::new;
    let mut w = Worst::new();
    holds(&mut w, "x+y = 1", l.join(x, y) == l.one());
    holds(&mut w, "xy = 0", l.meet(x, y) == l.zero());
    eq(&mut w, "|x|", l.norm(x), q(2, 3));
    eq(&mut w, "|y|", l.norm(y), q(2, 3));
    let sum = l.norm(x) + l.norm(y);
    let modular = l.norm(l.join(x, y)) + l.norm(l.meet(x, y));
    eq(&mut w, "|x|+|y|", sum, q(4, 3));
    eq(&mut w, "|x+y|+|xy|", modular, q(1, 1));
    holds(&mut w, "|x+y|+|xy| < |x|+|y|", modular < sum);
    eq(&mut w, "d(x,y)", l.d(x, y), q(2, 3));
    holds(&mut w, "d(x,y) < 1", l.d(x, y) < q(1, 1));
    eq(&mut w, "φ(x,y)", l.phi_defect(x, y).0, q(1, 3));
    run.note("x", l.label(x));
    run.note("y", l.label(y));
    Ok(Outcome::new(4, w))
}

/// `x_i = i | rest` in `P_3`:
/// `|x1+x2+x3| + |x1| + |x2| + |x3| = 5/2 < 3 = |x1+x2| + |x2+x3| + |x3+x1|`.
pub(crate) fn c19(run: &mut Run) -> Result<Outcome, VerifyError> {
    let xs = [parse_partition("1|2,3", 3)?, parse_partition("2|1,3", 3)?, parse_partition("3|1,2", 3)?];
    let half = Rational::new(1, 2);
    let mut w = Worst::new();
    let mut lhs = partition_norm(&xs[0].join(&xs[1])?.join(&xs[2])?)?;
    let mut rhs = Rational::from(0);
    for (i, x) in xs.iter().enumerate() {
        eq(&mut w, &format!("|x{}|", i + 1), partition_norm(x)?, half);
        lhs += partition_norm(x)?;
        let pair = partition_norm(&x.join(&xs[(i + 1) % 3])?)?;
        eq(&mut w, &format!("|x{}+x{}|", i + 1, (i + 1) % 3 + 1), pair, Rational::from(1));
        rhs += pair;
    }
    eq(&mut w, "left side", lhs, Rational::new(5, 2));
    eq(&mut w, "right side", rhs, Rational::from(3));
    holds(&mut w, "5/2 < 3", lhs < rhs);
    run.note("left", fmt_rational(&lhs));
    run.note("right", fmt_rational(&rhs));
    Ok(Outcome::new(3, w))
}

/// The rank inherited by the noncrossing partitions `NC_4` is not submodular:
/// some pair has `|x+y| + |xy| > |x| + |y|`, validation rejects the tables and
/// the exchange relation fails. `NC_3` has none of these defects.
pub(crate) fn c23(run: &mut Run) -> Result<Outcome, VerifyError> {
    let mut w = Worst::new();
    let nc3 = FiniteMetricLattice::build_unvalidated(noncrossing_lattice(3))?;
    holds(&mut w, "NC_3 is submodular", nc3.semimodular_violation().is_none());
    holds(&mut w, "NC_3 validates", FiniteMetricLattice::build(noncrossing_lattice(3)).is_ok());
    let nc4 = FiniteMetricLattice::build_unvalidated(noncrossing_lattice(4))?;
    holds(&mut w, "NC_4 has 14 elements", nc4.len() == 14);
    holds(&mut w, "NC_4 is rejected", FiniteMetricLattice::build(noncrossing_lattice(4)).is_err());
    holds(&mut w, "NC_4 exchange relation fails", nc4.check_exchange_relation(&nc4.rank()).is_err());
    match nc4.semimodular_violation() {
        Some((x, y)) => {
            let (jx, mx) = (nc4.join(x, y), nc4.meet(x, y));
            let excess = nc4.norm(jx) + nc4.norm(mx) - nc4.norm(x) - nc4.norm(y);
            w.record(flag(excess > Rational::from(0)), || {
                format!(
                    "x={} y={}: |x+y|+|xy| - |x| - |y| = {}",
                    nc4.label(x),
                    nc4.label(y),
                    fmt_rational(&excess)
                )
            });
        }
        None => w.record(Rational::from(1), || "no submodularity violation in NC_4".into()),
    }
    run.note("nc", 4);
    Ok(Outcome::new(4, w))
}
