//! Hand-written evaluators for the named sentences on `P_n`.
//!
//! Nothing here goes through the formula language or the lattice tables: the
//! universe is the raw partition list, joins and meets come from
//! [`Partition::join`]/[`Partition::meet`], and distances are block counts.
//! Values are integers over the denominator `4(n-1)`.

use std::collections::HashMap;

use metriclat_core::partition::{enumerate_partitions, Partition, PartitionLattice};
use metriclat_core::Rational;

pub struct PartitionOracle {
    n: usize,
    parts: Vec<Partition>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    blocks: Vec<i64>,
    singular: Vec<usize>,
    zero: usize,
    one: usize,
}

/// `(n-1)` in oracle units.
fn unit(n: usize) -> i64 {
    4 * (n as i64 - 1)
}

impl PartitionOracle {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "P_n needs n >= 2");
        let parts: Vec<Partition> = enumerate_partitions(n).collect();
        let index: HashMap<Vec<u8>, usize> = parts.iter().enumerate().map(|(i, p)| (p.rgs().to_vec(), i)).collect();
        let find = |p: Partition| index[p.rgs()];
        let table = |op: fn(&Partition, &Partition) -> Partition| -> Vec<Vec<usize>> {
            parts.iter().map(|a| parts.iter().map(|b| find(op(a, b))).collect()).collect()
        };
        let join = table(|a, b| a.join(b).unwrap());
        let meet = table(|a, b| a.meet(b).unwrap());
        let blocks = parts.iter().map(|p| p.block_count() as i64).collect();
        let singular = (0..parts.len()).filter(|&i| parts[i].is_singular()).collect();
        let zero = find(Partition::zero(n));
        let one = find(Partition::one(n));
        PartitionOracle { n, parts, join, meet, blocks, singular, zero, one }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    /// Oracle index of each element of `p`, in `p`'s order.
    pub fn align(&self, p: &PartitionLattice) -> Vec<usize> {
        let index: HashMap<&[u8], usize> = self.parts.iter().enumerate().map(|(i, q)| (q.rgs(), i)).collect();
        p.partitions().iter().map(|q| index[q.rgs()]).collect()
    }

    fn value(&self, v: i64) -> Rational {
        Rational::new(v, unit(self.n))
    }

    fn d(&self, x: usize, y: usize) -> i64 {
        4 * (self.blocks[x] + self.blocks[y] - 2 * self.blocks[self.join[x][y]])
    }

    fn norm(&self, x: usize) -> i64 {
        4 * (self.n as i64 - self.blocks[x])
    }

    fn dprime(&self, x: usize, y: usize) -> i64 {
        2 * self.norm(self.join[x][y]) - self.norm(x) - self.norm(y)
    }

    fn j(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    fn m(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    fn all(&self) -> std::ops::Range<usize> {
        0..self.parts.len()
    }

    fn sup1(&self, f: impl Fn(usize) -> i64) -> i64 {
        self.all().map(f).max().unwrap()
    }

    fn sup2(&self, f: impl Fn(usize, usize) -> i64) -> i64 {
        self.sup1(|x| self.sup1(|y| f(x, y)))
    }

    fn sup3(&self, f: impl Fn(usize, usize, usize) -> i64) -> i64 {
        self.sup1(|x| self.sup2(|y, z| f(x, y, z)))
    }

    /// Value of a closed registry entry, or `None` for names this oracle
    /// does not cover.
    pub fn sentence(&self, name: &str) -> Option<Rational> {
        let u = unit(self.n);
        let abs = |a: i64, b: i64| (a - b).abs();
        let tsub = |a: i64, b: i64| (a - b).max(0);
        let v = match name {
            "tml1" => abs(self.d(self.zero, self.one), u),
            "tml2" => self.sup1(|x| self.d(self.j(x, self.zero), x) + self.d(self.j(x, self.one), self.one)),
            "tml3" => self.sup1(|x| self.d(self.j(x, x), x)),
            "tml4" => self.sup2(|x, y| self.d(self.j(x, y), self.j(y, x))),
            "tml5" => self.sup3(|x, y, z| self.d(self.j(self.j(x, y), z), self.j(x, self.j(y, z)))),
            "tml6" => self.sup3(|x, y, z| tsub(self.d(self.j(x, z), self.j(y, z)), self.d(x, y))),
            "tml7" => self.sup3(|x, y, z| {
                tsub(
                    self.d(x, y) + self.d(z, self.zero),
                    self.d(self.j(x, y), self.zero) + self.d(self.j(x, z), x) + self.d(self.j(y, z), y),
                )
            }),
            "sigma_mod" => self.sup2(|x, y| self.phi_units(x, y)),
            "sigma_dist" => self.sup3(|x, y, z| {
                let (a, b, c) = (self.m(x, y), self.m(x, z), self.m(x, self.j(y, z)));
                let mut best = i64::MAX;
                'outer: for t in self.all() {
                    for w in self.all() {
                        let v = self.d(a, t).max(self.d(b, w)).max(self.d(c, self.j(t, w)));
                        best = best.min(v);
                        if best == 0 {
                            break 'outer;
                        }
                    }
                }
                best
            }),
            "sigma_wcom" => self.sup1(|x| self.all().map(|y| tsub(u, self.d(x, y))).min().unwrap()),
            "sigma_dd" => self.sup2(|x, y| abs(self.d(x, y), self.dprime(x, y))),
            "pr_meet_comm" => self.sup2(|x, y| self.d(self.m(x, y), self.m(y, x))),
            "pr_meet_assoc" => self.sup3(|x, y, z| self.d(self.m(self.m(x, y), z), self.m(x, self.m(y, z)))),
            "pr_absorb_join" => self.sup2(|x, y| self.d(self.j(x, self.m(x, y)), x)),
            "pr_absorb_meet" => self.sup2(|x, y| self.d(self.m(x, self.j(x, y)), x)),
            "pr_distrib" => self.sup3(|x, y, z| {
                self.d(self.m(x, self.j(y, z)), self.j(self.m(x, y), self.m(x, z)))
            }),
            "pr_complement" => self.sup1(|x| {
                self.all()
                    .map(|y| self.d(self.j(x, y), self.one).max(self.d(self.m(x, y), self.zero)))
                    .min()
                    .unwrap()
            }),
            "pr_mu_bounds" => self.norm(self.zero).max(tsub(u, self.norm(self.one))),
            "pr_mu_meet" => self.sup2(|x, y| tsub(self.norm(self.m(x, y)), self.norm(x))),
            "pr_mu_join" => self.sup2(|x, y| tsub(self.norm(x), self.norm(self.j(x, y)))),
            "pr_mu_additive" => self.sup2(|x, y| {
                abs(
                    tsub(self.norm(x), self.norm(self.m(x, y))),
                    tsub(self.norm(self.j(x, y)), self.norm(y)),
                )
            }),
            "pr_d_mu" => self.sup2(|x, y| {
                abs(self.d(x, y), tsub(self.norm(self.j(x, y)), self.norm(self.m(x, y))))
            }),
            "chi_bound" => self.sup1(|y| {
                self.singular.iter().map(|&z| tsub(self.chi_units(y, z), 2 * self.d(self.j(y, z), self.one))).max().unwrap()
            }),
            _ => return None,
        };
        Some(self.value(v))
    }

    fn phi_units(&self, x: usize, y: usize) -> i64 {
        let lhs = self.norm(x) + self.norm(y);
        let xy = self.norm(self.j(x, y));
        self.all()
            .map(|z| {
                (lhs - xy - self.norm(z)).max(0).max(self.d(self.j(x, z), x)).max(self.d(self.j(y, z), y))
            })
            .min()
            .unwrap()
    }

    fn chi_units(&self, y: usize, z: usize) -> i64 {
        let u = unit(self.n);
        let gap = |a: usize, b: usize| (u - self.norm(a) - self.norm(b)).abs();
        let a = gap(y, z);
        self.singular
            .iter()
            .map(|&w| {
                (self.d(z, w) - a)
                    .max(0)
                    .max(self.d(self.j(z, w), z))
                    .max(self.d(self.j(w, y), self.one))
                    // Every norm is a multiple of 4 units, so a / 4 is exact.
                    .max(gap(w, y) - a / 4)
            })
            .min()
            .unwrap()
    }

    /// `φ(x, y)` at oracle indices.
    pub fn phi(&self, x: usize, y: usize) -> Rational {
        self.value(self.phi_units(x, y))
    }

    /// `χ_z(y)` at oracle indices.
    pub fn chi(&self, y: usize, z: usize) -> Rational {
        self.value(self.chi_units(y, z))
    }

    /// `ψ(x_1..x_k) = sup_y min_i d(x_i, y)` at oracle indices.
    pub fn psi(&self, xs: &[usize]) -> Rational {
        self.value(self.sup1(|y| xs.iter().map(|&x| self.d(x, y)).min().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let o = PartitionOracle::new(4);
        assert_eq!(o.len(), 15);
        assert_eq!(o.sentence("sigma_mod"), Some(Rational::new(1, 3)));
        assert_eq!(o.sentence("tml7"), Some(Rational::from(0)));
        assert_eq!(o.sentence("nope"), None);
        let all: Vec<usize> = (0..o.len()).collect();
        assert_eq!(o.psi(&all), Rational::from(0));
        assert_eq!(o.psi(&[o.zero]), Rational::from(1));
    }
}
