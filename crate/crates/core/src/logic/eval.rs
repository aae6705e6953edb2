//! Exact evaluation of formulas on finite metric lattices.
//!
//! A formula is compiled against a model: variables become slots and every
//! value is an integer numerator over one common denominator. Quantifiers run
//! by exhaustive enumeration with early exit once the bound is reached (`sup`)
//! or zero is reached (`inf`).

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::{Domain, Formula, LogicError, Quantifier, Term};
use crate::lattice::FiniteMetricLattice;
use crate::partition::{selectors, PartitionLattice};
use crate::rational::Rational;

/// A lattice prepared for evaluation.
#[derive(Debug, Clone)]
pub struct Model<'a> {
    lattice: &'a FiniteMetricLattice,
    partitions: Option<&'a PartitionLattice>,
    modular: Vec<usize>,
}

impl<'a> Model<'a> {
    pub fn new(lattice: &'a FiniteMetricLattice) -> Self {
        Model { lattice, partitions: None, modular: lattice.modular_elements() }
    }

    /// A partition lattice; `SEL` domains use the combinatorial selectors.
    pub fn partition(p: &'a PartitionLattice) -> Self {
        Model { lattice: p.lattice(), partitions: Some(p), modular: p.lattice().modular_elements() }
    }

    pub fn lattice(&self) -> &'a FiniteMetricLattice {
        self.lattice
    }

    pub fn modular(&self) -> &[usize] {
        &self.modular
    }

    /// Selectors of `x`, in index order.
    pub fn selectors(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = match self.partitions {
            Some(p) => selectors(p.partition(x)).iter().map(|s| p.index_of(&s).unwrap()).collect(),
            None => self.selectors_fallback(x),
        };
        out.sort_unstable();
        out
    }

    /// `{y ∈ MOD : x+y = 1, |x|+|y| = 1}`.
    pub fn selectors_fallback(&self, x: usize) -> Vec<usize> {
        let l = self.lattice;
        self.modular
            .iter()
            .copied()
            .filter(|&y| l.join(x, y) == l.one() && l.norm_scaled(x) + l.norm_scaled(y) == l.scale())
            .collect()
    }
}

#[derive(Debug, Clone)]
enum CTerm {
    Slot(usize),
    Zero,
    One,
    Join(Box<CTerm>, Box<CTerm>),
    Meet(Box<CTerm>, Box<CTerm>),
}

#[derive(Debug, Clone)]
enum CDomain {
    All,
    Mod,
    Sel(CTerm, String),
}

#[derive(Debug, Clone)]
enum Kind {
    Const(i64),
    Dist(CTerm, CTerm),
    DistPrime(CTerm, CTerm),
    Norm(CTerm),
    Max(Vec<Node>),
    Min(Vec<Node>),
    TSub(Box<Node>, Box<Node>),
    Add(Vec<Node>),
    Scale(i64, i64, Box<Node>),
    Quant(Quantifier, usize, CDomain, Box<Node>),
}

#[derive(Debug, Clone)]
struct Node {
    kind: Kind,
    /// Static upper bound, scaled.
    hi: i64,
}

/// A formula compiled for one model.
#[derive(Debug, Clone)]
pub struct Compiled {
    root: Node,
    free: Vec<String>,
    slots: usize,
    denom: i64,
    /// `denom / lattice scale`.
    factor: i64,
}

fn denominators(f: &Formula, acc: i64) -> Option<i64> {
    match f {
        Formula::Const(c) => Some(acc.lcm(c.denom())),
        Formula::Dist(..) | Formula::DistPrime(..) | Formula::Norm(_) => Some(acc),
        Formula::Max(fs) | Formula::Min(fs) | Formula::Add(fs) => fs.iter().try_fold(acc, |a, f| denominators(f, a)),
        Formula::TSub(a, b) => denominators(b, denominators(a, acc)?),
        // Nested scales compound, so multiply rather than take the lcm.
        Formula::Scale(r, f) => denominators(f, acc)?.checked_mul(*r.denom()),
        Formula::Quant(_, _, _, body) => denominators(body, acc),
    }
}

struct Compiler<'s> {
    scope: Vec<(&'s str, usize)>,
    slots: usize,
    denom: i64,
}

impl<'s> Compiler<'s> {
    fn term(&self, t: &Term) -> Result<CTerm, LogicError> {
        Ok(match t {
            Term::Var(v) => {
                let slot = self.scope.iter().rev().find(|(n, _)| *n == v).map(|(_, s)| *s);
                CTerm::Slot(slot.ok_or_else(|| LogicError::UnboundVariable(v.clone()))?)
            }
            Term::Zero => CTerm::Zero,
            Term::One => CTerm::One,
            Term::Join(a, b) => CTerm::Join(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            Term::Meet(a, b) => CTerm::Meet(Box::new(self.term(a)?), Box::new(self.term(b)?)),
        })
    }

    fn scaled(&self, r: Rational) -> Result<i64, LogicError> {
        // `denom` is a multiple of every constant's denominator.
        r.numer().checked_mul(self.denom / r.denom()).ok_or(LogicError::Overflow)
    }

    fn node(&mut self, f: &'s Formula) -> Result<Node, LogicError> {
        let hi = self.scaled(f.upper_bound())?;
        let list = |c: &mut Self, fs: &'s [Formula]| fs.iter().map(|f| c.node(f)).collect::<Result<Vec<_>, _>>();
        let kind = match f {
            Formula::Const(c) => Kind::Const(self.scaled(*c)?),
            Formula::Dist(a, b) => Kind::Dist(self.term(a)?, self.term(b)?),
            Formula::DistPrime(a, b) => Kind::DistPrime(self.term(a)?, self.term(b)?),
            Formula::Norm(a) => Kind::Norm(self.term(a)?),
            Formula::Max(fs) => Kind::Max(list(self, fs)?),
            Formula::Min(fs) => Kind::Min(list(self, fs)?),
            Formula::Add(fs) => Kind::Add(list(self, fs)?),
            Formula::TSub(a, b) => Kind::TSub(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            Formula::Scale(r, g) => {
                if *r < Rational::from(0) {
                    return Err(LogicError::NegativeScale);
                }
                Kind::Scale(*r.numer(), *r.denom(), Box::new(self.node(g)?))
            }
            Formula::Quant(q, v, dom, body) => {
                let domain = match dom {
                    Domain::All => CDomain::All,
                    Domain::Mod => CDomain::Mod,
                    Domain::Sel(t) => CDomain::Sel(self.term(t)?, alloc::format!("{t}")),
                };
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.as_str(), slot));
                let body = self.node(body)?;
                self.scope.pop();
                Kind::Quant(*q, slot, domain, Box::new(body))
            }
        };
        Ok(Node { kind, hi })
    }
}

impl Compiled {
    /// Compiles `f` for `model`. Free variables of `f` must be among `free`;
    /// assignments passed to [`Compiled::eval`] follow the order of `free`.
    pub fn new(f: &Formula, free: &[&str], model: &Model) -> Result<Self, LogicError> {
        let scale = model.lattice.scale();
        let factor = denominators(f, 1).ok_or(LogicError::Overflow)?;
        let denom = scale.checked_mul(factor).ok_or(LogicError::Overflow)?;
        let mut c = Compiler { scope: free.iter().enumerate().map(|(i, v)| (*v, i)).collect(), slots: free.len(), denom };
        let root = c.node(f)?;
        Ok(Compiled { root, free: free.iter().map(|s| String::from(*s)).collect(), slots: c.slots, denom, factor })
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    fn env(&self, assignment: &[usize]) -> Vec<usize> {
        assert_eq!(assignment.len(), self.free.len(), "one value per free variable");
        let mut env = vec![0usize; self.slots];
        env[..assignment.len()].copy_from_slice(assignment);
        env
    }

    pub fn eval(&self, model: &Model, assignment: &[usize]) -> Result<Rational, LogicError> {
        let mut env = self.env(assignment);
        let v = self.node(&self.root, model, &mut env)?;
        Ok(Rational::new(v, self.denom))
    }

    /// The quantifier and domain of the outermost node, if it is a
    /// quantifier, so callers can split the outer loop across workers.
    pub fn outer_domain(&self, model: &Model, assignment: &[usize]) -> Result<Option<(Quantifier, Vec<usize>)>, LogicError> {
        let Kind::Quant(q, _, dom, _) = &self.root.kind else {
            return Ok(None);
        };
        let env = self.env(assignment);
        Ok(Some((*q, self.domain(dom, model, &env)?)))
    }

    /// Value of the outermost quantifier's body with its variable set to `value`.
    pub fn eval_outer_at(&self, model: &Model, assignment: &[usize], value: usize) -> Result<Rational, LogicError> {
        let Kind::Quant(_, slot, _, body) = &self.root.kind else {
            return self.eval(model, assignment);
        };
        let mut env = self.env(assignment);
        env[*slot] = value;
        Ok(Rational::new(self.node(body, model, &mut env)?, self.denom))
    }

    fn term(&self, t: &CTerm, l: &FiniteMetricLattice, env: &[usize]) -> usize {
        match t {
            CTerm::Slot(s) => env[*s],
            CTerm::Zero => l.zero(),
            CTerm::One => l.one(),
            CTerm::Join(a, b) => l.join(self.term(a, l, env), self.term(b, l, env)),
            CTerm::Meet(a, b) => l.meet(self.term(a, l, env), self.term(b, l, env)),
        }
    }

    fn domain(&self, dom: &CDomain, model: &Model, env: &[usize]) -> Result<Vec<usize>, LogicError> {
        Ok(match dom {
            CDomain::All => (0..model.lattice.len()).collect(),
            CDomain::Mod => model.modular.clone(),
            CDomain::Sel(t, text) => {
                let s = model.selectors(self.term(t, model.lattice, env));
                if s.is_empty() {
                    return Err(LogicError::DomainUnavailable(text.clone()));
                }
                s
            }
        })
    }

    fn node(&self, node: &Node, model: &Model, env: &mut Vec<usize>) -> Result<i64, LogicError> {
        let l = model.lattice;
        let v = match &node.kind {
            Kind::Const(c) => *c,
            Kind::Dist(a, b) => l.d_scaled(self.term(a, l, env), self.term(b, l, env)) * self.factor,
            Kind::DistPrime(a, b) => l.dprime_scaled(self.term(a, l, env), self.term(b, l, env)) * self.factor,
            Kind::Norm(a) => l.norm_scaled(self.term(a, l, env)) * self.factor,
            Kind::Max(fs) => {
                let mut best = 0;
                for f in fs {
                    best = best.max(self.node(f, model, env)?);
                    if best >= node.hi {
                        break;
                    }
                }
                best
            }
            Kind::Min(fs) => {
                let mut best = i64::MAX;
                for f in fs {
                    best = best.min(self.node(f, model, env)?);
                    if best == 0 {
                        break;
                    }
                }
                best
            }
            Kind::TSub(a, b) => {
                let a = self.node(a, model, env)?;
                if a == 0 {
                    0
                } else {
                    (a - self.node(b, model, env)?).max(0)
                }
            }
            Kind::Add(fs) => {
                let mut sum = 0;
                for f in fs {
                    sum += self.node(f, model, env)?;
                }
                sum
            }
            Kind::Scale(p, q, f) => {
                let v = self.node(f, model, env)? * p;
                debug_assert_eq!(v % q, 0, "scaled value leaves the common denominator");
                v / q
            }
            Kind::Quant(q, slot, dom, body) => {
                let values = self.domain(dom, model, env)?;
                let mut acc: Option<i64> = None;
                for x in values {
                    env[*slot] = x;
                    let v = self.node(body, model, env)?;
                    let next = match (q, acc) {
                        (_, None) => v,
                        (Quantifier::Sup, Some(a)) => a.max(v),
                        (Quantifier::Inf, Some(a)) => a.min(v),
                    };
                    acc = Some(next);
                    if (*q == Quantifier::Sup && next >= body.hi) || (*q == Quantifier::Inf && next == 0) {
                        break;
                    }
                }
                acc.unwrap_or(0)
            }
        };
        debug_assert!(0 <= v && v <= node.hi, "node value {v}/{} outside [0, {}]", self.denom, node.hi);
        Ok(v)
    }
}

/// Evaluates `f` with its free variables taken from `assignment`.
pub fn evaluate(f: &Formula, model: &Model, assignment: &[(&str, usize)]) -> Result<Rational, LogicError> {
    let free = f.free_vars();
    let mut names = Vec::with_capacity(free.len());
    let mut values = Vec::with_capacity(free.len());
    for v in &free {
        let (_, x) = assignment.iter().find(|(n, _)| n == v).ok_or_else(|| LogicError::UnboundVariable(v.clone()))?;
        names.push(v.as_str());
        values.push(*x);
    }
    Compiled::new(f, &names, model)?.eval(model, &values)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, parse_formula_with_free};
    use super::*;
    use crate::lattice::boolean_measure_lattice;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn constants_and_connectives() {
        let p = PartitionLattice::new(3).unwrap();
        let m = Model::partition(&p);
        let ev = |s: &str| evaluate(&parse_formula(s).unwrap(), &m, &[]).unwrap();
        assert_eq!(ev("tsub(d(0,1), 1)"), r(0, 1));
        assert_eq!(ev("add(1/3, 1/2, 1)"), r(11, 6));
        assert_eq!(ev("scale(1/4, scale(2/3, 1))"), r(1, 6));
        assert_eq!(ev("min(1/2, max(1/3, 1/5))"), r(1, 3));
        assert_eq!(ev("tsub(1/3, 1/2)"), r(0, 1));
        assert_eq!(ev("sup x . norm(x)"), r(1, 1));
        assert_eq!(ev("inf x . tsub(1, norm(x))"), r(0, 1));
        assert_eq!(ev("sup x . inf y . d(x, y)"), r(0, 1));
    }

    #[test]
    fn free_variables_and_errors() {
        let p = PartitionLattice::new(3).unwrap();
        let m = Model::partition(&p);
        let f = parse_formula_with_free("d(x, y)", &["x", "y"]).unwrap();
        let top = m.lattice().one();
        assert_eq!(evaluate(&f, &m, &[("x", 0), ("y", top)]).unwrap(), r(1, 1));
        assert_eq!(evaluate(&f, &m, &[("x", 0)]), Err(LogicError::UnboundVariable("y".into())));
    }

    #[test]
    fn selector_domains() {
        let p = PartitionLattice::new(4).unwrap();
        let m = Model::partition(&p);
        for x in 0..m.lattice().len() {
            assert_eq!(m.selectors(x), m.selectors_fallback(x));
        }
        // Every selector y of x has x + y = 1.
        let f = parse_formula("sup x . sup y in SEL(x) . d(join(x, y), 1)").unwrap();
        assert_eq!(evaluate(&f, &m, &[]).unwrap(), r(0, 1));
        // The top has a single selector, the bottom.
        let g = parse_formula("sup y in SEL(1) . norm(y)").unwrap();
        assert_eq!(evaluate(&g, &m, &[]).unwrap(), r(0, 1));
    }

    #[test]
    fn missing_selectors() {
        // Three-element chain: the middle element has no modular complement.
        let labels = (0..3).map(|i| alloc::format!("{i}")).collect();
        let join = (0..3).map(|i| (0..3).map(|j| usize::max(i, j)).collect()).collect();
        let metric = (0..3).map(|i: usize| (0..3).map(|j| r(i.abs_diff(j) as i64, 2)).collect()).collect();
        let l = crate::lattice::build_lattice(labels, join, metric).unwrap();
        let m = Model::new(&l);
        let f = parse_formula_with_free("inf y in SEL(x) . d(x, y)", &["x"]).unwrap();
        assert_eq!(evaluate(&f, &m, &[("x", 1)]), Err(LogicError::DomainUnavailable("x".into())));
        assert_eq!(evaluate(&f, &m, &[("x", 0)]).unwrap(), r(1, 1));
    }

    #[test]
    fn outer_split_matches_full_evaluation() {
        let l = boolean_measure_lattice(&[r(1, 1), r(2, 1), r(3, 1)]).unwrap();
        let m = Model::new(&l);
        let f = parse_formula("sup x . inf y . tsub(norm(join(x, y)), add(norm(x), scale(1/2, norm(y))))").unwrap();
        let c = Compiled::new(&f, &[], &m).unwrap();
        let (q, dom) = c.outer_domain(&m, &[]).unwrap().unwrap();
        assert_eq!(q, Quantifier::Sup);
        let split = dom.iter().map(|&x| c.eval_outer_at(&m, &[], x).unwrap()).max().unwrap();
        assert_eq!(split, c.eval(&m, &[]).unwrap());
    }
}
