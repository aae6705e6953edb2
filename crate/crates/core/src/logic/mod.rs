//! A continuous-logic formula language over metric lattices.
//!
//! Formulas take values in the non-negative rationals; sentences of the
//! metric-lattice language take values in `[0,1]`, with `0` meaning "true".
//! `add` is exact (not truncated at 1) so that expressions like
//! `(|x| + |y|) ∸ (|x+y| + |z|)` keep their meaning.
//!
//! `meet` is an extension of the base language `{0, 1, +, d}`; it is evaluated
//! with the model's exact meet table.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::rational::Rational;

mod eval;
mod parser;
mod registry;

pub use eval::{evaluate, Compiled, Model};
pub use parser::{parse_formula, parse_formula_with_free, parse_term};
pub use registry::{builtin, builtin_sentences, psi_formula, BuiltinEntry};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    All,
    /// Metrically modular elements.
    Mod,
    /// Selectors of the term's value: partition-lattice selectors when the
    /// model is a partition lattice, otherwise `{y ∈ MOD : t+y = 1, |t|+|y| = 1}`.
    Sel(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Sup,
    Inf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(Rational),
    Dist(Term, Term),
    DistPrime(Term, Term),
    Norm(Term),
    Max(Vec<Formula>),
    Min(Vec<Formula>),
    /// Truncated subtraction `a ∸ b = max(a - b, 0)`.
    TSub(Box<Formula>, Box<Formula>),
    Add(Vec<Formula>),
    Scale(Rational, Box<Formula>),
    Quant(Quantifier, String, Domain, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("parse error at byte {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("no selectors available for the value of {0}")]
    DomainUnavailable(String),
    #[error("formula is not in prenex form")]
    NotPrenex,
    #[error("scale factors must be non-negative")]
    NegativeScale,
    #[error("common denominator overflows 64 bits")]
    Overflow,
    #[error("unknown builtin {0}")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrenexClass {
    /// Only `sup` quantifiers (or none).
    Universal,
    /// Only `inf` quantifiers.
    Existential,
    /// A block of `sup` followed by a block of `inf`.
    ForallExists,
    Other,
}

impl fmt::Display for PrenexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrenexClass::Universal => "universal",
            PrenexClass::Existential => "existential",
            PrenexClass::ForallExists => "forall-exists",
            PrenexClass::Other => "other",
        })
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn uses_meet(&self) -> bool {
        match self {
            Term::Var(_) | Term::Zero | Term::One => false,
            Term::Join(a, b) => a.uses_meet() || b.uses_meet(),
            Term::Meet(..) => true,
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl Formula {
    pub fn quant(q: Quantifier, var: &str, domain: Domain, body: Formula) -> Formula {
        Formula::Quant(q, var.into(), domain, Box::new(body))
    }

    pub fn tsub(a: Formula, b: Formula) -> Formula {
        Formula::TSub(Box::new(a), Box::new(b))
    }

    /// `|a - b|` as `max(a ∸ b, b ∸ a)`.
    pub fn abs_diff(a: Formula, b: Formula) -> Formula {
        Formula::Max(alloc::vec![Formula::tsub(a.clone(), b.clone()), Formula::tsub(b, a)])
    }

    /// Free variables, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let terms = |ts: &[&Term], bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            for t in ts {
                t.collect_vars(&mut vs);
            }
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Const(_) => {}
            Formula::Dist(a, b) | Formula::DistPrime(a, b) => terms(&[a, b], bound, out),
            Formula::Norm(a) => terms(&[a], bound, out),
            Formula::Max(fs) | Formula::Min(fs) | Formula::Add(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out));
            }
            Formula::TSub(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Scale(_, f) => f.collect_free(bound, out),
            Formula::Quant(_, v, dom, body) => {
                // The domain term is evaluated outside the quantifier's scope.
                if let Domain::Sel(t) = dom {
                    terms(&[t], bound, out);
                }
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Whether the `meet` extension appears anywhere.
    pub fn uses_meet(&self) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Dist(a, b) | Formula::DistPrime(a, b) => a.uses_meet() || b.uses_meet(),
            Formula::Norm(a) => a.uses_meet(),
            Formula::Max(fs) | Formula::Min(fs) | Formula::Add(fs) => fs.iter().any(Formula::uses_meet),
            Formula::TSub(a, b) => a.uses_meet() || b.uses_meet(),
            Formula::Scale(_, f) => f.uses_meet(),
            Formula::Quant(_, _, dom, body) => matches!(dom, Domain::Sel(t) if t.uses_meet()) || body.uses_meet(),
        }
    }

    /// Static upper bound on the value over all models and assignments.
    pub fn upper_bound(&self) -> Rational {
        match self {
            Formula::Const(c) => *c,
            Formula::Dist(..) | Formula::Norm(_) => Rational::from(1),
            Formula::DistPrime(..) => Rational::from(2),
            Formula::Max(fs) => fs.iter().map(Formula::upper_bound).max().unwrap_or_default(),
            Formula::Min(fs) => fs.iter().map(Formula::upper_bound).min().unwrap_or_default(),
            Formula::TSub(a, _) => a.upper_bound(),
            Formula::Add(fs) => fs.iter().map(Formula::upper_bound).sum(),
            Formula::Scale(r, f) => *r * f.upper_bound(),
            Formula::Quant(_, _, _, body) => body.upper_bound(),
        }
    }
}

/// Quantifier prefix of a prenex formula.
pub fn quantifier_prefix(f: &Formula) -> Result<Vec<Quantifier>, LogicError> {
    let mut prefix = Vec::new();
    let mut cur = f;
    while let Formula::Quant(q, _, _, body) = cur {
        prefix.push(*q);
        cur = body;
    }
    if contains_quantifier(cur) {
        return Err(LogicError::NotPrenex);
    }
    Ok(prefix)
}

fn contains_quantifier(f: &Formula) -> bool {
    match f {
        Formula::Const(_) | Formula::Dist(..) | Formula::DistPrime(..) | Formula::Norm(_) => false,
        Formula::Max(fs) | Formula::Min(fs) | Formula::Add(fs) => fs.iter().any(contains_quantifier),
        Formula::TSub(a, b) => contains_quantifier(a) || contains_quantifier(b),
        Formula::Scale(_, f) => contains_quantifier(f),
        Formula::Quant(..) => true,
    }
}

/// Classifies a prenex formula by its quantifier prefix.
pub fn prenex_classify(f: &Formula) -> Result<PrenexClass, LogicError> {
    let prefix = quantifier_prefix(f)?;
    let sups = prefix.iter().take_while(|q| **q == Quantifier::Sup).count();
    let rest = &prefix[sups..];
    Ok(if rest.is_empty() {
        PrenexClass::Universal
    } else if rest.contains(&Quantifier::Sup) {
        PrenexClass::Other
    } else if sups == 0 {
        PrenexClass::Existential
    } else {
        PrenexClass::ForallExists
    })
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Join(a, b) => write!(f, "join({a}, {b})"),
            Term::Meet(a, b) => write!(f, "meet({a}, {b})"),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str(")")
}

/// Canonical text form; [`parse_formula`] inverts it exactly.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => write_rational(f, c),
            Formula::Dist(a, b) => write!(f, "d({a}, {b})"),
            Formula::DistPrime(a, b) => write!(f, "dp({a}, {b})"),
            Formula::Norm(a) => write!(f, "norm({a})"),
            Formula::Max(fs) => write_list(f, "max", fs),
            Formula::Min(fs) => write_list(f, "min", fs),
            Formula::Add(fs) => write_list(f, "add", fs),
            Formula::TSub(a, b) => write!(f, "tsub({a}, {b})"),
            Formula::Scale(r, body) => {
                f.write_str("scale(")?;
                write_rational(f, r)?;
                write!(f, ", {body})")
            }
            Formula::Quant(q, v, dom, body) => {
                f.write_str(match q {
                    Quantifier::Sup => "sup ",
                    Quantifier::Inf => "inf ",
                })?;
                f.write_str(v)?;
                match dom {
                    Domain::All => {}
                    Domain::Mod => f.write_str(" in MOD")?,
                    Domain::Sel(t) => write!(f, " in SEL({t})")?,
                }
                write!(f, " . {body}")
            }
        }
    }
}

/// Canonical text of a formula.
pub fn format_formula(f: &Formula) -> String {
    alloc::format!("{f}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn d(a: &str, b: &str) -> Formula {
        Formula::Dist(Term::var(a), Term::var(b))
    }

    #[test]
    fn free_variables_respect_scope() {
        let f = Formula::quant(Quantifier::Sup, "x", Domain::All, Formula::Max(vec![d("x", "y"), d("z", "x")]));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y", "z"]);
        let sel = Formula::quant(Quantifier::Inf, "w", Domain::Sel(Term::var("w")), d("w", "w"));
        assert!(sel.free_vars().contains("w"));
    }

    #[test]
    fn prenex_classes() {
        let body = d("x", "y");
        let sup = |v: &str, f| Formula::quant(Quantifier::Sup, v, Domain::All, f);
        let inf = |v: &str, f| Formula::quant(Quantifier::Inf, v, Domain::All, f);
        assert_eq!(prenex_classify(&Formula::Const(Rational::from(0))), Ok(PrenexClass::Universal));
        assert_eq!(prenex_classify(&sup("x", sup("y", body.clone()))), Ok(PrenexClass::Universal));
        assert_eq!(prenex_classify(&inf("x", body.clone())), Ok(PrenexClass::Existential));
        assert_eq!(prenex_classify(&sup("x", inf("y", body.clone()))), Ok(PrenexClass::ForallExists));
        assert_eq!(prenex_classify(&inf("x", sup("y", body.clone()))), Ok(PrenexClass::Other));
        let nested = sup("x", Formula::tsub(inf("y", body.clone()), body));
        assert_eq!(prenex_classify(&nested), Err(LogicError::NotPrenex));
    }

    #[test]
    fn bounds_and_extension_flags() {
        let f = Formula::Add(vec![Formula::Norm(Term::var("x")), Formula::Scale(Rational::new(1, 4), Box::new(d("x", "y")))]);
        assert_eq!(f.upper_bound(), Rational::new(5, 4));
        assert!(!f.uses_meet());
        assert!(Formula::Norm(Term::meet(Term::Zero, Term::One)).uses_meet());
    }

    #[test]
    fn canonical_text() {
        let f = Formula::quant(
            Quantifier::Inf,
            "w",
            Domain::Sel(Term::join(Term::var("y"), Term::Zero)),
            Formula::tsub(Formula::Const(Rational::new(1, 2)), Formula::DistPrime(Term::var("w"), Term::One)),
        );
        assert_eq!(format_formula(&f), "inf w in SEL(join(y, 0)) . tsub(1/2, dp(w, 1))");
    }
}
