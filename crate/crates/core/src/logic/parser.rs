//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := ("sup"|"inf") IDENT ["in" ("MOD" | "SEL(" term ")")] "." formula
//!          | "max(" formula {"," formula} ")" | "min(" ... ")" | "add(" ... ")"
//!          | "tsub(" formula "," formula ")" | "scale(" RATIONAL "," formula ")"
//!          | RATIONAL | "d(" term "," term ")" | "dp(" term "," term ")" | "norm(" term ")"
//! term    := IDENT | "0" | "1" | "join(" term "," term ")" | "meet(" term "," term ")"
//! RATIONAL := INT "/" INT | INT
//! ```

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Domain, Formula, LogicError, Quantifier, Term};
use crate::rational::Rational;

const RESERVED: [&str; 15] =
    ["sup", "inf", "in", "max", "min", "tsub", "add", "scale", "d", "dp", "norm", "join", "meet", "MOD", "SEL"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Parser<'a> {
    fn err<T>(&self, expected: &str) -> Result<T, LogicError> {
        Err(LogicError::Parse { pos: self.pos, expected: expected.to_string() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LogicError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&alloc::format!("'{c}'"))
        }
    }

    /// Reads an identifier-like word without consuming it.
    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if !rest.starts_with(is_ident_start) {
            return None;
        }
        let end = rest.find(|c: char| !is_ident_char(c)).unwrap_or(rest.len());
        Some(&rest[..end])
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        match self.peek_word() {
            Some(w) if !RESERVED.contains(&w) => {
                self.pos += w.len();
                Ok(w.to_string())
            }
            _ => self.err("variable name"),
        }
    }

    fn int(&mut self) -> Result<i64, LogicError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return self.err("integer");
        }
        let v = rest[..end].parse().or_else(|_| self.err("integer that fits in 64 bits"))?;
        self.pos += end;
        Ok(v)
    }

    fn rational(&mut self) -> Result<Rational, LogicError> {
        let p = self.int()?;
        if self.eat('/') {
            let at = self.pos;
            let q = self.int()?;
            if q == 0 {
                self.pos = at;
                return self.err("nonzero denominator");
            }
            Ok(Rational::new(p, q))
        } else {
            Ok(Rational::from(p))
        }
    }

    fn keyword_call(&mut self, word: &str) -> bool {
        let save = self.pos;
        if self.peek_word() == Some(word) {
            self.pos += word.len();
            if self.eat('(') {
                return true;
            }
        }
        self.pos = save;
        false
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                return Ok(Term::Zero);
            }
            Some('1') => {
                self.pos += 1;
                return Ok(Term::One);
            }
            _ => {}
        }
        for (word, meet) in [("join", false), ("meet", true)] {
            if self.keyword_call(word) {
                let a = self.term()?;
                self.expect(',')?;
                let b = self.term()?;
                self.expect(')')?;
                return Ok(if meet { Term::meet(a, b) } else { Term::join(a, b) });
            }
        }
        match self.peek_word() {
            Some(_) => self.ident().map(Term::Var),
            None => self.err("term"),
        }
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, LogicError> {
        let mut items = vec![self.formula()?];
        while self.eat(',') {
            items.push(self.formula()?);
        }
        self.expect(')')?;
        Ok(items)
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return self.rational().map(Formula::Const);
        }
        let Some(word) = self.peek_word() else {
            return self.err("formula");
        };
        match word {
            "sup" | "inf" => {
                self.pos += word.len();
                let q = if word == "sup" { Quantifier::Sup } else { Quantifier::Inf };
                let var = self.ident()?;
                let mut domain = Domain::All;
                if self.peek_word() == Some("in") {
                    self.pos += 2;
                    if self.peek_word() == Some("MOD") {
                        self.pos += 3;
                        domain = Domain::Mod;
                    } else if self.keyword_call("SEL") {
                        let t = self.term()?;
                        self.expect(')')?;
                        domain = Domain::Sel(t);
                    } else {
                        return self.err("MOD or SEL(term)");
                    }
                }
                self.expect('.')?;
                let body = self.formula()?;
                Ok(Formula::Quant(q, var, domain, Box::new(body)))
            }
            _ => self.call(word),
        }
    }

    fn call(&mut self, word: &str) -> Result<Formula, LogicError> {
        self.skip_ws();
        let start = self.pos;
        if !self.keyword_call(word) {
            return self.err("formula");
        }
        let two_terms = |p: &mut Self| -> Result<(Term, Term), LogicError> {
            let a = p.term()?;
            p.expect(',')?;
            let b = p.term()?;
            p.expect(')')?;
            Ok((a, b))
        };
        match word {
            "max" => Ok(Formula::Max(self.formula_list()?)),
            "min" => Ok(Formula::Min(self.formula_list()?)),
            "add" => Ok(Formula::Add(self.formula_list()?)),
            "tsub" => {
                let a = self.formula()?;
                self.expect(',')?;
                let b = self.formula()?;
                self.expect(')')?;
                Ok(Formula::tsub(a, b))
            }
            "scale" => {
                let r = self.rational()?;
                self.expect(',')?;
                let f = self.formula()?;
                self.expect(')')?;
                Ok(Formula::Scale(r, Box::new(f)))
            }
            "d" => two_terms(self).map(|(a, b)| Formula::Dist(a, b)),
            "dp" => two_terms(self).map(|(a, b)| Formula::DistPrime(a, b)),
            "norm" => {
                let a = self.term()?;
                self.expect(')')?;
                Ok(Formula::Norm(a))
            }
            _ => {
                self.pos = start;
                self.err("formula")
            }
        }
    }
}

fn parse_complete<'a, T>(
    text: &'a str,
    f: impl FnOnce(&mut Parser<'a>) -> Result<T, LogicError>,
) -> Result<T, LogicError> {
    let mut p = Parser { src: text, pos: 0 };
    let out = f(&mut p)?;
    if p.peek().is_some() {
        return p.err("end of input");
    }
    Ok(out)
}

/// Parses a sentence; any free variable is an error.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    parse_formula_with_free(text, &[])
}

/// Parses a formula whose free variables must all be listed in `free`.
pub fn parse_formula_with_free(text: &str, free: &[&str]) -> Result<Formula, LogicError> {
    let f = parse_complete(text, Parser::formula)?;
    if let Some(v) = f.free_vars().into_iter().find(|v| !free.contains(&v.as_str())) {
        return Err(LogicError::UnboundVariable(v));
    }
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, LogicError> {
    parse_complete(text, Parser::term)
}

#[cfg(test)]
mod tests {
    use super::super::format_formula;
    use super::*;

    #[test]
    fn simple_sentences() {
        let f = parse_formula("tsub(d(0,1), 1)").unwrap();
        assert_eq!(f, Formula::tsub(Formula::Dist(Term::Zero, Term::One), Formula::Const(Rational::from(1))));
        let g = parse_formula("  sup x in MOD .  max( norm(x) , 3/6 ) ").unwrap();
        assert_eq!(format_formula(&g), "sup x in MOD . max(norm(x), 1/2)");
    }

    #[test]
    fn unbound_variables() {
        assert_eq!(parse_formula("sup x . d(x, y)"), Err(LogicError::UnboundVariable("y".into())));
        assert!(parse_formula_with_free("sup x . d(x, y)", &["y"]).is_ok());
        assert_eq!(
            parse_formula("inf w in SEL(w) . d(w, 0)"),
            Err(LogicError::UnboundVariable("w".into()))
        );
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_formula("max(1, )"), Err(LogicError::Parse { pos: 7, expected: "formula".into() }));
        assert!(matches!(parse_formula("d(0,1) d"), Err(LogicError::Parse { pos: 7, .. })));
        assert!(matches!(parse_formula("1/0"), Err(LogicError::Parse { pos: 2, .. })));
        assert!(matches!(parse_formula("sup d . 0"), Err(LogicError::Parse { pos: 4, .. })));
        assert!(matches!(parse_formula("foo(1)"), Err(LogicError::Parse { pos: 0, .. })));
        assert!(matches!(parse_formula("sup x in ALL . 0"), Err(LogicError::Parse { pos: 9, .. })));
        assert!(matches!(parse_formula(""), Err(LogicError::Parse { pos: 0, .. })));
    }

    #[test]
    fn terms() {
        assert_eq!(parse_term("meet(x, join(0, y'))").unwrap(), Term::meet(Term::var("x"), Term::join(Term::Zero, Term::var("y'"))));
        assert!(parse_term("2").is_err());
    }

    #[test]
    fn round_trip() {
        for src in [
            "sup x . sup y . inf z . max(tsub(add(norm(x), norm(y)), add(norm(join(x, y)), norm(z))), d(join(x, z), x))",
            "inf w in SEL(join(y, z)) . scale(1/4, dp(meet(w, 1), 0))",
            "min(1, 0, 7/3)",
        ] {
            let f = parse_formula_with_free(src, &["y", "z"]).unwrap();
            assert_eq!(format_formula(&f), src);
            assert_eq!(parse_formula_with_free(&format_formula(&f), &["y", "z"]).unwrap(), f);
        }
    }
}
