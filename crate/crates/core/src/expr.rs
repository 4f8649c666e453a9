//! Lattice and form expressions such as `U(2)+E8(2)+<-24>` or `u2^5+c(-8)`.
//!
//! ```text
//! expr := term ( "+" term )*
//! term := base ( "^" INT )?
//! base := NAME ( "(" RATIONAL ")" )? | "<" INT ">"        lattices, NAME = U | E8 | D4
//! base := u2 | v2 | u(2) | v(2) | c "(" INT ")"          forms
//! ```
//!
//! Whitespace is ignored everywhere.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fqf::{Fqf, Rat};
use crate::lattice::Lattice;

/// Syntax tree of a lattice expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeExpr {
    Atom(String),
    Scaled(Box<LatticeExpr>, Rat),
    Span(i64),
    Sum(Vec<LatticeExpr>),
    Power(Box<LatticeExpr>, u32),
}

/// Syntax tree of a form expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormExpr {
    U2,
    V2,
    Cyclic(i64),
    Sum(Vec<FormExpr>),
    Power(Box<FormExpr>, u32),
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(d) => self.err(format!("expected '{c}', found '{d}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_ascii_alphanumeric() {
                break;
            }
            self.pos += 1;
        }
        self.src[start..self.pos].to_string()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src[self.pos..].starts_with(['-', '+']) {
            self.pos += 1;
        }
        self.skip_ws();
        let digits = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text: String = self.src[start..self.pos]
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        text.parse::<i64>().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn rational(&mut self) -> Result<Rat> {
        let start = self.pos;
        let n = self.int()?;
        let d = if self.eat('/') { self.int()? } else { 1 };
        if d <= 0 {
            self.pos = start;
            return self.err("denominator must be positive");
        }
        Ok(Rat::new(n, d))
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if !self.eat('^') {
            return Ok(None);
        }
        let at = self.pos;
        let k = self.int()?;
        if k < 1 || k > u32::MAX as i64 {
            self.pos = at;
            return self.err("exponent must be a positive integer");
        }
        Ok(Some(k as u32))
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

/// Parses a lattice expression.
pub fn parse_lattice_expr(text: &str) -> Result<LatticeExpr> {
    let mut c = Cursor::new(text);
    let mut terms = vec![lattice_term(&mut c)?];
    while c.eat('+') {
        terms.push(lattice_term(&mut c)?);
    }
    c.finish()?;
    Ok(if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        LatticeExpr::Sum(terms)
    })
}

fn lattice_term(c: &mut Cursor) -> Result<LatticeExpr> {
    let base = if c.eat('<') {
        let at = c.pos;
        let m = c.int()?;
        if m == 0 || m % 2 != 0 {
            c.pos = at;
            return c.err(format!("<{m}> needs a nonzero even integer"));
        }
        c.expect('>')?;
        LatticeExpr::Span(m)
    } else {
        c.skip_ws();
        let at = c.pos;
        let name = c.ident();
        if !matches!(name.as_str(), "U" | "E8" | "D4") {
            c.pos = at;
            return if name.is_empty() {
                c.err("expected a lattice name or <m>")
            } else {
                c.err(format!("unknown lattice {name:?}"))
            };
        }
        let atom = LatticeExpr::Atom(name);
        if c.eat('(') {
            let at = c.pos;
            let r = c.rational()?;
            if r == Rat::from_integer(0) {
                c.pos = at;
                return c.err("scale must be nonzero");
            }
            c.expect(')')?;
            LatticeExpr::Scaled(Box::new(atom), r)
        } else {
            atom
        }
    };
    Ok(match c.exponent()? {
        Some(k) => LatticeExpr::Power(Box::new(base), k),
        None => base,
    })
}

/// Parses a form expression.
pub fn parse_form_expr(text: &str) -> Result<FormExpr> {
    let mut c = Cursor::new(text);
    let mut terms = vec![form_term(&mut c)?];
    while c.eat('+') {
        terms.push(form_term(&mut c)?);
    }
    c.finish()?;
    Ok(if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        FormExpr::Sum(terms)
    })
}

fn form_term(c: &mut Cursor) -> Result<FormExpr> {
    c.skip_ws();
    let at = c.pos;
    let name = c.ident();
    let base = match name.as_str() {
        "u2" => FormExpr::U2,
        "v2" => FormExpr::V2,
        "u" | "v" => {
            c.expect('(')?;
            let p = c.pos;
            if c.int()? != 2 {
                c.pos = p;
                return c.err("only u(2) and v(2) are available");
            }
            c.expect(')')?;
            if name == "u" {
                FormExpr::U2
            } else {
                FormExpr::V2
            }
        }
        "c" => {
            c.expect('(')?;
            let p = c.pos;
            let m = c.int()?;
            if m == 0 || m % 2 != 0 {
                c.pos = p;
                return c.err(format!("c({m}) needs a nonzero even integer"));
            }
            c.expect(')')?;
            FormExpr::Cyclic(m)
        }
        "" => {
            c.pos = at;
            return c.err("expected u2, v2 or c(m)");
        }
        other => {
            c.pos = at;
            return c.err(format!("unknown form {other:?}"));
        }
    };
    Ok(match c.exponent()? {
        Some(k) => FormExpr::Power(Box::new(base), k),
        None => base,
    })
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Atom(n) => write!(f, "{n}"),
            LatticeExpr::Scaled(e, r) => write!(f, "{e}({})", fmt_rat(r)),
            LatticeExpr::Span(m) => write!(f, "<{m}>"),
            LatticeExpr::Sum(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
            LatticeExpr::Power(e, k) => write!(f, "{e}^{k}"),
        }
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormExpr::U2 => write!(f, "u2"),
            FormExpr::V2 => write!(f, "v2"),
            FormExpr::Cyclic(m) => write!(f, "c({m})"),
            FormExpr::Sum(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
            FormExpr::Power(e, k) => write!(f, "{e}^{k}"),
        }
    }
}

impl LatticeExpr {
    pub fn eval(&self) -> Result<Lattice> {
        let l = match self {
            LatticeExpr::Atom(n) => match n.as_str() {
                "U" => Lattice::u(),
                "E8" => Lattice::e8(),
                "D4" => Lattice::d4(),
                other => return Err(Error::InvalidArgument(format!("unknown lattice {other:?}"))),
            },
            LatticeExpr::Scaled(e, r) => {
                let m = BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
                e.eval()?.rescale(&m)?
            }
            LatticeExpr::Span(m) => Lattice::span(*m)?,
            LatticeExpr::Sum(ts) => {
                let parts = ts.iter().map(|t| t.eval()).collect::<Result<Vec<_>>>()?;
                Lattice::direct_sum(&parts.iter().collect::<Vec<_>>())
            }
            LatticeExpr::Power(e, k) => e.eval()?.power(*k as usize),
        };
        Ok(l.with_label(self.to_string()))
    }
}

impl FormExpr {
    pub fn eval(&self) -> Result<Fqf> {
        Ok(match self {
            FormExpr::U2 => Fqf::u2(),
            FormExpr::V2 => Fqf::v2(),
            FormExpr::Cyclic(m) => Fqf::cyclic(*m)?,
            FormExpr::Sum(ts) => {
                let parts = ts.iter().map(|t| t.eval()).collect::<Result<Vec<_>>>()?;
                Fqf::direct_sum(&parts.iter().collect::<Vec<_>>())
            }
            FormExpr::Power(e, k) => e.eval()?.power(*k as usize),
        })
    }
}

/// Parses and evaluates a lattice expression.
pub fn lattice(text: &str) -> Result<Lattice> {
    parse_lattice_expr(text)?.eval()
}

/// Parses and evaluates a form expression.
pub fn form(text: &str) -> Result<Fqf> {
    parse_form_expr(text)?.eval()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enriques::{classify_picard11, NsKind};

    #[test]
    fn type_one_expression() {
        let l = lattice("U(2)+E8(2)+<-24>").unwrap();
        assert_eq!(l.rank(), 11);
        let t = classify_picard11(&l).unwrap().unwrap();
        assert_eq!((t.kind, t.parameter), (NsKind::I, 12));
    }

    #[test]
    fn kummer_ns_expression() {
        let e = parse_lattice_expr("U+E8+D4^2").unwrap();
        assert_eq!(
            e,
            LatticeExpr::Sum(vec![
                LatticeExpr::Atom("U".into()),
                LatticeExpr::Atom("E8".into()),
                LatticeExpr::Power(Box::new(LatticeExpr::Atom("D4".into())), 2),
            ])
        );
        assert_eq!(e.eval().unwrap().rank(), 18);
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(
            parse_lattice_expr(" U ( 2 ) + < - 8 > ").unwrap(),
            parse_lattice_expr("U(2)+<-8>").unwrap()
        );
        assert_eq!(parse_form_expr("u2 ^ 5 + c( -8 )").unwrap().to_string(), "u2^5+c(-8)");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(lattice("E8(3/2)"), Err(Error::NonIntegral));
        match parse_lattice_expr("U+<-3>") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_lattice_expr("U+X") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_lattice_expr("U+"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_lattice_expr("U^0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_lattice_expr("U)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_form_expr("c(3)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_form_expr("w2"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn form_expressions() {
        assert_eq!(form("u(2)+v(2)").unwrap(), Fqf::direct_sum(&[&Fqf::u2(), &Fqf::v2()]));
        assert_eq!(form("u2^5+c(-8)").unwrap().size(), 8192);
    }

    #[test]
    fn printing_round_trips() {
        for s in ["U(2)+E8(2)+<-24>", "U+E8+D4^2", "E8(1/2)^3+<2>", "U(-1)"] {
            assert_eq!(parse_lattice_expr(s).unwrap().to_string(), s);
        }
    }
}
