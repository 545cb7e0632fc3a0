//! Element expressions.
//!
//! ```text
//! expr      := term (('+' | '-') term)*
//! term      := atom ('*' atom)*
//! atom      := rational | generator | '(' expr ')'
//! rational  := ['-'] digits ['/' digits]
//! generator := 'e' '(' digits (',' digits)* ')' | 'y' digits | 'p' digits
//! ```
//!
//! Whitespace between tokens is ignored. `p` stands for `psi`; residues are
//! 0-based and strand positions 1-based. Error offsets are 1-based byte
//! columns, so a missing token at the end of `e(0,1` is reported at 6.

use std::fmt;

use crate::engine::{AlgebraElement, Coeff, Generator};
use crate::error::{Error, Result};
use crate::residue::ResidueSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub first: Term,
    pub rest: Vec<(Op, Term)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term(pub Vec<Atom>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Rational(Coeff),
    Gen(Generator),
    Group(Box<Expr>),
}

/// A parsed expression together with the `n` it was checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementExpr {
    pub n: usize,
    pub tree: Expr,
}

impl ElementExpr {
    pub fn to_element(&self) -> Result<AlgebraElement> {
        self.tree.eval(self.n)
    }
}

impl fmt::Display for ElementExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tree.fmt(f)
    }
}

impl Expr {
    pub fn eval(&self, n: usize) -> Result<AlgebraElement> {
        let mut acc = self.first.eval(n)?;
        for (op, t) in &self.rest {
            let v = t.eval(n)?;
            acc = match op {
                Op::Add => acc.add(&v)?,
                Op::Sub => acc.sub(&v)?,
            };
        }
        Ok(acc)
    }
}

impl Term {
    fn eval(&self, n: usize) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::unit(n);
        for a in &self.0 {
            let v = match a {
                Atom::Rational(c) => AlgebraElement::scalar(n, *c),
                Atom::Gen(g) => AlgebraElement::generator(n, g.clone())?,
                Atom::Group(e) => e.eval(n)?,
            };
            acc = acc.concat(&v)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.first)?;
        for (op, t) in &self.rest {
            let sym = match op {
                Op::Add => "+",
                Op::Sub => "-",
            };
            write!(f, " {sym} {t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, a) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            match a {
                Atom::Rational(c) if c.is_integer() => write!(f, "{}", c.numer())?,
                Atom::Rational(c) => write!(f, "{}/{}", c.numer(), c.denom())?,
                Atom::Gen(g) => write!(f, "{g}")?,
                Atom::Group(e) => write!(f, "({e})")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Letter(char),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number {s}"),
            Tok::Letter(c) => write!(f, "'{c}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

/// Tokens paired with their 1-based byte column.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let col = pos + 1;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            out.push((Tok::Num(text[start..pos].to_string()), col));
            continue;
        }
        let tok = match c {
            b'e' | b'y' | b'p' => Tok::Letter(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            _ => {
                let ch = text[pos..].chars().next().expect("in bounds");
                return Err(err(col, format!("unexpected character {ch:?}")));
            }
        };
        out.push((tok, col));
        pos += 1;
    }
    out.push((Tok::End, bytes.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(err(self.col(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn number(&mut self) -> Result<(u64, usize)> {
        match self.bump() {
            (Tok::Num(s), col) => {
                s.parse::<u64>().map(|v| (v, col)).map_err(|_| err(col, format!("number {s} is too large")))
            }
            (t, col) => Err(err(col, format!("expected a number, found {t}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let first = self.term()?;
        let mut rest = Vec::new();
        loop {
            let op = match self.peek() {
                Tok::Plus => Op::Add,
                Tok::Minus => Op::Sub,
                _ => break,
            };
            self.bump();
            rest.push((op, self.term()?));
        }
        Ok(Expr { first, rest })
    }

    fn term(&mut self) -> Result<Term> {
        let mut atoms = vec![self.atom()?];
        while *self.peek() == Tok::Star {
            self.bump();
            atoms.push(self.atom()?);
        }
        Ok(Term(atoms))
    }

    fn atom(&mut self) -> Result<Atom> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Minus | Tok::Num(_) => self.rational(),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Atom::Group(Box::new(e)))
            }
            Tok::Letter('e') => {
                self.bump();
                self.expect(Tok::LParen)?;
                let mut entries = vec![self.number()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    entries.push(self.number()?);
                }
                self.expect(Tok::RParen)?;
                if entries.len() != self.n {
                    return Err(err(col, format!("e(...) needs {} residues, got {}", self.n, entries.len())));
                }
                if let Some((r, rc)) = entries.iter().find(|(r, _)| *r as usize >= self.n) {
                    return Err(err(*rc, format!("residue {r} out of range 0..{}", self.n)));
                }
                let seq = ResidueSeq::new(entries.iter().map(|(r, _)| *r as usize).collect())
                    .map_err(|_| err(col, "e(...) arguments are not a permutation"))?;
                Ok(Atom::Gen(Generator::Idem(seq)))
            }
            Tok::Letter(c) => {
                self.bump();
                let (k, kc) = self.number()?;
                let (g, max) = if c == 'y' {
                    (Generator::Dot(k as usize), self.n)
                } else {
                    (Generator::Cross(k as usize), self.n - 1)
                };
                if k == 0 || k as usize > max {
                    return Err(err(kc, format!("{c}{k} out of range 1..={max}")));
                }
                Ok(Atom::Gen(g))
            }
            t => Err(err(col, format!("expected a number, generator or '(', found {t}"))),
        }
    }

    fn rational(&mut self) -> Result<Atom> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let (p, _) = self.number()?;
        let mut q = 1;
        if *self.peek() == Tok::Slash {
            self.bump();
            let (d, dc) = self.number()?;
            if d == 0 {
                return Err(err(dc, "zero denominator"));
            }
            q = d;
        }
        let col = self.col();
        let p = i64::try_from(p).map_err(|_| err(col, "numerator too large"))?;
        let q = i64::try_from(q).map_err(|_| err(col, "denominator too large"))?;
        Ok(Atom::Rational(Coeff::new(if negative { -p } else { p }, q)))
    }
}

/// Parses `text` as an element of `R_n`, checking generator bounds.
pub fn parse_element(text: &str, n: usize) -> Result<ElementExpr> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let mut p = Parser { toks: lex(text)?, pos: 0, n };
    let tree = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(err(p.col(), format!("unexpected {}", p.peek())));
    }
    Ok(ElementExpr { n, tree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(text: &str, n: usize) -> usize {
        match parse_element(text, n) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn product_of_three() {
        let e = parse_element("e(0,1,2) * p2 * p2", 3).unwrap();
        assert!(e.tree.rest.is_empty());
        assert_eq!(e.tree.first.0.len(), 3);
        assert_eq!(e.to_string(), "e(0,1,2)*p2*p2");
    }

    #[test]
    fn difference() {
        let e = parse_element("y2*e(0,1) - e(0,1)*y2", 2).unwrap();
        assert_eq!(e.tree.rest.len(), 1);
        assert_eq!(e.tree.rest[0].0, Op::Sub);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(offset("e(0,1", 2), 6);
        assert_eq!(offset("y3", 2), 2);
        assert_eq!(offset("p0", 2), 2);
        assert_eq!(offset("e(0,0)", 2), 1);
        assert_eq!(offset("e(0,2)", 2), 5);
        assert_eq!(offset("1/0", 2), 3);
        assert_eq!(offset("y1 y2", 2), 4);
        assert_eq!(offset("x", 2), 1);
        assert_eq!(offset("", 2), 1);
        assert_eq!(offset("-y1", 2), 2);
    }

    #[test]
    fn rationals_and_groups() {
        let e = parse_element("-2/4*(y1 + p1) - -3", 2).unwrap();
        assert_eq!(e.to_string(), "-1/2*(y1 + p1) - -3");
        assert_eq!(parse_element(&e.to_string(), 2).unwrap(), e);
        let v = e.to_element().unwrap();
        assert_eq!(v.len(), 3);
    }
}
