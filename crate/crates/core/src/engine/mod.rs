//! Elements of `R_n` and their reduction to the canonical basis.
//!
//! An [`AlgebraElement`] is a finite exact-rational combination of generator
//! [`Word`]s. [`KlrAlgebra`] owns the verified rule set for one `n` and
//! rewrites any element to a combination of [`NormalWord`]s
//! `e(i) y_n^a psi_w`.

mod algebra;
mod normal;
mod relations;
mod table;
mod trace;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::residue::ResidueSeq;

pub use algebra::{KlrAlgebra, MAX_ENGINE_N};
pub use normal::{degree, lex_min_reduced_word, NormalWord};
pub use relations::{relation_instances, Fact, Rule};
pub use table::{RingReport, StructureConstantTable};
pub use trace::{
    derive_dot_rules, derive_idempotent_vanishing, replay, verified_facts, DerivationTrace, FactBook, Step,
};

pub type Coeff = num::rational::Rational64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `e(i)`
    Idem(ResidueSeq),
    /// `y_k`, strand `1..=n`
    Dot(usize),
    /// `psi_k`, `1..=n-1`
    Cross(usize),
}

impl Generator {
    pub fn check(&self, n: usize) -> Result<()> {
        match self {
            Generator::Idem(i) if i.n() != n => {
                Err(Error::InvalidInput(format!("idempotent {i} has length {} but n = {n}", i.n())))
            }
            Generator::Dot(k) if *k < 1 || *k > n => Err(Error::InvalidInput(format!("y{k} out of range 1..={n}"))),
            Generator::Cross(k) if *k < 1 || *k >= n => {
                Err(Error::InvalidInput(format!("p{k} out of range 1..={}", n - 1)))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Idem(i) => write!(f, "e{i}"),
            Generator::Dot(k) => write!(f, "y{k}"),
            Generator::Cross(k) => write!(f, "p{k}"),
        }
    }
}

/// Generators composed left to right; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn new(gens: Vec<Generator>) -> Self {
        Word(gens)
    }

    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// Replace `len` generators starting at `pos` by `middle`.
    pub fn splice(&self, pos: usize, len: usize, middle: &Word) -> Word {
        let mut v = self.0[..pos].to_vec();
        v.extend(middle.0.iter().cloned());
        v.extend(self.0[pos + len..].iter().cloned());
        Word(v)
    }

    /// Strings like `["e(0,1,3,2)", "y4", "p2"]`.
    pub fn tokens(&self) -> Vec<String> {
        self.0.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, g) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Finite linear combination of words with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<Word, Coeff>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn unit(n: usize) -> Self {
        Self::from_word(n, Word::unit()).expect("empty word is valid")
    }

    pub fn from_word(n: usize, word: Word) -> Result<Self> {
        Self::from_term(n, Coeff::one(), word)
    }

    pub fn from_term(n: usize, coeff: Coeff, word: Word) -> Result<Self> {
        for g in word.gens() {
            g.check(n)?;
        }
        let mut out = Self::zero(n);
        out.add_term(coeff, word);
        Ok(out)
    }

    pub fn generator(n: usize, g: Generator) -> Result<Self> {
        Self::from_word(n, Word(vec![g]))
    }

    pub fn scalar(n: usize, c: Coeff) -> Self {
        let mut out = Self::zero(n);
        out.add_term(c, Word::unit());
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &Word) -> Coeff {
        self.terms.get(word).copied().unwrap_or_else(Coeff::zero)
    }

    /// Adds without bounds checks; callers already hold a valid word.
    pub(crate) fn add_term(&mut self, c: Coeff, word: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn same_n(&self, other: &AlgebraElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::InvalidInput(format!("elements over different n ({} vs {})", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_n(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*c, w.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.scale(-Coeff::one()))
    }

    pub fn scale(&self, c: Coeff) -> AlgebraElement {
        let mut out = Self::zero(self.n);
        for (w, v) in &self.terms {
            out.add_term(*v * c, w.clone());
        }
        out
    }

    /// Bilinear concatenation of words, without any rewriting.
    pub fn concat(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_n(other)?;
        let mut out = Self::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(*c1 * *c2, w1.concat(w2));
            }
        }
        Ok(out)
    }
}

/// Exact coefficient as `"p/q"`.
pub fn format_coeff(c: &Coeff) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Signed sum of terms, e.g. `1 - 3/2*e(0,1)*y2`; `0` when empty.
pub fn format_terms<'a>(terms: impl IntoIterator<Item = (&'a Word, &'a Coeff)>) -> String {
    let mut out = String::new();
    for (idx, (w, c)) in terms.into_iter().enumerate() {
        let mag = c.abs();
        out.push_str(match (idx, c.is_negative()) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if w.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&w.to_string());
        } else {
            out.push_str(&format!("{mag}*{w}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[usize]) -> Generator {
        Generator::Idem(ResidueSeq::new(v.to_vec()).unwrap())
    }

    #[test]
    fn bounds_are_checked() {
        assert!(AlgebraElement::generator(3, Generator::Dot(4)).is_err());
        assert!(AlgebraElement::generator(3, Generator::Cross(3)).is_err());
        assert!(AlgebraElement::generator(3, Generator::Cross(0)).is_err());
        assert!(AlgebraElement::generator(3, e(&[0, 1])).is_err());
        assert!(AlgebraElement::generator(3, e(&[0, 2, 1])).is_ok());
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = AlgebraElement::generator(2, Generator::Dot(2)).unwrap();
        assert!(x.sub(&x).unwrap().is_zero());
        let y = AlgebraElement::zero(3);
        assert!(x.add(&y).is_err());
    }

    #[test]
    fn display() {
        let x = AlgebraElement::from_word(2, Word(vec![e(&[0, 1]), Generator::Dot(2)])).unwrap();
        let z = x.scale(Coeff::new(-3, 2)).add(&AlgebraElement::scalar(2, Coeff::one())).unwrap();
        assert_eq!(z.to_string(), "1 - 3/2*e(0,1)*y2");
        assert_eq!(AlgebraElement::zero(2).to_string(), "0");
    }
}
