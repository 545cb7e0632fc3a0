//! Literal instances of the defining relations of `R_n`.
//!
//! Every relation is stored as a list of `(coefficient, word)` pairs whose sum
//! is zero in the algebra. Constructors refuse instances whose side
//! conditions do not hold, so a [`Rule`] that produces an instance is a valid
//! relation by construction.

use std::fmt;

use itertools::Itertools;
use num::{One, Zero};

use super::{Coeff, Generator, Word};
use crate::error::{Error, Result};
use crate::residue::{Connection, Quiver, ResidueSeq};

/// A previously derived vanishing statement usable as a lemma.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    /// `e(i) = 0`
    IdempotentVanishes(ResidueSeq),
    /// `y_k e(i) = 0`
    DotVanishes { k: usize, i: ResidueSeq },
    /// `y_n^2 e(i) = 0`
    DotSquareVanishes(ResidueSeq),
}

impl Fact {
    pub fn word(&self) -> Word {
        match self {
            Fact::IdempotentVanishes(i) => Word(vec![Generator::Idem(i.clone())]),
            Fact::DotVanishes { k, i } => Word(vec![Generator::Dot(*k), Generator::Idem(i.clone())]),
            Fact::DotSquareVanishes(i) => {
                Word(vec![Generator::Dot(i.n()), Generator::Dot(i.n()), Generator::Idem(i.clone())])
            }
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.word())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `e(i) e(j) = delta_{ij} e(i)`
    IdemOrthogonal { i: ResidueSeq, j: ResidueSeq },
    /// `sum_i e(i) = 1`
    Unit { n: usize },
    /// `y_k e(i) = e(i) y_k`
    DotIdemCommute { k: usize, i: ResidueSeq },
    /// `psi_k e(i) = e(s_k i) psi_k`
    CrossIdem { k: usize, i: ResidueSeq },
    /// `y_k y_l = y_l y_k`
    DotCommute { n: usize, k: usize, l: usize },
    /// `psi_k y_l = y_l psi_k`, `l != k, k+1`
    CrossDotCommute { n: usize, k: usize, l: usize },
    /// `psi_k psi_l = psi_l psi_k`, `|k - l| > 1`
    CrossCommute { n: usize, k: usize, l: usize },
    /// `psi_k y_{k+1} e(i) = y_k psi_k e(i)`
    DotSlideUp { k: usize, i: ResidueSeq },
    /// `y_{k+1} psi_k e(i) = psi_k y_k e(i)`
    DotSlideDown { k: usize, i: ResidueSeq },
    /// `psi_k^2 e(i) = Q_{i_k, i_{k+1}}(y_k, y_{k+1}) e(i)`
    Quadratic { k: usize, i: ResidueSeq },
    /// `psi_k psi_{k+1} psi_k e(i) = psi_{k+1} psi_k psi_{k+1} e(i)`
    Braid { k: usize, i: ResidueSeq },
    /// `e(i) = 0` for `i_1 != 0`
    CyclotomicIdem { i: ResidueSeq },
    /// `y_1 e(i) = 0` for `i_1 = 0`
    CyclotomicDot { i: ResidueSeq },
    /// A fact proved by an earlier trace.
    Lemma(Fact),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::IdemOrthogonal { i, j } => write!(f, "idem-orthogonal[{i},{j}]"),
            Rule::Unit { n } => write!(f, "unit[n={n}]"),
            Rule::DotIdemCommute { k, i } => write!(f, "dot-idem-commute[k={k},{i}]"),
            Rule::CrossIdem { k, i } => write!(f, "cross-idem[k={k},{i}]"),
            Rule::DotCommute { k, l, .. } => write!(f, "dot-commute[{k},{l}]"),
            Rule::CrossDotCommute { k, l, .. } => write!(f, "cross-dot-commute[{k},{l}]"),
            Rule::CrossCommute { k, l, .. } => write!(f, "cross-commute[{k},{l}]"),
            Rule::DotSlideUp { k, i } => write!(f, "dot-slide-up[k={k},{i}]"),
            Rule::DotSlideDown { k, i } => write!(f, "dot-slide-down[k={k},{i}]"),
            Rule::Quadratic { k, i } => write!(f, "quadratic[k={k},{i}]"),
            Rule::Braid { k, i } => write!(f, "braid[k={k},{i}]"),
            Rule::CyclotomicIdem { i } => write!(f, "cyclotomic-idem[{i}]"),
            Rule::CyclotomicDot { i } => write!(f, "cyclotomic-dot[{i}]"),
            Rule::Lemma(fact) => write!(f, "lemma[{fact}]"),
        }
    }
}

fn e(i: &ResidueSeq) -> Generator {
    Generator::Idem(i.clone())
}

fn check_k(k: usize, n: usize, max: usize) -> Result<()> {
    if k < 1 || k > max {
        return Err(Error::InvalidInput(format!("index {k} out of range 1..={max} for n = {n}")));
    }
    Ok(())
}

/// Monomials of `Q_{i_k, i_{k+1}}(y_k, y_{k+1})` as `(coefficient, dot positions)`.
pub(crate) fn quadratic_monomials(quiver: &Quiver, k: usize, i: &ResidueSeq) -> Vec<(Coeff, Vec<usize>)> {
    let one = Coeff::one();
    match quiver.connection(i.get(k), i.get(k + 1)) {
        Connection::None => vec![(one, vec![])],
        Connection::Forward => vec![(one, vec![k + 1]), (-one, vec![k])],
        Connection::Backward => vec![(one, vec![k]), (-one, vec![k + 1])],
        // (y_{k+1} - y_k)(y_k - y_{k+1})
        Connection::Double => {
            vec![(one, vec![k + 1, k]), (-one, vec![k + 1, k + 1]), (-one, vec![k, k]), (one, vec![k, k + 1])]
        }
    }
}

impl Rule {
    /// The relation as words summing to zero, after checking side conditions.
    pub fn instance(&self, quiver: &Quiver) -> Result<Vec<(Coeff, Word)>> {
        let n = quiver.n();
        let one = Coeff::one();
        let seq_ok = |i: &ResidueSeq| -> Result<()> {
            if i.n() != n {
                return Err(Error::InvalidInput(format!("{i} does not have length {n}")));
            }
            Ok(())
        };
        let out = match self {
            Rule::IdemOrthogonal { i, j } => {
                seq_ok(i)?;
                seq_ok(j)?;
                let mut v = vec![(one, Word(vec![e(i), e(j)]))];
                if i == j {
                    v.push((-one, Word(vec![e(i)])));
                }
                v
            }
            Rule::Unit { n: m } => {
                if *m != n {
                    return Err(Error::InvalidInput(format!("unit relation for n = {m}, expected {n}")));
                }
                let mut v: Vec<(Coeff, Word)> = (0..n)
                    .permutations(n)
                    .map(|p| (one, Word(vec![Generator::Idem(ResidueSeq::new(p).expect("perm"))])))
                    .collect();
                v.push((-one, Word::unit()));
                v
            }
            Rule::DotIdemCommute { k, i } => {
                seq_ok(i)?;
                check_k(*k, n, n)?;
                vec![(one, Word(vec![Generator::Dot(*k), e(i)])), (-one, Word(vec![e(i), Generator::Dot(*k)]))]
            }
            Rule::CrossIdem { k, i } => {
                seq_ok(i)?;
                check_k(*k, n, n - 1)?;
                vec![
                    (one, Word(vec![Generator::Cross(*k), e(i)])),
                    (-one, Word(vec![e(&i.swapped(*k)), Generator::Cross(*k)])),
                ]
            }
            Rule::DotCommute { n: m, k, l } => {
                if *m != n {
                    return Err(Error::InvalidInput(format!("rule for n = {m}, expected {n}")));
                }
                check_k(*k, n, n)?;
                check_k(*l, n, n)?;
                vec![
                    (one, Word(vec![Generator::Dot(*k), Generator::Dot(*l)])),
                    (-one, Word(vec![Generator::Dot(*l), Generator::Dot(*k)])),
                ]
            }
            Rule::CrossDotCommute { n: m, k, l } => {
                if *m != n {
                    return Err(Error::InvalidInput(format!("rule for n = {m}, expected {n}")));
                }
                check_k(*k, n, n - 1)?;
                check_k(*l, n, n)?;
                if *l == *k || *l == *k + 1 {
                    return Err(Error::InvalidInput(format!("y{l} does not commute with p{k}")));
                }
                vec![
                    (one, Word(vec![Generator::Cross(*k), Generator::Dot(*l)])),
                    (-one, Word(vec![Generator::Dot(*l), Generator::Cross(*k)])),
                ]
            }
            Rule::CrossCommute { n: m, k, l } => {
                if *m != n {
                    return Err(Error::InvalidInput(format!("rule for n = {m}, expected {n}")));
                }
                check_k(*k, n, n - 1)?;
                check_k(*l, n, n - 1)?;
                if k.abs_diff(*l) <= 1 {
                    return Err(Error::InvalidInput(format!("p{k} and p{l} are not distant")));
                }
                vec![
                    (one, Word(vec![Generator::Cross(*k), Generator::Cross(*l)])),
                    (-one, Word(vec![Generator::Cross(*l), Generator::Cross(*k)])),
                ]
            }
            Rule::DotSlideUp { k, i } => {
                seq_ok(i)?;
                check_k(*k, n, n - 1)?;
                vec![
                    (one, Word(vec![Generator::Cross(*k), Generator::Dot(*k + 1), e(i)])),
                    (-one, Word(vec![Generator::Dot(*k), Generator::Cross(*k), e(i)])),
                ]
            }
            Rule::DotSlideDown { k, i } => {
                seq_ok(i)?;
                check_k(*k, n, n - 1)?;
                vec![
                    (one, Word(vec![Generator::Dot(*k + 1), Generator::Cross(*k), e(i)])),
                    (-one, Word(vec![Generator::Cross(*k), Generator::Dot(*k), e(i)])),
                ]
            }
            Rule::Quadratic { k, i } => {
                seq_ok(i)?;
                check_k(*k, n, n - 1)?;
                let mut v = vec![(one, Word(vec![Generator::Cross(*k), Generator::Cross(*k), e(i)]))];
                for (c, dots) in quadratic_monomials(quiver, *k, i) {
                    let mut gens: Vec<Generator> = dots.into_iter().map(Generator::Dot).collect();
                    gens.push(e(i));
                    v.push((-c, Word(gens)));
                }
                v
            }
            Rule::Braid { k, i } => {
                seq_ok(i)?;
                if n < 3 {
                    return Err(Error::InvalidInput("braid relation needs n >= 3".into()));
                }
                check_k(*k, n, n - 2)?;
                let (a, b) = (Generator::Cross(*k), Generator::Cross(*k + 1));
                vec![
                    (one, Word(vec![a.clone(), b.clone(), a.clone(), e(i)])),
                    (-one, Word(vec![b.clone(), a, b, e(i)])),
                ]
            }
            Rule::CyclotomicIdem { i } => {
                seq_ok(i)?;
                if i.get(1) == 0 {
                    return Err(Error::InvalidInput(format!(
                        "{i} starts with 0; e(i) is not a generator of the ideal"
                    )));
                }
                vec![(one, Word(vec![e(i)]))]
            }
            Rule::CyclotomicDot { i } => {
                seq_ok(i)?;
                if i.get(1) != 0 {
                    return Err(Error::InvalidInput(format!("{i} does not start with 0")));
                }
                vec![(one, Word(vec![Generator::Dot(1), e(i)]))]
            }
            Rule::Lemma(fact) => vec![(one, fact.word())],
        };
        Ok(out.into_iter().filter(|(c, _)| !c.is_zero()).collect())
    }
}

/// Every defining relation of `R_n` (all residue sequences, all indices),
/// excluding lemmas.
pub fn relation_instances(n: usize) -> Result<Vec<Rule>> {
    let quiver = Quiver::new(n)?;
    let seqs: Vec<ResidueSeq> = (0..n).permutations(n).map(|p| ResidueSeq::new(p).expect("perm")).collect();
    let mut rules = vec![Rule::Unit { n }];
    for i in &seqs {
        for j in &seqs {
            rules.push(Rule::IdemOrthogonal { i: i.clone(), j: j.clone() });
        }
        for k in 1..=n {
            rules.push(Rule::DotIdemCommute { k, i: i.clone() });
        }
        for k in 1..n {
            rules.push(Rule::CrossIdem { k, i: i.clone() });
            rules.push(Rule::DotSlideUp { k, i: i.clone() });
            rules.push(Rule::DotSlideDown { k, i: i.clone() });
            rules.push(Rule::Quadratic { k, i: i.clone() });
        }
        for k in 1..n.saturating_sub(1) {
            rules.push(Rule::Braid { k, i: i.clone() });
        }
        if i.get(1) == 0 {
            rules.push(Rule::CyclotomicDot { i: i.clone() });
        } else {
            rules.push(Rule::CyclotomicIdem { i: i.clone() });
        }
    }
    for k in 1..=n {
        for l in 1..=n {
            if k < l {
                rules.push(Rule::DotCommute { n, k, l });
            }
            if k < n && l != k && l != k + 1 {
                rules.push(Rule::CrossDotCommute { n, k, l });
            }
            if k < n && l < n && k + 1 < l {
                rules.push(Rule::CrossCommute { n, k, l });
            }
        }
    }
    debug_assert!(rules.iter().all(|r| r.instance(&quiver).is_ok()));
    Ok(rules)
}
