use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Generator, Word};
use crate::error::{Error, Result};
use crate::residue::{Quiver, ResidueSeq};

/// Canonical basis word `e(i) y_n^a psi_w`.
///
/// Since all residues are distinct, the permutation `w` is determined by the
/// source sequence `i` (top of the diagram) and the target sequence
/// `j = w^{-1} . i` (bottom), so only those and the dot flag are stored. The
/// crossing word is the lexicographically smallest reduced expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalWord {
    source: ResidueSeq,
    target: ResidueSeq,
    dotted: bool,
}

impl NormalWord {
    pub fn new(source: ResidueSeq, dotted: bool, target: ResidueSeq) -> Result<Self> {
        if source.n() != target.n() {
            return Err(Error::InvalidInput(format!("source {source} and target {target} have different lengths")));
        }
        Ok(NormalWord { source, target, dotted })
    }

    pub fn source(&self) -> &ResidueSeq {
        &self.source
    }

    pub fn target(&self) -> &ResidueSeq {
        &self.target
    }

    pub fn dotted(&self) -> bool {
        self.dotted
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn reduced_word(&self) -> Vec<usize> {
        lex_min_reduced_word(&self.source, &self.target)
    }

    /// The permutation `w` in one-line notation: strand at position `p` of
    /// the source ends at position `w[p-1]` of the target.
    pub fn permutation(&self) -> Vec<usize> {
        self.source.entries().iter().map(|&r| self.target.position_of(r)).collect()
    }

    pub fn to_word(&self) -> Word {
        let mut gens = vec![Generator::Idem(self.source.clone())];
        if self.dotted {
            gens.push(Generator::Dot(self.n()));
        }
        gens.extend(self.reduced_word().into_iter().map(Generator::Cross));
        Word(gens)
    }

    pub fn degree(&self) -> i64 {
        let quiver = Quiver::new(self.n()).expect("n >= 2");
        let mut deg = if self.dotted { 2 } else { 0 };
        let mut slice = self.source.clone();
        for k in self.reduced_word() {
            deg -= quiver.cartan(slice.get(k), slice.get(k + 1));
            slice = slice.swapped(k);
        }
        deg
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// Lexicographically smallest reduced expression `a_1 a_2 ...` with
/// `e(source) psi_{a_1} psi_{a_2} ... = e(source) ... e(target)`.
///
/// Built greedily: at each slice take the smallest position whose two strands
/// still have to cross.
pub fn lex_min_reduced_word(source: &ResidueSeq, target: &ResidueSeq) -> Vec<usize> {
    let n = source.n();
    let mut cur = source.clone();
    let mut word = Vec::new();
    while cur != *target {
        let k = (1..n)
            .find(|&k| target.position_of(cur.get(k)) > target.position_of(cur.get(k + 1)))
            .expect("an unsorted sequence has an adjacent inversion");
        word.push(k);
        cur = cur.swapped(k);
    }
    word
}

/// Degree of a word under the standard KLR grading. Dots have degree 2 and
/// `psi_k` has degree `-a_{rs}` for the residues it crosses.
///
/// The residue context is taken from the first idempotent in the word.
pub fn degree(word: &Word, n: usize) -> Result<i64> {
    let quiver = Quiver::new(n)?;
    let gens = word.gens();
    let (anchor, seq) = gens
        .iter()
        .enumerate()
        .find_map(|(idx, g)| match g {
            Generator::Idem(i) => Some((idx, i.clone())),
            _ => None,
        })
        .ok_or_else(|| Error::InvalidInput(format!("word {word} has no idempotent to fix residues")))?;
    if seq.n() != n {
        return Err(Error::InvalidInput(format!("idempotent {seq} does not match n = {n}")));
    }
    let mut deg = 0;
    // Slices to the right of the anchor.
    let mut slice = seq.clone();
    for g in &gens[anchor + 1..] {
        deg += step_degree(&quiver, g, &mut slice, word)?;
    }
    // Slices to the left, walking backwards.
    let mut slice = seq;
    for g in gens[..anchor].iter().rev() {
        deg += step_degree(&quiver, g, &mut slice, word)?;
    }
    Ok(deg)
}

fn step_degree(quiver: &Quiver, g: &Generator, slice: &mut ResidueSeq, word: &Word) -> Result<i64> {
    g.check(quiver.n())?;
    Ok(match g {
        Generator::Idem(i) => {
            if i != slice {
                return Err(Error::InvalidInput(format!("word {word} has inconsistent idempotents {slice} and {i}")));
            }
            0
        }
        Generator::Dot(_) => 2,
        Generator::Cross(k) => {
            let d = -quiver.cartan(slice.get(*k), slice.get(*k + 1));
            *slice = slice.swapped(*k);
            d
        }
    })
}
