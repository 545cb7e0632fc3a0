//! Machine-checkable derivations of the vanishing rules used by the rewriter.
//!
//! A [`DerivationTrace`] starts from a single word and applies relation
//! instances one at a time. Each [`Step`] records the rule with the term and
//! position it acts on. Its pivot is the word of the relation instance that
//! was matched; the pivot is replaced by the remaining words of the instance.
//! [`replay`] re-checks every step from scratch.

use std::collections::HashSet;

use itertools::Itertools;
use num::Zero;

use super::relations::{Fact, Rule};
use super::{AlgebraElement, Coeff, Generator, Word};
use crate::error::{Error, Result};
use crate::residue::{enumerate_admissible, first_violation, is_admissible, Quiver, ResidueSeq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub term: Word,
    pub position: usize,
    pub pivot: usize,
    pub result: AlgebraElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTrace {
    pub claim: Fact,
    pub start: Word,
    pub steps: Vec<Step>,
    pub end: AlgebraElement,
}

impl DerivationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Facts established by replayed traces.
#[derive(Clone, Debug, Default)]
pub struct FactBook {
    facts: HashSet<Fact>,
    traces_replayed: usize,
}

impl FactBook {
    pub fn contains(&self, fact: &Fact) -> bool {
        self.facts.contains(fact)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn traces_replayed(&self) -> usize {
        self.traces_replayed
    }

    /// Replays `trace` against the facts known so far and records its claim.
    pub fn admit(&mut self, trace: &DerivationTrace, quiver: &Quiver) -> Result<()> {
        replay(trace, quiver, self)?;
        self.facts.insert(trace.claim.clone());
        self.traces_replayed += 1;
        Ok(())
    }
}

/// Replace the pivot word of `instance` inside `term` at `position`.
fn substitute(
    current: &AlgebraElement,
    instance: &[(Coeff, Word)],
    term: &Word,
    position: usize,
    pivot: usize,
) -> Result<AlgebraElement> {
    let c = current.coeff(term);
    if c.is_zero() {
        return Err(Error::VerificationFailure(format!("term {term} is not present")));
    }
    let (cp, pw) =
        instance.get(pivot).ok_or_else(|| Error::VerificationFailure(format!("pivot {pivot} out of range")))?;
    let end = position + pw.len();
    if end > term.len() || term.gens()[position..end] != *pw.gens() {
        return Err(Error::VerificationFailure(format!("{pw} does not occur in {term} at position {position}")));
    }
    let mut next = current.clone();
    next.add_term(-c, term.clone());
    for (idx, (cw, w)) in instance.iter().enumerate() {
        if idx != pivot {
            next.add_term(-c * *cw / *cp, term.splice(position, pw.len(), w));
        }
    }
    Ok(next)
}

pub fn replay(trace: &DerivationTrace, quiver: &Quiver, facts: &FactBook) -> Result<()> {
    let fail = |idx: usize, msg: String| {
        Error::VerificationFailure(format!("trace for {} fails at step {idx}: {msg}", trace.claim))
    };
    if trace.start != trace.claim.word() {
        return Err(fail(0, format!("start {} differs from claim", trace.start)));
    }
    let mut current = AlgebraElement::from_word(quiver.n(), trace.start.clone())?;
    for (idx, step) in trace.steps.iter().enumerate() {
        if let Rule::Lemma(fact) = &step.rule {
            if !facts.contains(fact) {
                return Err(fail(idx, format!("lemma {fact} not established")));
            }
        }
        let instance = step.rule.instance(quiver).map_err(|e| fail(idx, e.to_string()))?;
        let next = substitute(&current, &instance, &step.term, step.position, step.pivot)
            .map_err(|e| fail(idx, e.to_string()))?;
        if next != step.result {
            return Err(fail(idx, format!("recorded result {} but replay gives {next}", step.result)));
        }
        current = next;
    }
    if current != trace.end {
        return Err(fail(trace.steps.len(), format!("ends at {current}, recorded {}", trace.end)));
    }
    if !trace.end.is_zero() {
        return Err(fail(trace.steps.len(), "vanishing claim does not end at 0".into()));
    }
    Ok(())
}

struct TraceBuilder<'a> {
    quiver: &'a Quiver,
    claim: Fact,
    current: AlgebraElement,
    steps: Vec<Step>,
}

impl<'a> TraceBuilder<'a> {
    fn new(quiver: &'a Quiver, claim: Fact) -> Self {
        let current = AlgebraElement::from_word(quiver.n(), claim.word()).expect("valid claim word");
        TraceBuilder { quiver, claim, current, steps: Vec::new() }
    }

    /// Applies `rule` to `term` at `position`, matching the first instance
    /// word found there. Returns the words that replaced the pivot.
    fn apply(&mut self, rule: Rule, term: &Word, position: usize) -> Result<Vec<Word>> {
        let instance = rule.instance(self.quiver)?;
        let pivot = instance
            .iter()
            .position(|(_, w)| {
                let end = position + w.len();
                end <= term.len() && term.gens()[position..end] == *w.gens()
            })
            .ok_or_else(|| Error::Internal(format!("rule {rule} does not match {term} at {position}")))?;
        let next = substitute(&self.current, &instance, term, position, pivot)?;
        let produced = instance
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx != pivot)
            .map(|(_, (_, w))| term.splice(position, instance[pivot].1.len(), w))
            .collect();
        self.steps.push(Step { rule, term: term.clone(), position, pivot, result: next.clone() });
        self.current = next;
        Ok(produced)
    }

    fn finish(self) -> DerivationTrace {
        DerivationTrace { start: self.claim.word(), claim: self.claim, steps: self.steps, end: self.current }
    }
}

fn kill_idempotent_rule(i: &ResidueSeq) -> Rule {
    if i.get(1) != 0 {
        Rule::CyclotomicIdem { i: i.clone() }
    } else {
        Rule::Lemma(Fact::IdempotentVanishes(i.clone()))
    }
}

/// Derives `e(i) = 0` for an inadmissible `i`.
///
/// With `k` the first position breaking the arc condition, `i_k` is adjacent
/// to none of `i_1..i_{k-1}`. Each `e = psi_t e psi_t` expansion moves that
/// strand one step left until it reaches position 1, where the cyclotomic
/// relation kills the inner idempotent.
pub fn derive_idempotent_vanishing(i: &ResidueSeq) -> Result<DerivationTrace> {
    let quiver = Quiver::new(i.n())?;
    let Some(k) = first_violation(i) else {
        return Err(Error::InvalidInput(format!("{i} is admissible; e(i) does not vanish")));
    };
    let mut b = TraceBuilder::new(&quiver, Fact::IdempotentVanishes(i.clone()));
    let mut word = b.claim.word();
    let mut p = 0;
    let mut cur = i.clone();
    for t in (1..k).rev() {
        if quiver.adjacent(cur.get(t), cur.get(t + 1)) {
            return Err(Error::Internal(format!("{cur}: residues at {t} are adjacent")));
        }
        word = b.apply(Rule::Quadratic { k: t, i: cur.clone() }, &word, p)?.remove(0);
        word = b.apply(Rule::CrossIdem { k: t, i: cur.clone() }, &word, p + 1)?.remove(0);
        cur = cur.swapped(t);
        p += 1;
    }
    b.apply(Rule::CyclotomicIdem { i: cur }, &word, p)?;
    Ok(b.finish())
}

/// Derives `y_k e(i) = 0` for admissible `i` and `k < n`.
///
/// For `k >= 2` there is a unique `l < k` with `i_l` adjacent to `i_k`. The
/// dot is carried left with strand `k` to position `l+1`, where the
/// adjacent quadratic relation trades it for `y_l` plus a term whose inner
/// idempotent has a broken arc.
fn dot_trace(quiver: &Quiver, i: &ResidueSeq, k: usize) -> Result<DerivationTrace> {
    let mut b = TraceBuilder::new(quiver, Fact::DotVanishes { k, i: i.clone() });
    let mut word = b.claim.word();
    if k == 1 {
        b.apply(Rule::CyclotomicDot { i: i.clone() }, &word, 0)?;
        return Ok(b.finish());
    }
    let neighbours: Vec<usize> = (1..k).filter(|&l| quiver.adjacent(i.get(l), i.get(k))).collect();
    let [l] = neighbours[..] else {
        return Err(Error::Internal(format!("{i}: strand {k} has earlier neighbours {neighbours:?}")));
    };
    let mut d = 0;
    let mut cur = i.clone();
    for t in (l + 1..k).rev() {
        word = b.apply(Rule::Quadratic { k: t, i: cur.clone() }, &word, d + 1)?.remove(0);
        word = b.apply(Rule::CrossIdem { k: t, i: cur.clone() }, &word, d + 2)?.remove(0);
        cur = cur.swapped(t);
        word = b.apply(Rule::DotSlideDown { k: t, i: cur.clone() }, &word, d)?.remove(0);
        d += 1;
    }
    let produced = b.apply(Rule::Quadratic { k: l, i: cur.clone() }, &word, d)?;
    for w in produced {
        match w.gens()[d] {
            Generator::Cross(_) => {
                let w = b.apply(Rule::CrossIdem { k: l, i: cur.clone() }, &w, d + 1)?.remove(0);
                b.apply(kill_idempotent_rule(&cur.swapped(l)), &w, d + 1)?;
            }
            Generator::Dot(_) => {
                let rule = if l == 1 {
                    Rule::CyclotomicDot { i: cur.clone() }
                } else {
                    Rule::Lemma(Fact::DotVanishes { k: l, i: cur.clone() })
                };
                b.apply(rule, &w, d)?;
            }
            Generator::Idem(_) => return Err(Error::Internal("unexpected idempotent".into())),
        }
    }
    Ok(b.finish())
}

/// Derives `y_n^2 e(i) = 0` for admissible `i`.
fn dot_square_trace(quiver: &Quiver, i: &ResidueSeq) -> Result<DerivationTrace> {
    let n = quiver.n();
    let mut b = TraceBuilder::new(quiver, Fact::DotSquareVanishes(i.clone()));
    let word = b.claim.word();
    if n == 2 {
        // psi_1^2 e(0,1) = (y_2 - y_1)(y_1 - y_2) e(0,1) and psi_1 e(0,1) psi_1 = 0.
        let produced = b.apply(Rule::Quadratic { k: 1, i: i.clone() }, &word, 0)?;
        for w in produced {
            match (&w.gens()[0], &w.gens()[1]) {
                (Generator::Cross(_), _) => {
                    let w = b.apply(Rule::CrossIdem { k: 1, i: i.clone() }, &w, 1)?.remove(0);
                    b.apply(Rule::CyclotomicIdem { i: i.swapped(1) }, &w, 1)?;
                }
                (Generator::Dot(1), Generator::Dot(2)) => {
                    if b.current.coeff(&w).is_zero() {
                        continue;
                    }
                    let w = b.apply(Rule::DotCommute { n, k: 1, l: 2 }, &w, 0)?.remove(0);
                    b.apply(Rule::CyclotomicDot { i: i.clone() }, &w, 1)?;
                }
                (_, Generator::Dot(1)) => {
                    if b.current.coeff(&w).is_zero() {
                        continue;
                    }
                    b.apply(Rule::CyclotomicDot { i: i.clone() }, &w, 1)?;
                }
                _ => return Err(Error::Internal(format!("unexpected word {w}"))),
            }
        }
        return Ok(b.finish());
    }
    // i_{n-1} is adjacent to i_n: trade one y_n for y_{n-1} and a double crossing.
    let produced = b.apply(Rule::Quadratic { k: n - 1, i: i.clone() }, &word, 1)?;
    for w in produced {
        match w.gens()[1] {
            Generator::Dot(_) => {
                b.apply(Rule::Lemma(Fact::DotVanishes { k: n - 1, i: i.clone() }), &w, 1)?;
            }
            Generator::Cross(_) => {
                let w = b.apply(Rule::CrossIdem { k: n - 1, i: i.clone() }, &w, 2)?.remove(0);
                let swapped = i.swapped(n - 1);
                let w = b.apply(Rule::DotSlideDown { k: n - 1, i: swapped.clone() }, &w, 0)?.remove(0);
                if is_admissible(&swapped) {
                    b.apply(Rule::Lemma(Fact::DotVanishes { k: n - 1, i: swapped }), &w, 1)?;
                } else {
                    b.apply(kill_idempotent_rule(&swapped), &w, 2)?;
                }
            }
            Generator::Idem(_) => return Err(Error::Internal("unexpected idempotent".into())),
        }
    }
    Ok(b.finish())
}

/// Traces for `y_k e(i) = 0` (`k < n`, in increasing `k`) followed by
/// `y_n^2 e(i) = 0`, for every admissible `i`.
pub fn derive_dot_rules(n: usize) -> Result<Vec<DerivationTrace>> {
    let quiver = Quiver::new(n)?;
    let admissible = enumerate_admissible(n)?;
    let mut traces = Vec::new();
    for k in 1..n {
        for i in &admissible {
            traces.push(dot_trace(&quiver, i, k)?);
        }
    }
    for i in &admissible {
        traces.push(dot_square_trace(&quiver, i)?);
    }
    Ok(traces)
}

/// Derives and replays every vanishing rule the rewriter relies on.
pub fn verified_facts(n: usize) -> Result<FactBook> {
    let quiver = Quiver::new(n)?;
    let mut book = FactBook::default();
    for p in (0..n).permutations(n) {
        let i = ResidueSeq::new(p)?;
        if !is_admissible(&i) {
            book.admit(&derive_idempotent_vanishing(&i)?, &quiver)?;
        }
    }
    for trace in derive_dot_rules(n)? {
        book.admit(&trace, &quiver)?;
    }
    Ok(book)
}
