use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Zero};

use super::relations::{quadratic_monomials, Fact};
use super::trace::{verified_facts, FactBook};
use super::{AlgebraElement, Coeff, Generator, NormalWord, Word};
use crate::error::{Error, Result};
use crate::residue::{enumerate_admissible, Quiver, ResidueSeq};

/// Largest `n` the rewriting engine accepts.
pub const MAX_ENGINE_N: usize = 8;

/// A term `e(source) y_n^dots psi_w e(target)` with `w` reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    source: ResidueSeq,
    dots: u8,
    target: ResidueSeq,
}

type State = BTreeMap<Term, Coeff>;

fn add_to(state: &mut State, term: Term, c: Coeff) {
    let entry = state.entry(term).or_insert_with(Coeff::zero);
    *entry += c;
}

/// The cyclotomic KLR algebra `R_n` with its verified rewriting rules.
///
/// Construction replays a derivation for every vanishing rule the rewriter
/// uses. These are `e(i) = 0` for inadmissible `i` together with the dot
/// rules `y_k e(i) = 0` (`k < n`) and `y_n^2 e(i) = 0` for admissible `i`.
/// Further zeros follow from exact moves only:
///
/// * a reduced crossing word may be replaced by any other reduced expression
///   of the same permutation (the braid relation has no correction term when
///   residues are distinct), so `e(i) psi_w` vanishes as soon as one reduced
///   expression passes through an inadmissible slice;
/// * dots slide through crossings without correction terms, so a dot on the
///   top of a strand that does not end in position `n` vanishes.
#[derive(Debug)]
pub struct KlrAlgebra {
    n: usize,
    quiver: Quiver,
    admissible: Vec<ResidueSeq>,
    admissible_index: HashMap<ResidueSeq, usize>,
    alive: HashSet<(usize, usize)>,
    facts: FactBook,
}

impl KlrAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_ENGINE_N).contains(&n) {
            return Err(Error::InvalidParameter(format!("engine supports 2 <= n <= {MAX_ENGINE_N}, got {n}")));
        }
        let quiver = Quiver::new(n)?;
        let facts = verified_facts(n)?;
        let admissible = enumerate_admissible(n)?;
        let admissible_index: HashMap<ResidueSeq, usize> =
            admissible.iter().cloned().enumerate().map(|(idx, i)| (i, idx)).collect();
        for i in &admissible {
            for k in 1..n {
                if !facts.contains(&Fact::DotVanishes { k, i: i.clone() }) {
                    return Err(Error::VerificationFailure(format!("y{k} e{i} = 0 not derived")));
                }
            }
            if !facts.contains(&Fact::DotSquareVanishes(i.clone())) {
                return Err(Error::VerificationFailure(format!("y{n}^2 e{i} = 0 not derived")));
            }
        }
        let mut alg = KlrAlgebra { n, quiver, admissible, admissible_index, alive: HashSet::new(), facts };
        alg.alive = alg.compute_alive_pairs();
        Ok(alg)
    }

    /// Shared instance per `n`, built once and reused.
    pub fn shared(n: usize) -> Result<Arc<KlrAlgebra>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<KlrAlgebra>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(alg) = cache.lock().expect("cache lock").get(&n) {
            return Ok(alg.clone());
        }
        let alg = Arc::new(KlrAlgebra::new(n)?);
        Ok(cache.lock().expect("cache lock").entry(n).or_insert(alg).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn admissible(&self) -> &[ResidueSeq] {
        &self.admissible
    }

    pub fn facts(&self) -> &FactBook {
        &self.facts
    }

    fn is_admissible(&self, i: &ResidueSeq) -> bool {
        let ok = self.admissible_index.contains_key(i);
        debug_assert!(ok || self.facts.contains(&Fact::IdempotentVanishes(i.clone())));
        ok
    }

    /// Pairs `(i, j)` of admissible sequences such that every slice of every
    /// reduced crossing word from `i` to `j` is admissible.
    fn compute_alive_pairs(&self) -> HashSet<(usize, usize)> {
        let mut alive = HashSet::new();
        for (a, i) in self.admissible.iter().enumerate() {
            for (b, j) in self.admissible.iter().enumerate() {
                if self.all_slices_admissible(i, j) {
                    alive.insert((a, b));
                }
            }
        }
        alive
    }

    fn all_slices_admissible(&self, source: &ResidueSeq, target: &ResidueSeq) -> bool {
        let n = self.n;
        let mut seen = BTreeSet::from([source.clone()]);
        let mut queue = VecDeque::from([source.clone()]);
        while let Some(cur) = queue.pop_front() {
            if !self.is_admissible(&cur) {
                return false;
            }
            for k in 1..n {
                if target.position_of(cur.get(k)) > target.position_of(cur.get(k + 1)) {
                    let next = cur.swapped(k);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        true
    }

    fn term_alive(&self, t: &Term) -> bool {
        let (Some(&a), Some(&b)) = (self.admissible_index.get(&t.source), self.admissible_index.get(&t.target)) else {
            return false;
        };
        if !self.alive.contains(&(a, b)) {
            return false;
        }
        match t.dots {
            0 => true,
            // The dot slides down its strand; it must still sit on strand n.
            1 => t.source.last() == t.target.last(),
            _ => false,
        }
    }

    fn check_n(&self, x: &AlgebraElement) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::InvalidInput(format!("element over n = {} given to R_{}", x.n(), self.n)));
        }
        Ok(())
    }

    /// Right-multiplies one term by one generator.
    fn apply_generator(&self, term: &Term, c: Coeff, g: &Generator, out: &mut State) {
        let n = self.n;
        match g {
            Generator::Idem(h) => {
                if *h == term.target {
                    add_to(out, term.clone(), c);
                }
            }
            Generator::Dot(p) => {
                let q = term.source.position_of(term.target.get(*p));
                if q != n {
                    return;
                }
                let next = Term { dots: term.dots + 1, ..term.clone() };
                if self.term_alive(&next) {
                    add_to(out, next, c);
                }
            }
            Generator::Cross(k) => {
                let (r, s) = (term.target.get(*k), term.target.get(*k + 1));
                let swapped = term.target.swapped(*k);
                if term.source.position_of(r) < term.source.position_of(s) {
                    let next = Term { target: swapped, ..term.clone() };
                    if self.term_alive(&next) {
                        add_to(out, next, c);
                    }
                    return;
                }
                // The strands already crossed: psi_w = psi_{w'} psi_k and
                // psi_k psi_k e(h) = Q(y_k, y_{k+1}) e(h) with h = s_k . target.
                for (qc, dots) in quadratic_monomials(&self.quiver, *k, &swapped) {
                    let mut total = term.dots as usize;
                    let mut dead = false;
                    for p in dots {
                        if term.source.position_of(swapped.get(p)) != n {
                            dead = true;
                            break;
                        }
                        total += 1;
                    }
                    if dead || total > 1 {
                        continue;
                    }
                    let next = Term { source: term.source.clone(), dots: total as u8, target: swapped.clone() };
                    if self.term_alive(&next) {
                        add_to(out, next, c * qc);
                    }
                }
            }
        }
    }

    fn fold(&self, mut state: State, gens: &[Generator], budget: &mut u64) -> Result<State> {
        for g in gens {
            g.check(self.n)?;
            let mut next = State::new();
            for (t, c) in &state {
                if *budget == 0 {
                    return Err(Error::Internal("rewrite step budget exhausted".into()));
                }
                *budget -= 1;
                self.apply_generator(t, *c, g, &mut next);
            }
            next.retain(|_, c| !c.is_zero());
            state = next;
        }
        Ok(state)
    }

    fn budget_for(&self, len: usize) -> u64 {
        let width = 2 * (self.admissible.len() as u64).pow(2);
        4u64.saturating_pow(len as u32).saturating_mul(width)
    }

    fn unit_state(&self, c: Coeff) -> State {
        self.admissible.iter().map(|i| (Term { source: i.clone(), dots: 0, target: i.clone() }, c)).collect()
    }

    /// Canonical form as coordinates on normal words.
    pub fn normal_form(&self, x: &AlgebraElement) -> Result<BTreeMap<NormalWord, Coeff>> {
        self.check_n(x)?;
        let mut acc = State::new();
        for (word, c) in x.terms() {
            let mut budget = self.budget_for(word.len());
            let state = self.fold(self.unit_state(*c), word.gens(), &mut budget)?;
            for (t, v) in state {
                add_to(&mut acc, t, v);
            }
        }
        let mut out = BTreeMap::new();
        for (t, c) in acc {
            if c.is_zero() {
                continue;
            }
            out.insert(NormalWord::new(t.source, t.dots == 1, t.target)?, c);
        }
        Ok(out)
    }

    /// Rewrites `x` to a combination of canonical normal words.
    pub fn rewrite(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(self.element_from_coords(&self.normal_form(x)?))
    }

    pub fn element_from_coords(&self, coords: &BTreeMap<NormalWord, Coeff>) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n);
        for (nw, c) in coords {
            out.add_term(*c, nw.to_word());
        }
        out
    }

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_n(x)?;
        self.check_n(y)?;
        self.rewrite(&x.concat(y)?)
    }

    /// Product of two normal words in normal-form coordinates.
    pub fn multiply_normal(&self, x: &NormalWord, y: &NormalWord) -> Result<BTreeMap<NormalWord, Coeff>> {
        let mut out = BTreeMap::new();
        if x.target() != y.source() {
            return Ok(out);
        }
        let start = Term { source: x.source().clone(), dots: x.dotted() as u8, target: x.target().clone() };
        let word = y.to_word();
        let mut budget = self.budget_for(word.len() + 1);
        let state = self.fold(State::from([(start, Coeff::one())]), &word.gens()[1..], &mut budget)?;
        for (t, c) in state {
            out.insert(NormalWord::new(t.source, t.dots == 1, t.target)?, c);
        }
        Ok(out)
    }

    /// `e(i) psi_{w(i,j)} e(j)` in canonical form, where `w(i,j)` carries the
    /// strand positions of `j` to those of `i`.
    pub fn one_ij(&self, i: &ResidueSeq, j: &ResidueSeq) -> Result<AlgebraElement> {
        for s in [i, j] {
            if s.n() != self.n {
                return Err(Error::InvalidInput(format!("{s} is not a sequence for n = {}", self.n)));
            }
            if !self.is_admissible(s) {
                return Err(Error::InvalidInput(format!("{s} is not admissible")));
            }
        }
        let nw = NormalWord::new(i.clone(), false, j.clone())?;
        let mut word = nw.to_word();
        word.0.push(Generator::Idem(j.clone()));
        self.rewrite(&AlgebraElement::from_word(self.n, word)?)
    }

    /// `sum_i e(i)` over admissible `i`, i.e. the unit in canonical form.
    pub fn identity(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n);
        for i in &self.admissible {
            out.add_term(Coeff::one(), Word(vec![Generator::Idem(i.clone())]));
        }
        out
    }

    pub fn idempotent(&self, i: &ResidueSeq) -> Result<AlgebraElement> {
        AlgebraElement::generator(self.n, Generator::Idem(i.clone()))
    }

    /// The canonical basis, sorted.
    ///
    /// Candidates are `one_ij(i, j)` for every admissible pair with class
    /// difference at most one, plus `y_n one_ij(i, j)` for equal classes.
    /// Every other candidate is checked to rewrite to zero.
    pub fn enumerate_basis(&self) -> Result<Vec<NormalWord>> {
        let n = self.n;
        let mut basis = Vec::new();
        for i in &self.admissible {
            for j in &self.admissible {
                let diff = i.last().abs_diff(j.last());
                let plain = self.one_ij(i, j)?;
                let dotted = self.multiply(&AlgebraElement::generator(n, Generator::Dot(n))?, &plain)?;
                let expect_plain = diff <= 1;
                let expect_dotted = diff == 0;
                for (value, dot, expected) in [(plain, false, expect_plain), (dotted, true, expect_dotted)] {
                    let nw = NormalWord::new(i.clone(), dot, j.clone())?;
                    if expected {
                        let single = AlgebraElement::from_word(n, nw.to_word())?;
                        if value != single {
                            return Err(Error::VerificationFailure(format!(
                                "basis candidate {nw} rewrites to {value}"
                            )));
                        }
                        basis.push(nw);
                    } else if !value.is_zero() {
                        return Err(Error::VerificationFailure(format!(
                            "excluded candidate {nw} rewrites to {value}, not 0"
                        )));
                    }
                }
            }
        }
        basis.sort();
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial;

    fn seq(v: &[usize]) -> ResidueSeq {
        ResidueSeq::new(v.to_vec()).unwrap()
    }

    fn word(n: usize, gens: Vec<Generator>) -> AlgebraElement {
        AlgebraElement::from_word(n, Word(gens)).unwrap()
    }

    fn e(v: &[usize]) -> Generator {
        Generator::Idem(seq(v))
    }

    use Generator::{Cross as P, Dot as Y};

    #[test]
    fn rewrite_examples() {
        let r2 = KlrAlgebra::new(2).unwrap();
        assert!(r2.rewrite(&word(2, vec![P(1), e(&[0, 1])])).unwrap().is_zero());
        assert!(r2.rewrite(&word(2, vec![Y(2), Y(2), e(&[0, 1])])).unwrap().is_zero());

        let r3 = KlrAlgebra::new(3).unwrap();
        let x = r3.rewrite(&word(3, vec![P(2), P(2), e(&[0, 1, 2])])).unwrap();
        assert_eq!(x, word(3, vec![e(&[0, 1, 2]), Y(3)]));
    }

    #[test]
    fn multiply_examples() {
        let r3 = KlrAlgebra::new(3).unwrap();
        let a = word(3, vec![e(&[0, 1, 2])]);
        let b = word(3, vec![e(&[0, 2, 1])]);
        assert!(r3.multiply(&a, &b).unwrap().is_zero());

        let x = word(3, vec![P(2), e(&[0, 1, 2])]);
        let y = word(3, vec![P(2), e(&[0, 2, 1])]);
        let expected = word(3, vec![e(&[0, 2, 1]), Y(3)]).scale(-Coeff::one());
        assert_eq!(r3.multiply(&x, &y).unwrap(), expected);

        let r2 = KlrAlgebra::new(2).unwrap();
        let beta = word(2, vec![Y(2), e(&[0, 1])]);
        assert!(r2.multiply(&beta, &beta).unwrap().is_zero());
        assert!(r2.multiply(&beta, &word(3, vec![])).is_err());
    }

    #[test]
    fn one_ij_examples() {
        let r3 = KlrAlgebra::new(3).unwrap();
        let i = seq(&[0, 1, 2]);
        assert_eq!(r3.one_ij(&i, &i).unwrap(), word(3, vec![e(&[0, 1, 2])]));
        let x = r3.one_ij(&seq(&[0, 1, 2]), &seq(&[0, 2, 1])).unwrap();
        assert_eq!(x, r3.rewrite(&word(3, vec![P(2), e(&[0, 2, 1])])).unwrap());
        assert_eq!(x, word(3, vec![e(&[0, 1, 2]), P(2)]));

        let r4 = KlrAlgebra::new(4).unwrap();
        assert!(r4.one_ij(&seq(&[0, 1, 2, 3]), &seq(&[0, 3, 2, 1])).unwrap().is_zero());
        assert!(r4.one_ij(&seq(&[0, 1, 2, 3]), &seq(&[0, 2, 1, 3])).is_err());
        assert!(r4.one_ij(&seq(&[0, 1, 2]), &seq(&[0, 2, 1])).is_err());
    }

    #[test]
    fn basis_counts() {
        let r2 = KlrAlgebra::new(2).unwrap();
        let b2 = r2.enumerate_basis().unwrap();
        assert_eq!(b2.len(), 2);
        assert_eq!(b2[0].to_word().tokens(), vec!["e(0,1)"]);
        assert_eq!(b2[1].to_word().tokens(), vec!["e(0,1)", "y2"]);
        for n in 3..=5 {
            let alg = KlrAlgebra::new(n).unwrap();
            let expected = binomial(2 * (n as u64 - 1), n as u64 - 1) as usize;
            assert_eq!(alg.enumerate_basis().unwrap().len(), expected);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(KlrAlgebra::new(1).is_err());
        assert!(KlrAlgebra::new(MAX_ENGINE_N + 1).is_err());
    }

    #[test]
    fn unit_word_expands() {
        let r3 = KlrAlgebra::new(3).unwrap();
        assert_eq!(r3.rewrite(&AlgebraElement::unit(3)).unwrap(), r3.identity());
    }
}
