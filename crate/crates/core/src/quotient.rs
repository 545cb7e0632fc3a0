//! Morita classes as isomorphism classes of projectives, the Brauer line
//! quiver presentation and the idempotent truncation `R_{n-1} -> e R_n e`.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};

use crate::binomial;
use crate::engine::{
    relation_instances, AlgebraElement, Coeff, Generator, KlrAlgebra, NormalWord, StructureConstantTable, Word,
};
use crate::error::{Error, Result};
use crate::residue::{class_representative, enumerate_admissible, hat_raw, MoritaClassId, Quiver, ResidueSeq};

/// How arrow products are read.
pub const PATH_CONVENTION: &str = "paths compose left to right as algebra products: \
the arrow a: s -> t is an element of e(i_s) R_n e(i_t), so the path a then b is the product a*b";

/// `Some(c)` with `x = c * y`, `None` if `x` is not a multiple of `y`.
/// Requires `y != 0`.
pub fn ratio(alg: &KlrAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> Result<Option<Coeff>> {
    let x = alg.normal_form(x)?;
    let y = alg.normal_form(y)?;
    let Some((first, cy)) = y.iter().next() else {
        return Err(Error::InvalidInput("ratio against zero".into()));
    };
    let c = x.get(first).copied().unwrap_or_else(Coeff::zero) / cy;
    let scaled: BTreeMap<NormalWord, Coeff> =
        y.iter().map(|(nw, v)| (nw.clone(), c * v)).filter(|(_, v)| !v.is_zero()).collect();
    Ok((scaled == x).then_some(c))
}

fn sign_of(c: Coeff) -> i8 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Projective isomorphisms

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassIsoSummary {
    pub class: MoritaClassId,
    pub size: usize,
    pub inverse_pairs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProjectiveIsoReport {
    pub n: usize,
    pub classes: Vec<ClassIsoSummary>,
    /// Same-class pairs whose round trip is not `e(i)`.
    pub inverse_failures: Vec<(ResidueSeq, ResidueSeq)>,
    /// Neighbouring-class pairs whose round trip is `e(i)` (it must not be).
    pub neighbour_pairs: usize,
    pub neighbour_failures: Vec<(ResidueSeq, ResidueSeq)>,
    /// Pairs with class difference at least two.
    pub far_pairs: usize,
    pub far_failures: Vec<(ResidueSeq, ResidueSeq)>,
}

impl ProjectiveIsoReport {
    pub fn passed(&self) -> bool {
        self.inverse_failures.is_empty() && self.neighbour_failures.is_empty() && self.far_failures.is_empty()
    }
}

/// For all admissible pairs `(i, j)`: same class means
/// `1_ij * 1_ji = e(i)`; class difference one means the round trip is a
/// dotted loop, never `e(i)`; larger differences mean `1_ij = 0`.
pub fn projective_isomorphism_check(alg: &KlrAlgebra) -> Result<ProjectiveIsoReport> {
    let n = alg.n();
    let mut report = ProjectiveIsoReport { n, ..Default::default() };
    let mut per_class: BTreeMap<MoritaClassId, ClassIsoSummary> = BTreeMap::new();
    for i in alg.admissible() {
        let summary =
            per_class.entry(i.class()).or_insert(ClassIsoSummary { class: i.class(), size: 0, inverse_pairs: 0 });
        summary.size += 1;
        for j in alg.admissible() {
            let diff = i.last().abs_diff(j.last());
            let there = alg.one_ij(i, j)?;
            match diff {
                0 | 1 => {
                    let round = alg.multiply(&there, &alg.one_ij(j, i)?)?;
                    let is_e = round == alg.idempotent(i)?;
                    if diff == 0 {
                        summary.inverse_pairs += 1;
                        if !is_e {
                            report.inverse_failures.push((i.clone(), j.clone()));
                        }
                    } else {
                        report.neighbour_pairs += 1;
                        if is_e || round.is_zero() {
                            report.neighbour_failures.push((i.clone(), j.clone()));
                        }
                    }
                }
                _ => {
                    report.far_pairs += 1;
                    if !there.is_zero() {
                        report.far_failures.push((i.clone(), j.clone()));
                    }
                }
            }
        }
    }
    report.classes = per_class.into_values().collect();
    Ok(report)
}

// ---------------------------------------------------------------------------
// Quiver presentation

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arrow {
    /// The loop at vertex 1.
    Loop,
    /// `beta_t: t -> t+1`.
    Beta(usize),
    /// `gamma_t: t+1 -> t`.
    Gamma(usize),
}

impl Arrow {
    pub fn source(self) -> usize {
        match self {
            Arrow::Loop => 1,
            Arrow::Beta(t) => t,
            Arrow::Gamma(t) => t + 1,
        }
    }

    pub fn target(self) -> usize {
        match self {
            Arrow::Loop => 1,
            Arrow::Beta(t) => t + 1,
            Arrow::Gamma(t) => t,
        }
    }
}

impl std::fmt::Display for Arrow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arrow::Loop => write!(f, "beta"),
            Arrow::Beta(t) => write!(f, "beta_{t}"),
            Arrow::Gamma(t) => write!(f, "gamma_{t}"),
        }
    }
}

fn path_name(path: &[Arrow]) -> String {
    path.iter().map(Arrow::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Computed value of `gamma_t beta_t` against the loop at vertex `t+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSign {
    pub t: usize,
    /// `c` with `gamma_t beta_t = c * y_n e(i_{t+1})`, if it is a multiple.
    pub computed: Option<Coeff>,
    /// The sign `(-1)^t` of the textbook formula.
    pub expected_sign: i8,
}

impl LoopSign {
    pub fn is_unit_multiple(&self) -> bool {
        self.computed.is_some_and(|c| c.abs() == Coeff::one())
    }

    pub fn matches_expected(&self) -> bool {
        self.computed.is_some_and(|c| sign_of(c) == self.expected_sign && c.abs() == Coeff::one())
    }
}

/// A path of length two or three and what it evaluates to.
#[derive(Clone, Debug, PartialEq)]
pub struct PathValue {
    pub path: Vec<Arrow>,
    pub value: AlgebraElement,
    /// `c` with value `= c * (loop at the end vertex)`, if so.
    pub loop_multiple: Option<Coeff>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverPresentation {
    pub n: usize,
    pub vertices: Vec<MoritaClassId>,
    pub representatives: Vec<ResidueSeq>,
    pub arrows: Vec<(Arrow, AlgebraElement)>,
    pub relations: Vec<RelationCheck>,
    pub loop_signs: Vec<LoopSign>,
    pub paths: Vec<PathValue>,
    pub convention: &'static str,
}

impl QuiverPresentation {
    /// Builds the arrows from class representatives and evaluates every
    /// relation and every path of length two and three.
    pub fn compute(alg: &KlrAlgebra) -> Result<Self> {
        let n = alg.n();
        let vertices: Vec<MoritaClassId> = (1..n).map(MoritaClassId).collect();
        let reps: Vec<ResidueSeq> = vertices.iter().map(|&k| class_representative(n, k)).collect::<Result<_>>()?;
        let rep = |v: usize| &reps[v - 1];
        let dot = AlgebraElement::generator(n, Generator::Dot(n))?;
        let loop_at = |v: usize| alg.multiply(&dot, &alg.idempotent(rep(v))?);

        let mut arrows = vec![(Arrow::Loop, loop_at(1)?)];
        for t in 1..n - 1 {
            arrows.push((Arrow::Beta(t), alg.one_ij(rep(t), rep(t + 1))?));
            let sign = if t % 2 == 0 { Coeff::one() } else { -Coeff::one() };
            arrows.push((Arrow::Gamma(t), alg.one_ij(rep(t + 1), rep(t))?.scale(sign)));
        }
        let value: BTreeMap<Arrow, AlgebraElement> = arrows.iter().cloned().collect();
        let product = |path: &[Arrow]| -> Result<AlgebraElement> {
            let mut acc = value[&path[0]].clone();
            for a in &path[1..] {
                acc = alg.multiply(&acc, &value[a])?;
            }
            Ok(acc)
        };
        let mut relations = Vec::new();
        let mut zero_check = |name: String, path: &[Arrow]| -> Result<()> {
            let v = product(path)?;
            relations.push(RelationCheck { name, holds: v.is_zero(), detail: format!("{} = {}", path_name(path), v) });
            Ok(())
        };
        zero_check("beta^2 = 0".into(), &[Arrow::Loop, Arrow::Loop])?;
        for t in 1..n.saturating_sub(2) {
            zero_check(format!("beta_{t} beta_{} = 0", t + 1), &[Arrow::Beta(t), Arrow::Beta(t + 1)])?;
            zero_check(format!("gamma_{} gamma_{t} = 0", t + 1), &[Arrow::Gamma(t + 1), Arrow::Gamma(t)])?;
        }
        for t in 1..n.saturating_sub(2) {
            let left = product(&[Arrow::Gamma(t), Arrow::Beta(t)])?;
            let right = product(&[Arrow::Beta(t + 1), Arrow::Gamma(t + 1)])?;
            relations.push(RelationCheck {
                name: format!("gamma_{t} beta_{t} = beta_{} gamma_{}", t + 1, t + 1),
                holds: left == right,
                detail: format!("{left} vs {right}"),
            });
        }
        // Crossing three consecutive representatives in either direction.
        for t in 1..n.saturating_sub(2) {
            for (a, b, c) in [(t, t + 1, t + 2), (t + 2, t + 1, t)] {
                let v = alg.multiply(&alg.one_ij(rep(a), rep(b))?, &alg.one_ij(rep(b), rep(c))?)?;
                relations.push(RelationCheck {
                    name: format!("1_(i{a},i{b}) 1_(i{b},i{c}) = 0"),
                    holds: v.is_zero(),
                    detail: format!("{}", v),
                });
            }
        }
        let mut loop_signs = Vec::new();
        for t in 1..n - 1 {
            let v = product(&[Arrow::Gamma(t), Arrow::Beta(t)])?;
            let computed = ratio(alg, &v, &loop_at(t + 1)?)?;
            let sign = LoopSign { t, computed, expected_sign: if t % 2 == 0 { 1 } else { -1 } };
            relations.push(RelationCheck {
                name: format!("gamma_{t} beta_{t} = +-y{n} e(i{})", t + 1),
                holds: sign.is_unit_multiple(),
                detail: match computed {
                    Some(c) => format!("coefficient {c}"),
                    None => format!("{v} is not a multiple of y{n} e(i{})", t + 1),
                },
            });
            loop_signs.push(sign);
        }

        let mut paths = Vec::new();
        let all: Vec<Arrow> = arrows.iter().map(|(a, _)| *a).collect();
        let mut frontier: Vec<Vec<Arrow>> = all.iter().map(|a| vec![*a]).collect();
        for _ in 2..=3 {
            let mut next = Vec::new();
            for p in &frontier {
                let end = p.last().expect("nonempty").target();
                for a in all.iter().filter(|a| a.source() == end) {
                    let mut q = p.clone();
                    q.push(*a);
                    next.push(q);
                }
            }
            for p in &next {
                let v = product(p)?;
                let end = p.last().expect("nonempty").target();
                let loop_multiple = if v.is_zero() { None } else { ratio(alg, &v, &loop_at(end)?)? };
                paths.push(PathValue { path: p.clone(), value: v, loop_multiple });
            }
            frontier = next;
        }
        // Every nonzero path of length two is a loop multiple; length three vanishes.
        let stray: Vec<String> = paths
            .iter()
            .filter(|p| !p.value.is_zero() && (p.path.len() == 3 || p.loop_multiple.is_none()))
            .map(|p| path_name(&p.path))
            .collect();
        relations.push(RelationCheck {
            name: "paths of length 3 vanish, length 2 paths are loop multiples".into(),
            holds: stray.is_empty(),
            detail: if stray.is_empty() {
                format!("{} paths evaluated", paths.len())
            } else {
                format!("unexpected: {}", stray.join(", "))
            },
        });

        Ok(QuiverPresentation {
            n,
            vertices,
            representatives: reps,
            arrows,
            relations,
            loop_signs,
            paths,
            convention: PATH_CONVENTION,
        })
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|r| !r.holds)
    }

    /// Values of the products tying the loop to `beta_1` and `gamma_1`.
    pub fn junction(&self) -> Vec<&PathValue> {
        self.paths
            .iter()
            .filter(|p| {
                p.path.len() == 2
                    && matches!(
                        (p.path[0], p.path[1]),
                        (Arrow::Loop, Arrow::Beta(1))
                            | (Arrow::Gamma(1), Arrow::Loop)
                            | (Arrow::Beta(1), Arrow::Gamma(1))
                    )
            })
            .collect()
    }
}

/// Quiver presentation, failing on the first relation that does not hold.
pub fn quiver_presentation(alg: &KlrAlgebra) -> Result<QuiverPresentation> {
    let qp = QuiverPresentation::compute(alg)?;
    if let Some(bad) = qp.failures().next() {
        return Err(Error::VerificationFailure(format!("relation {} fails: {}", bad.name, bad.detail)));
    }
    Ok(qp)
}

// ---------------------------------------------------------------------------
// Truncation

fn map_generator(g: &Generator) -> Option<Generator> {
    Some(match g {
        Generator::Idem(i) if i.get(1) == 0 => Generator::Idem(hat_raw(i)),
        Generator::Idem(_) => return None,
        Generator::Dot(k) => Generator::Dot(k + 1),
        Generator::Cross(k) => Generator::Cross(k + 1),
    })
}

/// Admissible sequences of length `n` with `i_2 = 1`.
pub fn truncation_sequences(n: usize) -> Result<Vec<ResidueSeq>> {
    Ok(enumerate_admissible(n)?.into_iter().filter(|i| i.get(2) == 1).collect())
}

/// Image of an element of `R_{n-1}` in `e R_n e`, where `e` is the sum of
/// `e(i)` over admissible `i` with `i_2 = 1`.
///
/// Each generator `g` maps to `e g' e` with `e(i) -> e(hat i)`,
/// `y_k -> y_{k+1}` and `psi_k -> psi_{k+1}`; `e(i)` with `i_1 != 0` is zero
/// in `R_{n-1}` and maps to zero. Expanding the copies of `e` leaves one
/// idempotent path per starting sequence, so a word maps to the shifted word
/// (prefixed with its starting idempotent when it has none of its own) for
/// every start whose slices all stay in the corner.
pub fn truncation_map(x: &AlgebraElement) -> Result<AlgebraElement> {
    let n = x.n() + 1;
    if n < 3 {
        return Err(Error::InvalidParameter(format!("truncation needs n >= 3, got {n}")));
    }
    let corner: BTreeSet<ResidueSeq> = truncation_sequences(n)?.into_iter().collect();
    let mut out = AlgebraElement::zero(n);
    for (word, c) in x.terms() {
        let Some(image) = word.gens().iter().map(map_generator).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let has_idem = image.iter().any(|g| matches!(g, Generator::Idem(_)));
        for start in &corner {
            let mut slice = start.clone();
            let stays = image.iter().all(|g| match g {
                Generator::Idem(i) => *i == slice,
                Generator::Dot(_) => true,
                Generator::Cross(k) => {
                    slice = slice.swapped(*k);
                    corner.contains(&slice)
                }
            });
            if !stays {
                continue;
            }
            let mut gens = Vec::with_capacity(image.len() + 1);
            if !has_idem {
                gens.push(Generator::Idem(start.clone()));
            }
            gens.extend(image.iter().cloned());
            out = out.add(&AlgebraElement::from_term(n, *c, Word(gens))?)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruncationReport {
    pub n: usize,
    pub dim_truncated: usize,
    pub dim_target: usize,
    pub expected_dim: u128,
    pub relations_checked: usize,
    pub relation_failures: Vec<String>,
    pub basis_bijection_verified: bool,
    pub basis_failures: Vec<String>,
    pub products_checked: usize,
    pub structure_constant_failures: Vec<(usize, usize)>,
}

impl TruncationReport {
    pub fn passed(&self) -> bool {
        self.relation_failures.is_empty()
            && self.basis_bijection_verified
            && self.structure_constant_failures.is_empty()
            && self.dim_truncated == self.dim_target
            && self.dim_target as u128 == self.expected_dim
    }
}

/// Checks that truncation is an isomorphism `R_{n-1} -> e R_n e`.
///
/// * every defining relation of `R_{n-1}` maps to zero in `R_n`;
/// * basis elements map to distinct basis elements with both endpoints in
///   `I_n^1`, exhausting those;
/// * structure constants agree under the induced index map.
pub fn verify_truncation_iso(small: &KlrAlgebra, big: &KlrAlgebra) -> Result<TruncationReport> {
    let n = big.n();
    if n < 3 || small.n() + 1 != n {
        return Err(Error::InvalidParameter(format!(
            "need algebras for n-1 and n with n >= 3, got {} and {n}",
            small.n()
        )));
    }
    let mut report =
        TruncationReport { n, expected_dim: binomial(2 * (n as u64 - 2), n as u64 - 2), ..Default::default() };

    let quiver = Quiver::new(n - 1)?;
    for rule in relation_instances(n - 1)? {
        let mut lhs = AlgebraElement::zero(n - 1);
        for (c, w) in rule.instance(&quiver)? {
            lhs = lhs.add(&AlgebraElement::from_term(n - 1, c, w)?)?;
        }
        report.relations_checked += 1;
        let image = big.rewrite(&truncation_map(&lhs)?)?;
        if !image.is_zero() {
            report.relation_failures.push(format!("{rule}: image {image}"));
        }
    }

    let small_table = StructureConstantTable::compute(small)?;
    let big_table = StructureConstantTable::compute(big)?;
    let corner: BTreeSet<ResidueSeq> = truncation_sequences(n)?.into_iter().collect();
    let target: Vec<usize> = (0..big_table.len())
        .filter(|&idx| {
            let b = &big_table.basis()[idx];
            corner.contains(b.source()) && corner.contains(b.target())
        })
        .collect();
    report.dim_truncated = small_table.len();
    report.dim_target = target.len();

    let mut index_map = Vec::with_capacity(small_table.len());
    for b in small_table.basis() {
        let image = big.normal_form(&truncation_map(&AlgebraElement::from_word(n - 1, b.to_word())?)?)?;
        let single = match image.iter().next() {
            Some((nw, c)) if image.len() == 1 && c.is_one() => big_table.index_of(nw),
            _ => None,
        };
        match single {
            Some(idx) if target.contains(&idx) => index_map.push(idx),
            _ => report.basis_failures.push(format!("{b} maps to {}", big.element_from_coords(&image))),
        }
    }
    let distinct: BTreeSet<usize> = index_map.iter().copied().collect();
    report.basis_bijection_verified = report.basis_failures.is_empty()
        && distinct.len() == index_map.len()
        && distinct == target.iter().copied().collect();
    if !report.basis_bijection_verified {
        return Ok(report);
    }

    for a in 0..small_table.len() {
        for b in 0..small_table.len() {
            report.products_checked += 1;
            let mut mapped: Vec<(usize, Coeff)> =
                small_table.product(a, b).iter().map(|(c, v)| (index_map[*c], *v)).collect();
            mapped.sort_by_key(|(c, _)| *c);
            if mapped.as_slice() != big_table.product(index_map[a], index_map[b]) {
                report.structure_constant_failures.push((a, b));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[usize]) -> ResidueSeq {
        ResidueSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn projective_examples() {
        let alg = KlrAlgebra::new(4).unwrap();
        let (i, j) = (seq(&[0, 1, 3, 2]), seq(&[0, 3, 1, 2]));
        let round = alg.multiply(&alg.one_ij(&i, &j).unwrap(), &alg.one_ij(&j, &i).unwrap()).unwrap();
        assert_eq!(round, alg.idempotent(&i).unwrap());
        assert!(alg.one_ij(&seq(&[0, 1, 2, 3]), &seq(&[0, 3, 2, 1])).unwrap().is_zero());
        let report = projective_isomorphism_check(&alg).unwrap();
        assert!(report.passed(), "{report:?}");
        let sizes: Vec<usize> = report.classes.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
    }

    #[test]
    fn n2_presentation() {
        let alg = KlrAlgebra::new(2).unwrap();
        let qp = quiver_presentation(&alg).unwrap();
        assert_eq!(qp.vertices, vec![MoritaClassId(1)]);
        assert_eq!(qp.arrows.len(), 1);
        assert_eq!(qp.arrows[0].1.to_string(), "e(0,1)*y2");
    }

    #[test]
    fn n3_loop_sign() {
        let alg = KlrAlgebra::new(3).unwrap();
        let qp = quiver_presentation(&alg).unwrap();
        assert_eq!(qp.representatives, vec![seq(&[0, 2, 1]), seq(&[0, 1, 2])]);
        assert_eq!(qp.loop_signs[0].computed, Some(-Coeff::one()));
        assert!(qp.loop_signs[0].matches_expected());
    }

    #[test]
    fn truncation_examples() {
        let x = AlgebraElement::generator(3, Generator::Idem(seq(&[0, 2, 1]))).unwrap();
        assert_eq!(truncation_map(&x).unwrap().to_string(), "e(0,1,3,2)");
        let y = AlgebraElement::from_word(2, Word(vec![Generator::Dot(2), Generator::Idem(seq(&[0, 1]))])).unwrap();
        assert_eq!(truncation_map(&y).unwrap().to_string(), "y3*e(0,1,2)");
        let p =
            AlgebraElement::from_word(3, Word(vec![Generator::Cross(2), Generator::Idem(seq(&[0, 2, 1]))])).unwrap();
        assert_eq!(truncation_map(&p).unwrap().to_string(), "p3*e(0,1,3,2)");
        let killed = AlgebraElement::generator(2, Generator::Idem(seq(&[1, 0]))).unwrap();
        assert!(truncation_map(&killed).unwrap().is_zero());
        assert!(truncation_map(&AlgebraElement::unit(1)).is_err());
    }

    #[test]
    fn truncation_small() {
        for n in 3..=4 {
            let report = verify_truncation_iso(&KlrAlgebra::new(n - 1).unwrap(), &KlrAlgebra::new(n).unwrap()).unwrap();
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.dim_target as u128, binomial(2 * (n as u64 - 2), n as u64 - 2));
        }
    }
}
