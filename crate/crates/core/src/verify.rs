//! Verification suites aggregating every check of the crate into one report.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::binomial;
use crate::engine::{AlgebraElement, Generator, KlrAlgebra, Word};
use crate::error::{Error, Result};
use crate::hecke::verify_identities;
use crate::quotient::{projective_isomorphism_check, verify_truncation_iso, QuiverPresentation};
use crate::residue::{class_representative, enumerate_admissible, morita_partition, swap_connected};

/// Largest `n` the verification suites accept.
pub const MAX_VERIFY_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Engine,
    Quiver,
    Reptheory,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "engine" => Ok(Suite::Engine),
            "quiver" => Ok(Suite::Quiver),
            "reptheory" => Ok(Suite::Reptheory),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!(
                "unknown suite {other:?}; expected engine, quiver, reptheory or all"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Suite::Engine => "engine",
            Suite::Quiver => "quiver",
            Suite::Reptheory => "reptheory",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn new(n: usize, suite: Suite, seed: u64) -> Self {
        VerifyReport { n, suite, seed, checks: Vec::new() }
    }

    pub fn push(&mut self, suite: Suite, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { suite, name: name.into(), pass, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random associativity triples for `n >= 5`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 100_000, seed: 0 }
    }
}

/// Turns a verification error into a failed check; other errors propagate.
fn guard<T>(report: &mut VerifyReport, suite: Suite, name: &str, result: Result<T>) -> Result<Option<T>> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(Error::VerificationFailure(msg)) => {
            report.push(suite, name, false, msg);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn run_suite(n: usize, suite: Suite, opts: VerifyOptions) -> Result<VerifyReport> {
    if !(2..=MAX_VERIFY_N).contains(&n) {
        return Err(Error::InvalidParameter(format!("verify supports 2 <= n <= {MAX_VERIFY_N}, got {n}")));
    }
    let mut report = VerifyReport::new(n, suite, opts.seed);
    let Some(alg) = guard(&mut report, Suite::Engine, "engine construction", KlrAlgebra::shared(n))? else {
        return Ok(report);
    };
    if suite.includes(Suite::Engine) {
        engine_checks(&alg, opts, &mut report)?;
    }
    if suite.includes(Suite::Quiver) {
        quiver_checks(&alg, &mut report)?;
    }
    if suite.includes(Suite::Reptheory) {
        let s = Suite::Reptheory;
        if let Some(r) = guard(&mut report, s, "dimension identities", verify_identities(n, Some(&alg)))? {
            for id in r.identities {
                let detail = format!("{} vs {}", id.lhs, id.rhs);
                report.push(s, id.name, id.pass, detail);
            }
        }
    }
    Ok(report)
}

fn engine_checks(alg: &KlrAlgebra, opts: VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    let s = Suite::Engine;
    let n = alg.n();
    let adm = enumerate_admissible(n)?;
    report.push(s, "admissible count = 2^(n-2)", adm.len() == 1 << (n - 2), format!("{}", adm.len()));
    report.push(
        s,
        "vanishing derivations replay",
        alg.facts().traces_replayed() == alg.facts().len(),
        format!("{} traces", alg.facts().traces_replayed()),
    );

    let dot = |k| Generator::Dot(k);
    let mut dot_failures = Vec::new();
    let mut loop_failures = Vec::new();
    for i in &adm {
        let e = Generator::Idem(i.clone());
        for k in 1..n {
            let w = AlgebraElement::from_word(n, Word(vec![dot(k), e.clone()]))?;
            if !alg.rewrite(&w)?.is_zero() {
                dot_failures.push(format!("y{k} e{i}"));
            }
        }
        let sq = AlgebraElement::from_word(n, Word(vec![dot(n), dot(n), e.clone()]))?;
        if !alg.rewrite(&sq)?.is_zero() {
            dot_failures.push(format!("y{n}^2 e{i}"));
        }
        let lp = AlgebraElement::from_word(n, Word(vec![e.clone(), dot(n)]))?;
        if alg.rewrite(&lp)? != lp {
            loop_failures.push(format!("y{n} e{i} is not a basis word"));
        }
    }
    report.push(s, "y_k e(i) = 0 for k < n and y_n^2 e(i) = 0", dot_failures.is_empty(), dot_failures.join(", "));

    let Some(table) = guard(report, s, "structure constants", alg.structure_constants())? else {
        return Ok(());
    };
    let expected = binomial(2 * (n as u64 - 1), n as u64 - 1);
    report.push(
        s,
        "basis count = C(2(n-1),n-1)",
        table.len() as u128 == expected,
        format!("{} vs {expected}", table.len()),
    );
    for i in &adm {
        let dim = table.basis().iter().filter(|b| b.source() == i && b.target() == i).count();
        if dim != 2 {
            loop_failures.push(format!("dim e{i} R e{i} = {dim}"));
        }
    }
    report.push(
        s,
        "y_n e(i) basis element and dim e(i) R e(i) = 2",
        loop_failures.is_empty(),
        loop_failures.join(", "),
    );

    let mut cross_dotted = Vec::new();
    for i in &adm {
        for j in adm.iter().filter(|j| j.last() != i.last()) {
            let x = alg.multiply(&AlgebraElement::generator(n, dot(n))?, &alg.one_ij(i, j)?)?;
            if !x.is_zero() {
                cross_dotted.push(format!("{i}->{j}"));
            }
        }
    }
    report.push(s, "dotted cross-class connectors vanish", cross_dotted.is_empty(), cross_dotted.join(", "));

    let ring = table.verify_ring_axioms(opts.samples, opts.seed);
    let mode = if ring.exhaustive { "exhaustive" } else { "sampled" };
    report.push(s, "unit law", ring.unit_failures.is_empty(), format!("{} failures", ring.unit_failures.len()));
    report.push(
        s,
        "associativity",
        ring.associativity_failures.is_empty(),
        format!("{mode}, {} triples, {} failures", ring.triples_checked, ring.associativity_failures.len()),
    );
    report.push(
        s,
        "integral structure constants",
        ring.non_integer.is_empty(),
        format!("{} products", table.nonzero_products()),
    );
    report.push(
        s,
        "degree additivity",
        ring.degree_failures.is_empty(),
        format!("{} failures", ring.degree_failures.len()),
    );
    Ok(())
}

fn quiver_checks(alg: &KlrAlgebra, report: &mut VerifyReport) -> Result<()> {
    let s = Suite::Quiver;
    let n = alg.n();
    let classes = morita_partition(n)?;
    report.push(s, "Morita classes = n-1", classes.len() == n - 1, format!("{}", classes.len()));
    for (k, members) in &classes {
        let expected = binomial(n as u64 - 2, k.get() as u64 - 1);
        let rep = class_representative(n, *k)?;
        report.push(
            s,
            format!("class {k}: size C(n-2,{}), swap-connected, contains i_{k}", k.get() - 1),
            members.len() as u128 == expected && swap_connected(members) && members.contains(&rep),
            format!("size {}", members.len()),
        );
    }
    let proj = projective_isomorphism_check(alg)?;
    report.push(
        s,
        "same-class connectors compose to e(i)",
        proj.inverse_failures.is_empty(),
        format!("{} pairs", proj.classes.iter().map(|c| c.inverse_pairs).sum::<usize>()),
    );
    report.push(
        s,
        "neighbouring-class round trips are nonzero loops",
        proj.neighbour_failures.is_empty(),
        format!("{} pairs", proj.neighbour_pairs),
    );
    report.push(
        s,
        "connectors across two or more classes vanish",
        proj.far_failures.is_empty(),
        format!("{} pairs", proj.far_pairs),
    );

    let qp = QuiverPresentation::compute(alg)?;
    report.push(s, "quiver vertices = n-1", qp.vertices.len() == n - 1, format!("{}", qp.vertices.len()));
    for rel in &qp.relations {
        report.push(s, rel.name.clone(), rel.holds, rel.detail.clone());
    }

    if n >= 3 {
        let small = KlrAlgebra::shared(n - 1)?;
        if let Some(t) = guard(report, s, "truncation isomorphism", verify_truncation_iso(&small, alg))? {
            report.push(
                s,
                "truncation preserves relations",
                t.relation_failures.is_empty(),
                format!("{} relations", t.relations_checked),
            );
            report.push(s, "truncation basis bijection", t.basis_bijection_verified, t.basis_failures.join(", "));
            report.push(
                s,
                "truncation structure constants",
                t.basis_bijection_verified && t.structure_constant_failures.is_empty(),
                format!("{} products", t.products_checked),
            );
            report.push(
                s,
                "dim eR_ne = C(2(n-2),n-2)",
                t.dim_target as u128 == t.expected_dim && t.dim_truncated == t.dim_target,
                format!("{} vs {}", t.dim_target, t.expected_dim),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_small() {
        for n in 2..=4 {
            let r = run_suite(n, Suite::All, VerifyOptions { samples: 100, seed: 1 }).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn suite_parse_and_bounds() {
        assert_eq!("quiver".parse::<Suite>().unwrap(), Suite::Quiver);
        assert!("nope".parse::<Suite>().is_err());
        assert!(run_suite(1, Suite::All, VerifyOptions::default()).is_err());
        assert!(run_suite(MAX_VERIFY_N + 1, Suite::All, VerifyOptions::default()).is_err());
    }

    #[test]
    fn failures_are_named() {
        let mut r = VerifyReport::new(2, Suite::All, 0);
        r.push(Suite::Engine, "ok", true, "");
        r.push(Suite::Engine, "broken identity", false, "1 vs 2");
        assert!(!r.passed());
        assert_eq!(r.failures().map(|c| c.name.as_str()).collect::<Vec<_>>(), vec!["broken identity"]);
    }
}
