//! Acceptance gate: runs every acceptance criterion at its stated tolerance and
//! prints one pass/fail line per criterion. Exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::process::Command;
use std::time::{Duration, Instant};

use itertools::Itertools;

use klr_core::engine::{derive_dot_rules, derive_idempotent_vanishing, Fact, FactBook};
use klr_core::hecke::{hook_dim, verify_identities, Partition};
use klr_core::quotient::{projective_isomorphism_check, verify_truncation_iso, QuiverPresentation};
use klr_core::residue::{class_representative, enumerate_admissible, is_admissible, morita_partition, swap_connected};
use klr_core::verify::{Suite, VerifyReport};
use klr_core::{AlgebraElement, Generator, KlrAlgebra, MoritaClassId, ResidueSeq, Word};

use common::{partitions, pascal, syt_count, vanishing_closure};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn seq(v: Vec<usize>) -> ResidueSeq {
    ResidueSeq::new(v).expect("permutation")
}

fn idempotent_count() -> Outcome {
    for n in 2..=10 {
        let adm = enumerate_admissible(n).map_err(err)?;
        ensure(adm.len() == 1 << (n - 2), || format!("n = {n}: {} admissible", adm.len()))?;
    }
    let mut checked = 0;
    for n in 2..=5 {
        let alg = KlrAlgebra::new(n).map_err(err)?;
        let zero = vanishing_closure(n);
        let mut book = FactBook::default();
        for p in (0..n).permutations(n) {
            let i = seq(p.clone());
            let e = alg.rewrite(&alg.idempotent(&i).map_err(err)?).map_err(err)?;
            let predicate = is_admissible(&i);
            ensure(predicate == !e.is_zero(), || format!("rewrite(e{i}) disagrees with the predicate"))?;
            ensure(predicate == !zero.contains(&p), || format!("closure oracle disagrees at {i}"))?;
            if !predicate {
                let trace = derive_idempotent_vanishing(&i).map_err(err)?;
                book.admit(&trace, alg.quiver()).map_err(|e| format!("trace for e{i} rejected: {e}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("n = 2..10 counts exact, {checked} sequences cross-checked for n = 2..5"))
}

fn dimension() -> Outcome {
    let mut dims = Vec::new();
    for n in 2..=6 {
        let basis = KlrAlgebra::shared(n).map_err(err)?.enumerate_basis().map_err(err)?;
        let distinct: BTreeSet<_> = basis.iter().collect();
        ensure(distinct.len() == basis.len(), || format!("n = {n}: repeated basis words"))?;
        dims.push(basis.len() as u128);
    }
    let expected: Vec<u128> = (2..=6).map(|n| pascal(2 * (n - 1), n - 1)).collect();
    ensure(expected == vec![2, 6, 20, 70, 252], || "Pascal oracle mismatch".into())?;
    ensure(dims == expected, || format!("{dims:?} vs {expected:?}"))?;
    Ok(format!("{dims:?}"))
}

fn dot_vanishing() -> Outcome {
    let mut traces = 0;
    for n in 2..=6 {
        let alg = KlrAlgebra::shared(n).map_err(err)?;
        for i in alg.admissible() {
            let e = Generator::Idem(i.clone());
            for k in 1..n {
                let w = AlgebraElement::from_word(n, Word(vec![Generator::Dot(k), e.clone()])).map_err(err)?;
                ensure(alg.rewrite(&w).map_err(err)?.is_zero(), || format!("y{k} e{i} != 0"))?;
            }
            let sq = Word(vec![Generator::Dot(n), Generator::Dot(n), e.clone()]);
            let sq = AlgebraElement::from_word(n, sq).map_err(err)?;
            ensure(alg.rewrite(&sq).map_err(err)?.is_zero(), || format!("y{n}^2 e{i} != 0"))?;
        }
        // Replay every dot derivation into a fresh book holding only the
        // idempotent vanishing facts.
        let mut book = FactBook::default();
        for p in (0..n).permutations(n) {
            let i = seq(p);
            if !is_admissible(&i) {
                book.admit(&derive_idempotent_vanishing(&i).map_err(err)?, alg.quiver()).map_err(err)?;
            }
        }
        let dots = derive_dot_rules(n).map_err(err)?;
        ensure(dots.len() == n << (n - 2), || format!("n = {n}: {} dot traces", dots.len()))?;
        for t in &dots {
            book.admit(t, alg.quiver()).map_err(|e| format!("trace for {} rejected: {e}", t.claim))?;
        }
        for i in alg.admissible() {
            ensure(book.contains(&Fact::DotSquareVanishes(i.clone())), || format!("missing y{n}^2 e{i}"))?;
        }
        traces += dots.len();
    }
    Ok(format!("{traces} dot traces replayed"))
}

fn nonvanishing_loop() -> Outcome {
    let mut count = 0;
    for n in 2..=6 {
        let alg = KlrAlgebra::shared(n).map_err(err)?;
        let basis = alg.enumerate_basis().map_err(err)?;
        for i in alg.admissible() {
            let w = Word(vec![Generator::Idem(i.clone()), Generator::Dot(n)]);
            let nf = alg.normal_form(&AlgebraElement::from_word(n, w).map_err(err)?).map_err(err)?;
            let single = nf.len() == 1
                && nf.iter().all(|(b, c)| b.dotted() && b.source() == i && b.target() == i && *c == 1.into());
            ensure(single, || format!("y{n} e{i} is not a basis element"))?;
            let corner: Vec<_> = basis.iter().filter(|b| b.source() == i && b.target() == i).collect();
            ensure(corner.len() == 2, || format!("dim e{i} R e{i} = {}", corner.len()))?;
            ensure(corner.iter().filter(|b| b.dotted()).count() == 1, || format!("corner at {i} lacks the loop"))?;
            count += 1;
        }
    }
    Ok(format!("{count} corner algebras of dimension 2"))
}

fn ring_consistency() -> Outcome {
    let mut summary = Vec::new();
    for n in 2..=6 {
        let alg = KlrAlgebra::shared(n).map_err(err)?;
        let table = alg.structure_constants().map_err(err)?;
        let report = table.verify_ring_axioms(100_000, 0x5eed + n as u64);
        ensure(n > 4 || report.exhaustive, || format!("n = {n} not exhaustive"))?;
        ensure(report.exhaustive || report.triples_checked >= 100_000, || {
            format!("n = {n}: only {} triples", report.triples_checked)
        })?;
        ensure(report.passed(), || format!("n = {n}: {report:?}"))?;
        summary.push(format!("n={n}:{}", report.triples_checked));
    }
    Ok(format!("triples {}", summary.join(" ")))
}

/// Breadth-first connectivity by single adjacent swaps, written without the
/// library's helper.
fn swap_graph_connected(members: &[ResidueSeq]) -> bool {
    let set: BTreeSet<Vec<usize>> = members.iter().map(|m| m.entries().to_vec()).collect();
    let Some(start) = set.iter().next().cloned() else { return true };
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for k in 0..cur.len() - 1 {
            let mut next = cur.clone();
            next.swap(k, k + 1);
            if set.contains(&next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len() == set.len()
}

fn morita_structure() -> Outcome {
    for n in 2..=8 {
        let classes = morita_partition(n).map_err(err)?;
        ensure(classes.len() == n - 1, || format!("n = {n}: {} classes", classes.len()))?;
        for (k, members) in &classes {
            let expected = pascal(n - 2, k.get() - 1);
            ensure(members.len() as u128 == expected, || format!("n = {n}, class {k}: size {}", members.len()))?;
            ensure(swap_connected(members) && swap_graph_connected(members), || {
                format!("n = {n}, class {k} not swap-connected")
            })?;
            let rep = class_representative(n, *k).map_err(err)?;
            ensure(members.contains(&rep), || format!("n = {n}: i_{k} outside its class"))?;
            ensure(members.iter().all(|m| m.last() == k.get()), || format!("n = {n}: class {k} mixes last residues"))?;
        }
    }
    let mut pairs = 0;
    for n in 2..=6 {
        let r = projective_isomorphism_check(&*KlrAlgebra::shared(n).map_err(err)?).map_err(err)?;
        ensure(r.passed(), || format!("n = {n}: {r:?}"))?;
        let inverse: usize = r.classes.iter().map(|c| c.inverse_pairs).sum();
        let sizes: usize = r.classes.iter().map(|c| c.size * c.size).sum();
        ensure(inverse == sizes, || format!("n = {n}: {inverse} inverse pairs, expected {sizes}"))?;
        pairs += inverse + r.far_pairs;
    }
    Ok(format!("classes exact for n = 2..8, {pairs} connector pairs checked for n <= 6"))
}

fn quiver() -> Outcome {
    let mut relations = 0;
    let mut signs = Vec::new();
    for n in 2..=6 {
        let alg = KlrAlgebra::shared(n).map_err(err)?;
        let qp = QuiverPresentation::compute(&alg).map_err(err)?;
        if let Some(bad) = qp.failures().next() {
            return Err(format!("n = {n}: {} ({})", bad.name, bad.detail));
        }
        let expected_names = 1 + 5 * n.saturating_sub(3) + (n - 2) + 1;
        ensure(qp.relations.len() == expected_names, || {
            format!("n = {n}: {} relations, expected {expected_names}", qp.relations.len())
        })?;
        ensure(qp.loop_signs.len() == n - 2, || format!("n = {n}: missing loop signs"))?;
        for s in &qp.loop_signs {
            ensure(s.matches_expected(), || format!("n = {n}: gamma_{} beta_{} sign {:?}", s.t, s.t, s.computed))?;
            signs.push(s.expected_sign);
        }
        relations += qp.relations.len();
    }
    Ok(format!("{relations} relations hold, loop signs {signs:?}"))
}

fn truncation() -> Outcome {
    let mut products = 0;
    for n in 3..=6 {
        let small = KlrAlgebra::shared(n - 1).map_err(err)?;
        let big = KlrAlgebra::shared(n).map_err(err)?;
        let r = verify_truncation_iso(&small, &big).map_err(err)?;
        ensure(r.passed(), || format!("n = {n}: {r:?}"))?;
        ensure(r.expected_dim == pascal(2 * (n - 2), n - 2), || format!("n = {n}: expected dim {}", r.expected_dim))?;
        ensure(r.products_checked == r.dim_target * r.dim_target, || format!("n = {n}: partial product check"))?;
        products += r.products_checked;
    }
    Ok(format!("{products} structure constants matched"))
}

fn rep_theory() -> Outcome {
    for r in 1..=8 {
        for shape in partitions(r) {
            let got = hook_dim(&Partition::new(shape.clone()).map_err(err)?).map_err(err)?;
            ensure(got == syt_count(&shape), || format!("dim S^{shape:?}: {got} vs {}", syt_count(&shape)))?;
        }
    }
    for n in 2..=16 {
        let alg = if n <= 6 { Some(KlrAlgebra::shared(n).map_err(err)?) } else { None };
        let r = verify_identities(n, alg.as_deref()).map_err(err)?;
        if let Some(bad) = r.failures().next() {
            return Err(format!("n = {n}: {} ({} vs {})", bad.name, bad.lhs, bad.rhs));
        }
        for k in 0..n {
            ensure(r.specht_dims[k] == pascal(n - 1, k), || format!("n = {n}: dim S^lambda_{k}"))?;
            if n - 1 <= 8 {
                let hook: Vec<usize> = std::iter::once(n - k).chain(std::iter::repeat_n(1, k)).collect();
                ensure(r.specht_dims[k] == syt_count(&hook), || format!("n = {n}: tableau count for {hook:?}"))?;
            }
        }
        ensure(r.simple_dims.iter().sum::<u128>() == 1 << (n - 2), || format!("n = {n}: sum dim D"))?;
        let odd: u128 = (0..n).step_by(2).map(|k| pascal(n - 1, k)).sum::<u128>();
        let even: u128 = (1..n).step_by(2).map(|k| pascal(n - 1, k)).sum::<u128>();
        ensure(odd == 1 << (n - 2) && even == 1 << (n - 2), || format!("n = {n}: parity sums"))?;
        let classes = morita_partition(n).map_err(err)?;
        for (k, &d) in r.simple_dims.iter().enumerate() {
            ensure(d == pascal(n - 2, k), || format!("n = {n}: dim D^lambda_{k} = {d}"))?;
            let size = classes[&MoritaClassId(k + 1)].len() as u128;
            ensure(d == size, || format!("n = {n}: class {} has {size} members, dim D = {d}", k + 1))?;
        }
        let weighted: u128 = r.simple_dims.iter().zip(&r.projective_dims).map(|(d, p)| d * p).sum();
        ensure(weighted == pascal(2 * (n - 1), n - 1), || format!("n = {n}: weighted sum {weighted}"))?;
        if let Some(alg) = alg {
            let basis = alg.enumerate_basis().map_err(err)?;
            let per_end: BTreeMap<usize, usize> = basis.iter().fold(BTreeMap::new(), |mut m, b| {
                if *b.target() == class_representative(n, b.target().class()).expect("class") {
                    *m.entry(b.target().last()).or_default() += 1;
                }
                m
            });
            for k in 1..n {
                ensure(per_end.get(&k).copied().unwrap_or(0) as u128 == pascal(n, k), || {
                    format!("n = {n}: dim R e(i_{k})")
                })?;
            }
        }
    }
    Ok("n = 2..16 identities exact, tableau oracle for r <= 8, engine projectives for n <= 6".into())
}

fn cli_verify() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_klr");
    let start = Instant::now();
    let mut checks = 0;
    for n in 2..=6 {
        let out =
            Command::new(bin).args(["--json", "verify", &n.to_string(), "--suite", "all"]).output().map_err(err)?;
        ensure(out.status.code() == Some(0), || {
            format!("verify {n} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
        checks += v["checks"].as_array().map_or(0, Vec::len);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;

    let mut report = VerifyReport::new(4, Suite::Reptheory, 0);
    report.push(Suite::Reptheory, "sum dim D = 2^(n-2)", true, "4 vs 4");
    report.push(Suite::Reptheory, "synthetic broken identity", false, "3 vs 4");
    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let code = klr_core::cli::emit_report(&report, false, &mut out, &mut errs);
    let stderr = String::from_utf8_lossy(&errs);
    ensure(code == 1, || format!("failing report exited {code}"))?;
    ensure(stderr.contains("synthetic broken identity"), || format!("stderr does not name the check: {stderr}"))?;
    Ok(format!("{checks} checks passed in {:.1} s, failing report exits 1", elapsed.as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("idempotent count", idempotent_count, Some(Duration::from_secs(10))),
        ("dimension", dimension, Some(Duration::from_secs(60))),
        ("dot vanishing", dot_vanishing, Some(Duration::from_secs(60))),
        ("non-vanishing loop", nonvanishing_loop, None),
        ("ring consistency", ring_consistency, Some(Duration::from_secs(180))),
        ("Morita structure", morita_structure, None),
        ("quiver presentation", quiver, None),
        ("truncation isomorphism", truncation, None),
        ("rep-theory identities", rep_theory, Some(Duration::from_secs(5))),
        ("verify CLI", cli_verify, Some(Duration::from_secs(300))),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("exceeded {} s", limit.as_secs()));
            }
        }
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} [{:>7.2} s] {name}: {detail}", k + 1, elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
