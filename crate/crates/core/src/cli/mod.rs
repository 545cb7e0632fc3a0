//! The `klr` command line with text and JSON output.
//!
//! Exit codes: 0 on success and 1 when a verification check fails. Every
//! other error exits with 2.

pub mod cache;
pub mod parse;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::engine::{format_coeff, format_terms, Coeff, KlrAlgebra, NormalWord};
use crate::error::{Error, Result};
use crate::hecke::verify_identities;
use crate::quotient::{projective_isomorphism_check, verify_truncation_iso, QuiverPresentation};
use crate::residue::{enumerate_admissible, morita_partition, ResidueSeq};
use crate::verify::{run_suite, Suite, VerifyOptions, VerifyReport, MAX_VERIFY_N};

pub use cache::{default_cache_path, read_cache, write_cache, CacheFile};
pub use parse::{parse_element, ElementExpr};

#[derive(Debug, Parser)]
#[command(name = "klr", version, about = "Level-one cyclotomic KLR algebras of the cyclic quiver")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled checks and cache probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Engine,
    Quiver,
    Reptheory,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Engine => Suite::Engine,
            SuiteArg::Quiver => Suite::Quiver,
            SuiteArg::Reptheory => Suite::Reptheory,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissible residue sequences (nonzero idempotents).
    Idempotents {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// The canonical basis.
    Basis {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// Dimension of R_n.
    Dim {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// Rewrite an expression to canonical form.
    Rewrite {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
        /// Expression, e.g. 'p2*e(0,1,2) + 2*y3*e(0,2,1)'.
        expr: String,
    },
    /// Multiply two expressions.
    Mult {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
        /// Left factor.
        left: String,
        /// Right factor.
        right: String,
    },
    /// Morita classes and projective isomorphisms.
    Morita {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// Brauer line quiver presentation.
    Quiver {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// Truncation isomorphism R_{n-1} -> e R_n e.
    Truncation {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// Hecke-side dimension identities.
    Reptheory {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
    },
    /// Run verification suites.
    Verify {
        /// Number of vertices of the cyclic quiver (2 <= n <= 7).
        n: usize,
        /// Which suite to run.
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Random associativity triples for n >= 5.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Write or read a structure-constant cache file.
    ///
    /// Without a path the file lives in $KLR_CACHE_DIR (default: the user
    /// cache directory).
    Cache {
        /// Number of vertices of the cyclic quiver (n >= 2).
        n: usize,
        /// Compute the table and write it, optionally to PATH.
        #[arg(long, num_args = 0..=1, conflicts_with = "read", required_unless_present = "read")]
        write: Option<Option<PathBuf>>,
        /// Load and validate a cache file, optionally from PATH.
        #[arg(long, num_args = 0..=1)]
        read: Option<Option<PathBuf>>,
    },
}

/// Outcome of a command: text or JSON payload and whether checks passed.
struct Output {
    text: String,
    json: Value,
    failures: Vec<String>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, failures: Vec::new() }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => emit(&output, cli.json, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::VerificationFailure(_) | Error::Internal(_) => 1,
                _ => 2,
            }
        }
    }
}

fn emit(output: &Output, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let body = if json {
        serde_json::to_string_pretty(&output.json).expect("serializable") + "\n"
    } else {
        output.text.clone()
    };
    let _ = out.write_all(body.as_bytes());
    for f in &output.failures {
        let _ = writeln!(err, "check failed: {f}");
    }
    if output.failures.is_empty() {
        0
    } else {
        1
    }
}

/// Prints a verification report the way `klr verify` does and returns its
/// exit code: 0 if every check passed, else 1 with each failing check named
/// on `err`.
pub fn emit_report(report: &VerifyReport, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    emit(&verify_output(report), json, out, err)
}

fn engine(n: usize) -> Result<std::sync::Arc<KlrAlgebra>> {
    KlrAlgebra::shared(n)
}

fn seq_json(i: &ResidueSeq) -> Value {
    json!(i.entries())
}

/// `{"n", "terms": [{"coeff": "p/q", "word": [...]}]}` in basis order.
pub fn element_json(n: usize, coords: &BTreeMap<NormalWord, Coeff>) -> Value {
    let terms: Vec<Value> =
        coords.iter().map(|(nw, c)| json!({"coeff": format_coeff(c), "word": nw.to_word().tokens()})).collect();
    json!({"n": n, "terms": terms})
}

/// Canonical form as text, terms in basis order.
pub fn element_text(coords: &BTreeMap<NormalWord, Coeff>) -> String {
    let words: Vec<_> = coords.iter().map(|(nw, c)| (nw.to_word(), *c)).collect();
    format_terms(words.iter().map(|(w, c)| (w, c)))
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Idempotents { n } => {
            let adm = enumerate_admissible(*n)?;
            let text = adm.iter().map(|i| format!("{i}\n")).collect();
            Ok(Output::ok(text, Value::Array(adm.iter().map(seq_json).collect())))
        }
        Command::Basis { n } => {
            let alg = engine(*n)?;
            let basis = alg.enumerate_basis()?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (idx, b) in basis.iter().enumerate() {
                text.push_str(&format!("{idx}\t{b}\tdegree {}\n", b.degree()));
                rows.push(json!({
                    "index": idx,
                    "source": seq_json(b.source()),
                    "target": seq_json(b.target()),
                    "dot": b.dotted(),
                    "reduced_word": b.reduced_word(),
                    "word": b.to_word().tokens(),
                    "degree": b.degree(),
                }));
            }
            Ok(Output::ok(text, json!({"n": n, "dim": basis.len(), "basis": rows})))
        }
        Command::Dim { n } => {
            let dim = engine(*n)?.enumerate_basis()?.len();
            Ok(Output::ok(format!("{dim}\n"), json!({"n": n, "dim": dim})))
        }
        Command::Rewrite { n, expr } => {
            let alg = engine(*n)?;
            let x = parse_element(expr, *n)?.to_element()?;
            let coords = alg.normal_form(&x)?;
            Ok(Output::ok(element_text(&coords) + "\n", element_json(*n, &coords)))
        }
        Command::Mult { n, left, right } => {
            let alg = engine(*n)?;
            let x = parse_element(left, *n)?.to_element()?;
            let y = parse_element(right, *n)?.to_element()?;
            let coords = alg.normal_form(&x.concat(&y)?)?;
            Ok(Output::ok(element_text(&coords) + "\n", element_json(*n, &coords)))
        }
        Command::Morita { n } => morita(*n),
        Command::Quiver { n } => quiver(*n),
        Command::Truncation { n } => truncation(*n),
        Command::Reptheory { n } => {
            let alg = if *n <= MAX_VERIFY_N && *n >= 2 { Some(engine(*n)?) } else { None };
            let r = verify_identities(*n, alg.as_deref())?;
            let mut text = format!(
                "n = {n}\nspecht dims     {:?}\nsimple dims     {:?}\nprojective dims {:?}\n",
                r.specht_dims, r.simple_dims, r.projective_dims
            );
            for id in &r.identities {
                text.push_str(&format!("{}  {}  ({} vs {})\n", mark(id.pass), id.name, id.lhs, id.rhs));
            }
            let failures = r.failures().map(|i| i.name.clone()).collect();
            Ok(Output { text, json: serde_json::to_value(&r)?, failures })
        }
        Command::Verify { n, suite, samples } => {
            let report = run_suite(*n, (*suite).into(), VerifyOptions { samples: *samples, seed: cli.seed })?;
            Ok(verify_output(&report))
        }
        Command::Cache { n, write, read } => {
            let alg = engine(*n)?;
            if let Some(path) = write {
                let path = path.clone().unwrap_or_else(|| default_cache_path(*n));
                let file = write_cache(&alg.structure_constants()?, &path)?;
                let text = format!("wrote {} (n = {n}, digest {})\n", path.display(), file.digest());
                Ok(Output::ok(text, json!({"n": n, "path": path, "digest": file.digest()})))
            } else {
                let path = read.clone().flatten().unwrap_or_else(|| default_cache_path(*n));
                let table = read_cache(&path, &alg, cli.seed)?;
                let text = format!(
                    "{}: n = {n}, {} basis elements, {} nonzero products, probes passed\n",
                    path.display(),
                    table.len(),
                    table.nonzero_products()
                );
                Ok(Output::ok(
                    text,
                    json!({"n": n, "path": path, "dim": table.len(), "nonzero_products": table.nonzero_products()}),
                ))
            }
        }
    }
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Per-check table and JSON for a verification report.
pub fn verify_output_text(report: &VerifyReport) -> String {
    let mut text = format!("verify n = {} suite = {} seed = {}\n", report.n, report.suite, report.seed);
    for c in &report.checks {
        text.push_str(&format!("{}  {:<9} {}", mark(c.pass), c.suite, c.name));
        if !c.detail.is_empty() {
            text.push_str(&format!("  [{}]", c.detail));
        }
        text.push('\n');
    }
    let failed = report.failures().count();
    text.push_str(&format!("{} checks, {} failed\n", report.checks.len(), failed));
    text
}

fn verify_output(report: &VerifyReport) -> Output {
    Output {
        text: verify_output_text(report),
        json: serde_json::to_value(report).expect("serializable"),
        failures: report.failures().map(|c| c.name.clone()).collect(),
    }
}

fn morita(n: usize) -> Result<Output> {
    let classes = morita_partition(n)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (k, members) in &classes {
        let list: Vec<String> = members.iter().map(ToString::to_string).collect();
        text.push_str(&format!("class {k} ({}): {}\n", members.len(), list.join(" ")));
        rows.push(json!({"class": k.get(), "size": members.len(), "members": members.iter().map(seq_json).collect::<Vec<_>>()}));
    }
    let mut failures = Vec::new();
    let mut iso = Value::Null;
    if n <= MAX_VERIFY_N {
        let r = projective_isomorphism_check(&*engine(n)?)?;
        text.push_str(&format!(
            "same-class inverse pairs: {} ({} failures)\nneighbouring-class pairs: {} ({} failures)\nfar pairs vanishing: {} ({} failures)\n",
            r.classes.iter().map(|c| c.inverse_pairs).sum::<usize>(),
            r.inverse_failures.len(),
            r.neighbour_pairs,
            r.neighbour_failures.len(),
            r.far_pairs,
            r.far_failures.len()
        ));
        for (i, j) in r.inverse_failures.iter().chain(&r.neighbour_failures).chain(&r.far_failures) {
            failures.push(format!("projective isomorphism {i} -> {j}"));
        }
        iso = json!({
            "inverse_pairs": r.classes.iter().map(|c| c.inverse_pairs).sum::<usize>(),
            "neighbour_pairs": r.neighbour_pairs,
            "far_pairs": r.far_pairs,
            "passed": r.passed(),
        });
    }
    Ok(Output { text, json: json!({"n": n, "classes": rows, "projective_isomorphisms": iso}), failures })
}

fn quiver(n: usize) -> Result<Output> {
    let alg = engine(n)?;
    let qp = QuiverPresentation::compute(&alg)?;
    let coords = |x| alg.normal_form(x);
    let mut text = format!("n = {n}\nconvention: {}\nvertices: ", qp.convention);
    text.push_str(
        &qp.vertices.iter().zip(&qp.representatives).map(|(v, r)| format!("{v}={r}")).collect::<Vec<_>>().join(" "),
    );
    text.push('\n');
    let mut arrows = Vec::new();
    for (a, x) in &qp.arrows {
        let c = coords(x)?;
        text.push_str(&format!("{a}: {} -> {}  = {}\n", a.source(), a.target(), element_text(&c)));
        arrows
            .push(json!({"name": a.to_string(), "from": a.source(), "to": a.target(), "element": element_json(n, &c)}));
    }
    let mut relations = Vec::new();
    for r in &qp.relations {
        text.push_str(&format!("{}  {}  [{}]\n", mark(r.holds), r.name, r.detail));
        relations.push(json!({"name": r.name, "holds": r.holds, "detail": r.detail}));
    }
    let mut signs = Vec::new();
    for s in &qp.loop_signs {
        let c = s.computed.map(|c| format_coeff(&c));
        text.push_str(&format!(
            "gamma_{t} beta_{t} = {} * y{n} e(i{}); expected sign {} ({})\n",
            c.clone().unwrap_or_else(|| "?".into()),
            s.t + 1,
            s.expected_sign,
            if s.matches_expected() { "agrees" } else { "differs" },
            t = s.t
        ));
        signs.push(
            json!({"t": s.t, "coefficient": c, "expected_sign": s.expected_sign, "agrees": s.matches_expected()}),
        );
    }
    let mut junction = Vec::new();
    for p in qp.junction() {
        let name: Vec<String> = p.path.iter().map(ToString::to_string).collect();
        let c = coords(&p.value)?;
        text.push_str(&format!("junction {} = {}\n", name.join(" "), element_text(&c)));
        junction.push(json!({"path": name, "value": element_json(n, &c)}));
    }
    let failures = qp.failures().map(|r| r.name.clone()).collect();
    let body = json!({
        "n": n,
        "convention": qp.convention,
        "vertices": qp.vertices.iter().map(|v| v.get()).collect::<Vec<_>>(),
        "representatives": qp.representatives.iter().map(seq_json).collect::<Vec<_>>(),
        "arrows": arrows,
        "relations": relations,
        "loop_signs": signs,
        "junction": junction,
    });
    Ok(Output { text, json: body, failures })
}

fn truncation(n: usize) -> Result<Output> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("truncation needs n >= 3, got {n}")));
    }
    if n > MAX_VERIFY_N {
        return Err(Error::InvalidParameter(format!("truncation supports n <= {MAX_VERIFY_N}, got {n}")));
    }
    let r = verify_truncation_iso(&*engine(n - 1)?, &*engine(n)?)?;
    let text = format!(
        "n = {n}\ndim R_(n-1) = {}\ndim eR_ne = {} (expected {})\nrelations preserved: {}/{}\nbasis bijection: {}\nstructure constants: {} products, {} mismatches\n",
        r.dim_truncated,
        r.dim_target,
        r.expected_dim,
        r.relations_checked - r.relation_failures.len(),
        r.relations_checked,
        r.basis_bijection_verified,
        r.products_checked,
        r.structure_constant_failures.len()
    );
    let mut failures: Vec<String> = r.relation_failures.iter().map(|f| format!("relation preserved: {f}")).collect();
    failures.extend(r.basis_failures.iter().map(|f| format!("basis bijection: {f}")));
    if !r.passed() && failures.is_empty() {
        failures.push("truncation isomorphism".into());
    }
    let body = json!({
        "n": n,
        "dim_truncated": r.dim_truncated,
        "dim_target": r.dim_target,
        "expected_dim": r.expected_dim as u64,
        "relations_checked": r.relations_checked,
        "relation_failures": r.relation_failures,
        "basis_bijection_verified": r.basis_bijection_verified,
        "products_checked": r.products_checked,
        "structure_constant_failures": r.structure_constant_failures.len(),
        "passed": r.passed(),
    });
    Ok(Output { text, json: body, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("klr").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn dim_and_idempotents() {
        assert_eq!(run_str(&["dim", "3"]), (0, "6\n".into(), String::new()));
        let (code, out, _) = run_str(&["idempotents", "5", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 8);
    }

    #[test]
    fn usage_and_parse_errors_exit_2() {
        assert_eq!(run_str(&["bogus"]).0, 2);
        let (code, _, err) = run_str(&["rewrite", "2", "e(0,1"]);
        assert_eq!(code, 2);
        assert!(err.contains("offset 6"), "{err}");
        assert_eq!(run_str(&["dim", "1"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn rewrite_output() {
        let (code, out, _) = run_str(&["rewrite", "3", "e(0,1,2)*p2*p2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "e(0,1,2)*y3\n");
        let (_, out, _) = run_str(&["rewrite", "2", "y2*e(0,1) - e(0,1)*y2"]);
        assert_eq!(out, "0\n");
    }
}
