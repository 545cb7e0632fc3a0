//! Versioned JSON cache of structure-constant tables.
//!
//! A file holds the basis entries and every nonzero product as
//! `[a, b, [[c, v], ...]]` with integer `v`. A SHA-256 digest covers the
//! canonical JSON of everything else.
//!
//! Loading checks the digest and compares the basis with the engine's
//! canonical words. It then recomputes 32 products drawn without replacement.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::binomial;
use crate::engine::{lex_min_reduced_word, Coeff, KlrAlgebra, NormalWord, StructureConstantTable};
use crate::error::{Error, Result};
use crate::residue::ResidueSeq;

pub const FORMAT: &str = "klr-structure-constants";
pub const VERSION: u32 = 1;
pub const PROBES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub source: ResidueSeq,
    pub target: ResidueSeq,
    pub dot: bool,
    pub reduced_word: Vec<usize>,
}

pub type ProductRow = (usize, usize, Vec<(usize, i64)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Payload {
    format: String,
    version: u32,
    n: usize,
    basis: Vec<BasisEntry>,
    products: Vec<ProductRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    #[serde(flatten)]
    payload: Payload,
    digest: String,
}

fn digest_of(payload: &Payload) -> Result<String> {
    let bytes = serde_json::to_vec(payload)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::VerificationFailure(format!("cache rejected: {}", msg.into()))
}

impl CacheFile {
    pub fn from_table(table: &StructureConstantTable) -> Result<Self> {
        let basis = table
            .basis()
            .iter()
            .map(|b| BasisEntry {
                source: b.source().clone(),
                target: b.target().clone(),
                dot: b.dotted(),
                reduced_word: b.reduced_word(),
            })
            .collect();
        let mut products = Vec::with_capacity(table.nonzero_products());
        for (&(a, b), row) in table.products() {
            let terms = row
                .iter()
                .map(|(c, v)| {
                    if !v.is_integer() {
                        return Err(Error::VerificationFailure(format!("non-integer constant {v} at ({a}, {b})")));
                    }
                    Ok((*c, v.to_integer()))
                })
                .collect::<Result<_>>()?;
            products.push((a, b, terms));
        }
        let payload = Payload { format: FORMAT.into(), version: VERSION, n: table.n(), basis, products };
        let digest = digest_of(&payload)?;
        Ok(CacheFile { payload, digest })
    }

    pub fn n(&self) -> usize {
        self.payload.n
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("malformed file: {e}")))
    }

    /// Checks the file against the engine and returns the table.
    pub fn validate(&self, alg: &KlrAlgebra, seed: u64) -> Result<StructureConstantTable> {
        let p = &self.payload;
        if p.format != FORMAT || p.version != VERSION {
            return Err(invalid(format!("unsupported format {} version {}", p.format, p.version)));
        }
        if p.n != alg.n() {
            return Err(invalid(format!("file is for n = {}, expected {}", p.n, alg.n())));
        }
        if digest_of(p)? != self.digest {
            return Err(invalid("digest mismatch"));
        }
        let expected = binomial(2 * (p.n as u64 - 1), p.n as u64 - 1);
        if p.basis.len() as u128 != expected {
            return Err(invalid(format!("{} basis entries, expected {expected}", p.basis.len())));
        }
        let mut basis = Vec::with_capacity(p.basis.len());
        for entry in &p.basis {
            if entry.reduced_word != lex_min_reduced_word(&entry.source, &entry.target) {
                return Err(invalid(format!("reduced word of {} -> {} is not canonical", entry.source, entry.target)));
            }
            basis.push(NormalWord::new(entry.source.clone(), entry.dot, entry.target.clone())?);
        }
        if basis != alg.enumerate_basis()? {
            return Err(invalid("basis differs from the canonical basis"));
        }
        let mut products = BTreeMap::new();
        for (a, b, row) in &p.products {
            let row: Vec<(usize, Coeff)> = row.iter().map(|(c, v)| (*c, Coeff::from_integer(*v))).collect();
            if products.insert((*a, *b), row).is_some() {
                return Err(invalid(format!("duplicate product ({a}, {b})")));
            }
        }
        let table = StructureConstantTable::from_parts(p.n, basis, products).map_err(|e| invalid(e.to_string()))?;
        probe(&table, alg, seed)?;
        Ok(table)
    }
}

/// Recomputes up to [`PROBES`] distinct products: half drawn from the stored
/// nonzero products, the rest from all pairs.
fn probe(table: &StructureConstantTable, alg: &KlrAlgebra, seed: u64) -> Result<()> {
    let len = table.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stored: Vec<(usize, usize)> = table.products().map(|(k, _)| *k).collect();
    let mut pairs: Vec<(usize, usize)> =
        sample(&mut rng, stored.len(), (PROBES / 2).min(stored.len())).into_iter().map(|i| stored[i]).collect();
    let total = len * len;
    let want = PROBES.min(total);
    for idx in sample(&mut rng, total, want).into_iter() {
        if pairs.len() == want {
            break;
        }
        let pair = (idx / len, idx % len);
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    let basis = table.basis();
    for (a, b) in pairs {
        let fresh: Vec<(usize, Coeff)> = alg
            .multiply_normal(&basis[a], &basis[b])?
            .into_iter()
            .map(|(nw, c)| table.index_of(&nw).map(|i| (i, c)).ok_or_else(|| invalid(format!("{nw} not in basis"))))
            .collect::<Result<_>>()?;
        if fresh.as_slice() != table.product(a, b) {
            return Err(invalid(format!("probe of product ({a}, {b}) does not match")));
        }
    }
    Ok(())
}

/// `$KLR_CACHE_DIR`, else `$XDG_CACHE_HOME/klr`, else `$HOME/.cache/klr`,
/// else `./.klr-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("KLR_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(dir).join("klr");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return PathBuf::from(home).join(".cache").join("klr");
    }
    PathBuf::from(".klr-cache")
}

pub fn default_cache_path(n: usize) -> PathBuf {
    default_cache_dir().join(format!("structure-constants-n{n}.json"))
}

pub fn write_cache(table: &StructureConstantTable, path: &Path) -> Result<CacheFile> {
    let file = CacheFile::from_table(table)?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, file.to_json()?)?;
    Ok(file)
}

pub fn read_cache(path: &Path, alg: &KlrAlgebra, seed: u64) -> Result<StructureConstantTable> {
    let text = std::fs::read_to_string(path)?;
    CacheFile::from_json(&text)?.validate(alg, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_in_memory() {
        let alg = KlrAlgebra::new(3).unwrap();
        let table = alg.structure_constants().unwrap();
        let file = CacheFile::from_table(&table).unwrap();
        let back = CacheFile::from_json(&file.to_json().unwrap()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.validate(&alg, 5).unwrap(), table);
    }

    #[test]
    fn digest_and_probe_reject_tampering() {
        let alg = KlrAlgebra::new(3).unwrap();
        let table = alg.structure_constants().unwrap();
        let mut file = CacheFile::from_table(&table).unwrap();
        file.payload.products[0].2[0].1 += 1;
        assert!(file.validate(&alg, 0).is_err());
        // Re-signing does not help: every stored product is probed at n = 3.
        file.digest = digest_of(&file.payload).unwrap();
        let msg = file.validate(&alg, 0).unwrap_err().to_string();
        assert!(msg.contains("probe"), "{msg}");
    }

    #[test]
    fn wrong_n_rejected() {
        let table = KlrAlgebra::new(2).unwrap().structure_constants().unwrap();
        let file = CacheFile::from_table(&table).unwrap();
        assert!(file.validate(&KlrAlgebra::new(3).unwrap(), 0).is_err());
    }
}
