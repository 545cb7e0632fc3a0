use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Coeff, KlrAlgebra, NormalWord};
use crate::error::{Error, Result};

pub type Coords = BTreeMap<usize, Coeff>;

/// Sparse multiplication table of the canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstantTable {
    n: usize,
    basis: Vec<NormalWord>,
    index: HashMap<NormalWord, usize>,
    degrees: Vec<i64>,
    products: BTreeMap<(usize, usize), Vec<(usize, Coeff)>>,
}

impl StructureConstantTable {
    /// Multiplies every pair of basis elements in the engine.
    ///
    /// Fails if a product leaves the span of the basis or has a non-integer
    /// coefficient.
    pub fn compute(alg: &KlrAlgebra) -> Result<Self> {
        let basis = alg.enumerate_basis()?;
        let index: HashMap<NormalWord, usize> = basis.iter().cloned().enumerate().map(|(idx, b)| (b, idx)).collect();
        let mut products = BTreeMap::new();
        for (a, x) in basis.iter().enumerate() {
            for (b, y) in basis.iter().enumerate() {
                let prod = alg.multiply_normal(x, y)?;
                if prod.is_empty() {
                    continue;
                }
                let mut row = Vec::with_capacity(prod.len());
                for (nw, c) in prod {
                    let Some(&idx) = index.get(&nw) else {
                        return Err(Error::VerificationFailure(format!(
                            "product of basis elements {a} ({x}) and {b} ({y}) leaves the basis at {nw}"
                        )));
                    };
                    row.push((idx, c));
                }
                products.insert((a, b), row);
            }
        }
        Self::from_parts(alg.n(), basis, products)
    }

    /// Assembles a table, checking index ranges and integrality.
    pub fn from_parts(
        n: usize,
        basis: Vec<NormalWord>,
        products: BTreeMap<(usize, usize), Vec<(usize, Coeff)>>,
    ) -> Result<Self> {
        let len = basis.len();
        for (&(a, b), row) in &products {
            if a >= len || b >= len {
                return Err(Error::VerificationFailure(format!("product index ({a}, {b}) out of range")));
            }
            for (idx, c) in row {
                if *idx >= len {
                    return Err(Error::VerificationFailure(format!("support index {idx} out of range")));
                }
                if c.is_zero() {
                    return Err(Error::VerificationFailure(format!("zero coefficient stored for ({a}, {b})")));
                }
                if !c.is_integer() {
                    return Err(Error::VerificationFailure(format!(
                        "non-integer structure constant {c} in product ({a}, {b})"
                    )));
                }
            }
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::VerificationFailure(format!("row ({a}, {b}) is not sorted")));
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(idx, b)| (b, idx)).collect();
        let degrees = basis.iter().map(NormalWord::degree).collect();
        Ok(StructureConstantTable { n, basis, index, degrees, products })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[NormalWord] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, nw: &NormalWord) -> Option<usize> {
        self.index.get(nw).copied()
    }

    pub fn product(&self, a: usize, b: usize) -> &[(usize, Coeff)] {
        self.products.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn products(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, Coeff)>)> {
        self.products.iter()
    }

    pub fn nonzero_products(&self) -> usize {
        self.products.len()
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn identity_coords(&self) -> Coords {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.dotted() && b.source() == b.target())
            .map(|(idx, _)| (idx, Coeff::one()))
            .collect()
    }

    pub fn multiply_coords(&self, x: &Coords, y: &Coords) -> Coords {
        let mut out = Coords::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                for (c, v) in self.product(a, b) {
                    *out.entry(*c).or_insert_with(Coeff::zero) += *ca * *cb * *v;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn basis_coords(idx: usize) -> Coords {
        Coords::from([(idx, Coeff::one())])
    }

    /// Ring axioms on the table, with degree additivity.
    ///
    /// Associativity is exhaustive when the basis has at most 20 elements
    /// (`n <= 4`), otherwise checked on `sample` random triples drawn from
    /// `seed`.
    pub fn verify_ring_axioms(&self, sample: usize, seed: u64) -> RingReport {
        let len = self.len();
        let one = self.identity_coords();
        let mut report = RingReport { n: self.n, basis_len: len, exhaustive: len <= 20, ..Default::default() };
        for idx in 0..len {
            let x = Self::basis_coords(idx);
            if self.multiply_coords(&one, &x) != x || self.multiply_coords(&x, &one) != x {
                report.unit_failures.push(idx);
            }
        }
        let check = |a: usize, b: usize, c: usize, report: &mut RingReport| {
            let (x, y, z) = (Self::basis_coords(a), Self::basis_coords(b), Self::basis_coords(c));
            let left = self.multiply_coords(&self.multiply_coords(&x, &y), &z);
            let right = self.multiply_coords(&x, &self.multiply_coords(&y, &z));
            report.triples_checked += 1;
            if left != right {
                report.associativity_failures.push((a, b, c));
            }
        };
        if report.exhaustive {
            for a in 0..len {
                for b in 0..len {
                    for c in 0..len {
                        check(a, b, c, &mut report);
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..sample {
                let (a, b, c) = (rng.gen_range(0..len), rng.gen_range(0..len), rng.gen_range(0..len));
                check(a, b, c, &mut report);
            }
        }
        for (&(a, b), row) in &self.products {
            for (c, v) in row {
                if !v.is_integer() {
                    report.non_integer.push((a, b));
                }
                if self.degrees[*c] != self.degrees[a] + self.degrees[b] {
                    report.degree_failures.push((a, b));
                }
            }
        }
        report
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingReport {
    pub n: usize,
    pub basis_len: usize,
    pub exhaustive: bool,
    pub triples_checked: usize,
    pub unit_failures: Vec<usize>,
    pub associativity_failures: Vec<(usize, usize, usize)>,
    pub non_integer: Vec<(usize, usize)>,
    pub degree_failures: Vec<(usize, usize)>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.unit_failures.is_empty()
            && self.associativity_failures.is_empty()
            && self.non_integer.is_empty()
            && self.degree_failures.is_empty()
    }
}

impl KlrAlgebra {
    pub fn structure_constants(&self) -> Result<StructureConstantTable> {
        StructureConstantTable::compute(self)
    }

    pub fn verify_ring_axioms(&self, sample: usize, seed: u64) -> Result<RingReport> {
        Ok(self.structure_constants()?.verify_ring_axioms(sample, seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    #[test]
    fn n2_table() {
        let alg = KlrAlgebra::new(2).unwrap();
        let t = alg.structure_constants().unwrap();
        assert_eq!(t.len(), 2);
        let one = Coeff::one();
        // basis: 0 = e, 1 = beta = y_2 e
        assert_eq!(t.product(0, 0), &[(0, one)]);
        assert_eq!(t.product(0, 1), &[(1, one)]);
        assert_eq!(t.product(1, 0), &[(1, one)]);
        assert!(t.product(1, 1).is_empty());
        let report = t.verify_ring_axioms(0, 0);
        assert!(report.passed());
        assert_eq!(report.triples_checked, 8);
    }

    #[test]
    fn n3_opposite_crossings_give_dotted_idempotents() {
        let alg = KlrAlgebra::new(3).unwrap();
        let t = alg.structure_constants().unwrap();
        let crossings: Vec<usize> = (0..t.len()).filter(|&i| t.basis()[i].source() != t.basis()[i].target()).collect();
        assert_eq!(crossings.len(), 2);
        let (a, b) = (crossings[0], crossings[1]);
        for (x, y) in [(a, b), (b, a)] {
            let row = t.product(x, y);
            assert_eq!(row.len(), 1);
            let target = &t.basis()[row[0].0];
            assert!(target.dotted());
            assert_eq!(target.source(), t.basis()[x].source());
            assert_eq!(row[0].1.abs(), Coeff::one());
        }
        let report = t.verify_ring_axioms(0, 0);
        assert!(report.passed());
        assert_eq!(report.triples_checked, 216);
    }

    #[test]
    fn corrupted_parts_are_rejected() {
        let alg = KlrAlgebra::new(2).unwrap();
        let basis = alg.enumerate_basis().unwrap();
        let bad = BTreeMap::from([((0, 0), vec![(0, Coeff::new(1, 2))])]);
        assert!(StructureConstantTable::from_parts(2, basis.clone(), bad).is_err());
        let bad = BTreeMap::from([((0, 5), vec![(0, Coeff::one())])]);
        assert!(StructureConstantTable::from_parts(2, basis, bad).is_err());
    }
}
