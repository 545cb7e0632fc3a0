//! Dimension bookkeeping for the Hecke algebra block matching `R_n`, indexed
//! by hook partitions.

use std::fmt;

use serde::Serialize;

use crate::binomial;
use crate::engine::KlrAlgebra;
use crate::error::{Error, Result};
use crate::residue::{class_representative, morita_partition, MoritaClassId};

/// Largest `n` accepted by [`verify_identities`].
pub const MAX_HECKE_N: usize = 30;

/// An integer partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// `(n-k, 1^k)`.
    pub fn hook(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::InvalidParameter(format!("no hook (n-k, 1^k) for n = {n}, k = {k}")));
        }
        Ok(Partition(std::iter::once(n - k).chain(std::iter::repeat_n(1, k)).collect()))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Column lengths.
    pub fn conjugate(&self) -> Vec<usize> {
        let width = self.0.first().copied().unwrap_or(0);
        (1..=width).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect()
    }

    /// Hook length of every box, row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let cols = self.conjugate();
        self.0
            .iter()
            .enumerate()
            .map(|(r, &len)| (0..len).map(|c| (len - c - 1) + (cols[c] - r - 1) + 1).collect())
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `r! / prod(hooks)`, the dimension of the Specht module.
pub fn hook_dim(lambda: &Partition) -> Result<u128> {
    let r = lambda.size();
    if r > 33 {
        return Err(Error::InvalidParameter(format!("partition of {r} too large for exact u128 arithmetic")));
    }
    let factorial: u128 = (1..=r as u128).product();
    let hooks: u128 = lambda.hook_lengths().iter().flatten().map(|&h| h as u128).product();
    Ok(factorial / hooks)
}

/// No part value repeated `n` or more times.
pub fn is_n_regular(lambda: &Partition, n: usize) -> bool {
    lambda.parts().chunk_by(|a, b| a == b).all(|run| run.len() < n)
}

/// `dim D^{lambda_k}` for `k = 0..=n-2` from the two-term recursion
/// `D_0 = 1`, `D_k = dim S^{lambda_k} - D_{k-1}`.
pub fn simple_dims_hooks(n: usize) -> Result<Vec<u128>> {
    Ok(simple_recursion(n)?[..n - 1].to_vec())
}

/// The recursion run through `k = n-1`, where it must return to zero.
fn simple_recursion(n: usize) -> Result<Vec<u128>> {
    if !(2..=MAX_HECKE_N).contains(&n) {
        return Err(Error::InvalidParameter(format!("need 2 <= n <= {MAX_HECKE_N}, got {n}")));
    }
    let mut dims: Vec<u128> = vec![1];
    for k in 1..n {
        let s = hook_dim(&Partition::hook(n, k)?)?;
        let prev = dims[k - 1];
        let d = s
            .checked_sub(prev)
            .ok_or_else(|| Error::VerificationFailure(format!("negative simple dimension at k = {k}: {s} - {prev}")))?;
        dims.push(d);
    }
    Ok(dims)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDimReport {
    pub n: usize,
    /// `dim S^{lambda_k}`, `k = 0..=n-1`.
    pub specht_dims: Vec<u128>,
    /// `dim D^{lambda_k}`, `k = 0..=n-2`.
    pub simple_dims: Vec<u128>,
    /// `dim P^{lambda_k}`, `k = 0..=n-2`.
    pub projective_dims: Vec<u128>,
    pub identities: Vec<Identity>,
}

impl BlockDimReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Identity> {
        self.identities.iter().filter(|i| !i.pass)
    }
}

/// Checks every dimension identity of the block for `n`.
///
/// When `engine` is given (it must be the algebra for the same `n`), the
/// left projective `R_n e(i_k)` of each class representative is also
/// measured against `C(n, k)`.
pub fn verify_identities(n: usize, engine: Option<&KlrAlgebra>) -> Result<BlockDimReport> {
    let recursion = simple_recursion(n)?;
    let nu = n as u64;
    let mut ids = Vec::new();
    let mut push = |name: String, lhs: u128, rhs: u128| ids.push(Identity { name, lhs, rhs, pass: lhs == rhs });

    let specht_dims: Vec<u128> = (0..n).map(|k| hook_dim(&Partition::hook(n, k)?)).collect::<Result<_>>()?;
    for (k, &s) in specht_dims.iter().enumerate() {
        push(format!("dim S^lambda_{k} = C({},{k})", n - 1), s, binomial(nu - 1, k as u64));
    }
    let regular = (0..n).filter(|&k| is_n_regular(&Partition::hook(n, k).expect("k < n"), n)).count();
    push("n-regular hooks = n-1".into(), regular as u128, nu as u128 - 1);

    let simple_dims = recursion[..n - 1].to_vec();
    for (k, &d) in simple_dims.iter().enumerate() {
        push(format!("dim D^lambda_{k} = C({},{k})", n - 2), d, binomial(nu - 2, k as u64));
    }
    push("recursion vanishes at the singular hook".into(), recursion[n - 1], 0);

    let total: u128 = simple_dims.iter().sum();
    let power = 1u128 << (n - 2);
    push("sum dim D = 2^(n-2)".into(), total, power);
    // Pair consecutive terms using D_k + D_{k-1} = C(n-1, k).
    let parity: u128 = if n % 2 == 1 {
        1 + (1..=(n - 1) / 2).map(|m| binomial(nu - 1, 2 * m as u64)).sum::<u128>()
    } else {
        (0..n / 2).map(|m| binomial(nu - 1, 2 * m as u64 + 1)).sum::<u128>()
    };
    let branch = if n % 2 == 1 { "odd" } else { "even" };
    push(format!("{branch} binomial sum = 2^(n-2)"), parity, power);
    push(format!("{branch} binomial sum = sum dim D"), parity, total);

    let projective_dims: Vec<u128> = (0..n - 1).map(|k| specht_dims[k] + specht_dims[k + 1]).collect();
    for (k, &p) in projective_dims.iter().enumerate() {
        push(format!("dim P^lambda_{k} = C({n},{})", k + 1), p, binomial(nu, k as u64 + 1));
    }
    let weighted: u128 = simple_dims.iter().zip(&projective_dims).map(|(d, p)| d * p).sum();
    push("sum dim D * dim P = C(2(n-1),n-1)".into(), weighted, binomial(2 * (nu - 1), nu - 1));

    if n <= 16 {
        let classes = morita_partition(n)?;
        push("Morita classes = n-1".into(), classes.len() as u128, nu as u128 - 1);
        for (k, members) in &classes {
            let d = simple_dims[k.get() - 1];
            push(format!("class {k} size = dim D^lambda_{}", k.get() - 1), members.len() as u128, d);
        }
    }

    if let Some(alg) = engine {
        if alg.n() != n {
            return Err(Error::InvalidInput(format!("engine is for n = {}, not {n}", alg.n())));
        }
        let basis = alg.enumerate_basis()?;
        push("dim R_n".into(), basis.len() as u128, weighted);
        for k in 1..n {
            let rep = class_representative(n, MoritaClassId(k))?;
            let dim = basis.iter().filter(|b| *b.target() == rep).count() as u128;
            push(format!("dim R_n e(i_{k}) = C({n},{k})"), dim, binomial(nu, k as u64));
        }
    }

    Ok(BlockDimReport { n, specht_dims, simple_dims, projective_dims, identities: ids })
}
