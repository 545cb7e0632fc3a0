//! Combinatorics of the cyclic quiver `A_{n-1}^{(1)}` and of residue sequences.
//!
//! Vertices are the residues `0..n`, with one arrow `r -> r+1 (mod n)` out of
//! every vertex. For `n = 2` this gives the two arrows `0 -> 1` and `1 -> 0`.
//! Strand positions are 1-indexed everywhere in the public API.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Residue = usize;

/// How the residues on two neighbouring strands are joined in the quiver,
/// read as (left strand, right strand).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connection {
    /// No arrow between the residues.
    None,
    /// Arrow from the left residue to the right one.
    Forward,
    /// Arrow from the right residue to the left one.
    Backward,
    /// Arrows in both directions (only for `n = 2`).
    Double,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
}

impl Quiver {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("quiver needs n >= 2, got {n}")));
        }
        Ok(Quiver { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arrow(&self, from: Residue, to: Residue) -> bool {
        from != to && to == (from + 1) % self.n
    }

    pub fn adjacent(&self, r: Residue, s: Residue) -> bool {
        self.has_arrow(r, s) || self.has_arrow(s, r)
    }

    pub fn connection(&self, left: Residue, right: Residue) -> Connection {
        match (self.has_arrow(left, right), self.has_arrow(right, left)) {
            (true, true) => Connection::Double,
            (true, false) => Connection::Forward,
            (false, true) => Connection::Backward,
            (false, false) => Connection::None,
        }
    }

    /// Symmetrised Cartan pairing `a_{rs}`.
    pub fn cartan(&self, r: Residue, s: Residue) -> i64 {
        if r == s {
            2
        } else {
            match self.connection(r, s) {
                Connection::Double => -2,
                Connection::Forward | Connection::Backward => -1,
                Connection::None => 0,
            }
        }
    }
}

/// A residue sequence `i = (i_1, ..., i_n)`: a permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ResidueSeq(Vec<Residue>);

impl ResidueSeq {
    pub fn new(entries: Vec<Residue>) -> Result<Self> {
        let n = entries.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!("residue sequence needs at least 2 entries, got {n}")));
        }
        let mut seen = vec![false; n];
        for (idx, &r) in entries.iter().enumerate() {
            if r >= n || seen[r] {
                return Err(Error::InvalidInput(format!(
                    "entries {entries:?} are not a permutation of 0..{n} (position {})",
                    idx + 1
                )));
            }
            seen[r] = true;
        }
        Ok(ResidueSeq(entries))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Residue] {
        &self.0
    }

    /// Entry `i_pos`, 1-indexed.
    pub fn get(&self, pos: usize) -> Residue {
        self.0[pos - 1]
    }

    pub fn last(&self) -> Residue {
        self.0[self.0.len() - 1]
    }

    /// 1-indexed position of residue `r`.
    pub fn position_of(&self, r: Residue) -> usize {
        self.0.iter().position(|&x| x == r).map(|p| p + 1).expect("residue sequences are permutations")
    }

    /// `s_k . i`: swap entries `k` and `k+1`.
    pub fn swapped(&self, k: usize) -> ResidueSeq {
        let mut v = self.0.clone();
        v.swap(k - 1, k);
        ResidueSeq(v)
    }

    /// The Morita class label `i_n`.
    pub fn class(&self) -> MoritaClassId {
        MoritaClassId(self.last())
    }
}

impl TryFrom<Vec<usize>> for ResidueSeq {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        ResidueSeq::new(v)
    }
}

impl From<ResidueSeq> for Vec<usize> {
    fn from(s: ResidueSeq) -> Vec<usize> {
        s.0
    }
}

impl fmt::Display for ResidueSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, r) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Class label `k = i_n` of an admissible sequence, `1 <= k <= n-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoritaClassId(pub usize);

impl MoritaClassId {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k < 1 || k > n - 1 {
            return Err(Error::InvalidParameter(format!(
                "Morita class {k} out of range 1..={} for n = {n}",
                n.saturating_sub(1)
            )));
        }
        Ok(MoritaClassId(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for MoritaClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// First 1-indexed position at which `i` fails the arc condition, if any.
///
/// `i_1` must be `0`; afterwards every entry up to `i_{n-1}` has to extend the
/// arc spanned by its predecessors at one of its two ends. The last entry is
/// the unique leftover residue and is never checked.
pub fn first_violation(i: &ResidueSeq) -> Option<usize> {
    let n = i.n();
    if i.get(1) != 0 {
        return Some(1);
    }
    // Arc is the clockwise interval lo..=hi.
    let (mut lo, mut hi) = (0usize, 0usize);
    for pos in 2..n {
        let r = i.get(pos);
        if r == (hi + 1) % n {
            hi = r;
        } else if r == (lo + n - 1) % n {
            lo = r;
        } else {
            return Some(pos);
        }
    }
    None
}

pub fn is_admissible(i: &ResidueSeq) -> bool {
    first_violation(i).is_none()
}

/// All admissible sequences for `n`, in lexicographic order.
pub fn enumerate_admissible(n: usize) -> Result<Vec<ResidueSeq>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    let mut out = Vec::with_capacity(1 << (n - 2));
    let mut prefix = vec![0usize];
    grow_arcs(n, &mut prefix, 0, 0, &mut out);
    out.sort();
    Ok(out)
}

fn grow_arcs(n: usize, prefix: &mut Vec<usize>, lo: usize, hi: usize, out: &mut Vec<ResidueSeq>) {
    if prefix.len() == n - 1 {
        let used: BTreeSet<usize> = prefix.iter().copied().collect();
        let rest = (0..n).find(|r| !used.contains(r)).expect("one residue left");
        let mut full = prefix.clone();
        full.push(rest);
        out.push(ResidueSeq(full));
        return;
    }
    let right = (hi + 1) % n;
    prefix.push(right);
    grow_arcs(n, prefix, lo, right, out);
    prefix.pop();
    let left = (lo + n - 1) % n;
    if left != right {
        prefix.push(left);
        grow_arcs(n, prefix, left, hi, out);
        prefix.pop();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `i -> (0, 1, i_2+1, ..., i_{n-1}+1)`
    Up,
    /// `i -> (0, i_3-1, ..., i_n-1)`
    Down,
}

/// The hat (`Up`) and bar (`Down`) bijections between admissible sequences of
/// `R_{n-1}` and admissible sequences of `R_n` with `i_2 = 1`.
pub fn level_shift(i: &ResidueSeq, direction: ShiftDirection) -> Result<ResidueSeq> {
    if let Some(pos) = first_violation(i) {
        return Err(Error::InvalidInput(format!("{i} is not admissible (fails at position {pos})")));
    }
    match direction {
        ShiftDirection::Up => Ok(hat_raw(i)),
        ShiftDirection::Down => {
            if i.n() < 3 || i.get(2) != 1 {
                return Err(Error::InvalidInput(format!("{i} does not have i_2 = 1 (fails at position 2)")));
            }
            let entries = std::iter::once(0).chain(i.entries()[2..].iter().map(|r| r - 1)).collect();
            Ok(ResidueSeq(entries))
        }
    }
}

/// Hat map on any sequence with `i_1 = 0`, admissible or not.
pub(crate) fn hat_raw(i: &ResidueSeq) -> ResidueSeq {
    debug_assert_eq!(i.get(1), 0);
    let entries = [0, 1].into_iter().chain(i.entries()[1..].iter().map(|r| r + 1)).collect();
    ResidueSeq(entries)
}

/// `(0, 1, ..., k-1, n-1, n-2, ..., k+1, k)`.
pub fn class_representative(n: usize, k: MoritaClassId) -> Result<ResidueSeq> {
    let k = MoritaClassId::new(n, k.0)?.0;
    let entries = (0..k).chain((k + 1..n).rev()).chain(std::iter::once(k)).collect();
    Ok(ResidueSeq(entries))
}

/// Positions `t` in `2..=n-2` whose residues `i_t`, `i_{t+1}` are not adjacent.
pub fn admissible_swaps(i: &ResidueSeq) -> Vec<usize> {
    let n = i.n();
    let quiver = Quiver { n };
    (2..n.saturating_sub(1)).filter(|&t| !quiver.adjacent(i.get(t), i.get(t + 1))).collect()
}

/// Admissible sequences grouped by last entry.
pub fn morita_partition(n: usize) -> Result<BTreeMap<MoritaClassId, Vec<ResidueSeq>>> {
    let mut classes: BTreeMap<MoritaClassId, Vec<ResidueSeq>> = BTreeMap::new();
    for i in enumerate_admissible(n)? {
        classes.entry(i.class()).or_default().push(i);
    }
    Ok(classes)
}

/// Whether `members` form one connected component under [`admissible_swaps`].
pub fn swap_connected(members: &[ResidueSeq]) -> bool {
    let Some(first) = members.first() else {
        return true;
    };
    let wanted: BTreeSet<&ResidueSeq> = members.iter().collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([first.clone()]);
    seen.insert(first.clone());
    while let Some(cur) = queue.pop_front() {
        for t in admissible_swaps(&cur) {
            let next = cur.swapped(t);
            if !wanted.contains(&next) {
                return false;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len() == wanted.len()
}
