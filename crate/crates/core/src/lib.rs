//! Computational workbench for the level-one cyclotomic KLR algebras `R_n`
//! attached to the cyclic quiver with `n` vertices and the multiplicity-free
//! weight `alpha = sum_i alpha_i`.
//!
//! The crate is organised bottom-up:
//!
//! * [`residue`]: residue sequences with their admissibility predicate,
//!   Morita classes and level-shift maps.
//! * [`engine`]: generator words, rewriting to the canonical basis and
//!   replayable vanishing derivations.
//! * [`quotient`]: projective isomorphisms, the Brauer line quiver
//!   presentation and the truncation `R_{n-1} -> e R_n e`.
//! * [`hecke`]: hook-length and Grothendieck-group bookkeeping on the Hecke
//!   algebra side.
//! * [`verify`]: aggregated verification suites.
//! * [`cli`]: the expression parser, the structure-constant cache and the
//!   `klr` command dispatcher.

pub mod cli;
pub mod engine;
pub mod error;
pub mod hecke;
pub mod quotient;
pub mod residue;
pub mod verify;

pub use engine::{AlgebraElement, Coeff, Generator, KlrAlgebra, NormalWord, Word};
pub use error::{Error, Result};
pub use residue::{MoritaClassId, Quiver, ResidueSeq};

/// Binomial coefficient as `u128`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for step in 0..k {
        acc = acc * (n - step) as u128 / (step + 1) as u128;
    }
    acc
}
