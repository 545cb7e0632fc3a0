//! Enumerates the canonical basis and compares its size to `C(2(n-1), n-1)`.
//!
//! ```bash
//! cargo run -p klr-core --example basis_dimension
//! ```

use klr_core::{binomial, KlrAlgebra};

fn main() -> klr_core::Result<()> {
    for n in 2..=6 {
        let basis = KlrAlgebra::new(n)?.enumerate_basis()?;
        let expected = binomial(2 * (n as u64 - 1), n as u64 - 1);
        println!("dim R_{n} = {:>3}  (expected {expected})", basis.len());
    }
    println!("basis of R_3:");
    for b in KlrAlgebra::new(3)?.enumerate_basis()? {
        println!("  {b}  degree {}", b.degree());
    }
    Ok(())
}
