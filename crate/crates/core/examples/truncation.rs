//! Checks that `R_{n-1}` is isomorphic to the corner `e R_n e`.
//!
//! ```bash
//! cargo run -p klr-core --example truncation
//! ```

use klr_core::cli::parse_element;
use klr_core::quotient::{truncation_map, verify_truncation_iso};
use klr_core::KlrAlgebra;

fn main() -> klr_core::Result<()> {
    let x = parse_element("e(0,1,2)*p2*y3", 3)?.to_element()?;
    println!("{x} maps to {}", truncation_map(&x)?);
    for n in 3..=5 {
        let r = verify_truncation_iso(&KlrAlgebra::new(n - 1)?, &KlrAlgebra::new(n)?)?;
        println!(
            "n = {n}: dim e R_n e = {} (expected {}), {} relations, {} products, passed {}",
            r.dim_target,
            r.expected_dim,
            r.relations_checked,
            r.products_checked,
            r.passed()
        );
    }
    Ok(())
}
