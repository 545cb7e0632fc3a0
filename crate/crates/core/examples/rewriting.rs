//! Parses expressions and rewrites them to canonical form.
//!
//! ```bash
//! cargo run -p klr-core --example rewriting
//! ```

use klr_core::cli::parse_element;
use klr_core::KlrAlgebra;

fn main() -> klr_core::Result<()> {
    let alg = KlrAlgebra::new(3)?;
    for text in ["y3*e(0,1,2)", "p2*e(0,1,2)*p2", "y1*e(0,1,2) + 2*e(0,2,1)", "e(1,0,2)", "(p2*e(0,1,2))*(p2*e(0,2,1))"]
    {
        let x = parse_element(text, 3)?.to_element()?;
        println!("{text:<32} -> {}", alg.rewrite(&x)?);
    }
    Ok(())
}
