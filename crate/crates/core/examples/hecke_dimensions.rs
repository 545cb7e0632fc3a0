//! Specht, simple and projective dimensions for the hook block.
//!
//! ```bash
//! cargo run -p klr-core --example hecke_dimensions -- 8
//! ```

use klr_core::hecke::{hook_dim, verify_identities, Partition};

fn main() -> klr_core::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    for k in 0..n {
        let hook = Partition::hook(n, k)?;
        println!("dim S^{hook} = {}", hook_dim(&hook)?);
    }
    let report = verify_identities(n, None)?;
    println!("simple dims:     {:?}", report.simple_dims);
    println!("projective dims: {:?}", report.projective_dims);
    for id in &report.identities {
        println!("  [{}] {}", if id.pass { "ok" } else { "FAIL" }, id.name);
    }
    Ok(())
}
