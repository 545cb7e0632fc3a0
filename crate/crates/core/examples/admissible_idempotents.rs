//! Lists the residue sequences whose idempotent survives in `R_n`.
//!
//! ```bash
//! cargo run -p klr-core --example admissible_idempotents -- 5
//! ```

use klr_core::residue::{enumerate_admissible, first_violation};
use klr_core::ResidueSeq;

fn main() -> klr_core::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let adm = enumerate_admissible(n)?;
    println!("n = {n}: {} nonzero idempotents (2^(n-2) = {})", adm.len(), 1u64 << (n - 2));
    for i in &adm {
        println!("  e{i}  class {}", i.class());
    }
    let bad = ResidueSeq::new((0..n).rev().collect())?;
    match first_violation(&bad) {
        Some(pos) => println!("e{bad} vanishes: contiguity fails at position {pos}"),
        None => println!("e{bad} is admissible"),
    }
    Ok(())
}
