//! Computes a structure-constant table, writes it to a cache file and loads it
//! back with validation.
//!
//! ```bash
//! cargo run -p klr-core --example structure_constant_cache
//! ```

use klr_core::cli::{read_cache, write_cache};
use klr_core::KlrAlgebra;

fn main() -> klr_core::Result<()> {
    let alg = KlrAlgebra::new(4)?;
    let table = alg.structure_constants()?;
    println!("n = 4: {} basis elements, {} nonzero products", table.len(), table.nonzero_products());
    let ring = table.verify_ring_axioms(1000, 0);
    println!("ring axioms ({} triples): {}", ring.triples_checked, ring.passed());

    let path = std::env::temp_dir().join("klr-example-n4.json");
    let file = write_cache(&table, &path)?;
    println!("wrote {} (digest {})", path.display(), file.digest());
    let loaded = read_cache(&path, &alg, 42)?;
    println!("reloaded and probed: identical = {}", loaded == table);
    std::fs::remove_file(&path)?;
    Ok(())
}
