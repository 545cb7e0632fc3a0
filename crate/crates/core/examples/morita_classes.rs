//! Splits the nonzero idempotents into Morita classes and checks the
//! connectors between them.
//!
//! ```bash
//! cargo run -p klr-core --example morita_classes
//! ```

use klr_core::quotient::projective_isomorphism_check;
use klr_core::residue::{class_representative, morita_partition};
use klr_core::KlrAlgebra;

fn main() -> klr_core::Result<()> {
    let n = 5;
    for (k, members) in morita_partition(n)? {
        let rep = class_representative(n, k)?;
        let list: Vec<String> = members.iter().map(ToString::to_string).collect();
        println!("class {k} (i_{k} = {rep}): {}", list.join(" "));
    }
    let report = projective_isomorphism_check(&KlrAlgebra::new(n)?)?;
    println!(
        "same-class inverse pairs: {}, neighbour pairs: {}, far pairs: {}, all good: {}",
        report.classes.iter().map(|c| c.inverse_pairs).sum::<usize>(),
        report.neighbour_pairs,
        report.far_pairs,
        report.passed()
    );
    Ok(())
}
