//! Builds the Brauer line quiver of the basic algebra and evaluates its
//! relations.
//!
//! ```bash
//! cargo run -p klr-core --example quiver_presentation
//! ```

use klr_core::quotient::quiver_presentation;
use klr_core::KlrAlgebra;

fn main() -> klr_core::Result<()> {
    let qp = quiver_presentation(&KlrAlgebra::new(5)?)?;
    println!("{}", qp.convention);
    for (arrow, value) in &qp.arrows {
        println!("  {arrow}: {} -> {} = {value}", arrow.source(), arrow.target());
    }
    for rel in &qp.relations {
        println!("  [{}] {}", if rel.holds { "ok" } else { "FAIL" }, rel.name);
    }
    for s in &qp.loop_signs {
        println!("  gamma_{t} beta_{t} = {:?} * loop (expected sign {})", s.computed, s.expected_sign, t = s.t);
    }
    for p in qp.junction() {
        let names: Vec<String> = p.path.iter().map(ToString::to_string).collect();
        println!("  {} = {}", names.join(" "), p.value);
    }
    Ok(())
}
