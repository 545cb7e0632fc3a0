//! Derives vanishing statements as step-by-step traces and replays them.
//!
//! ```bash
//! cargo run -p klr-core --example vanishing_traces
//! ```

use itertools::Itertools;
use klr_core::engine::{derive_dot_rules, derive_idempotent_vanishing, verified_facts, FactBook};
use klr_core::residue::is_admissible;
use klr_core::{Quiver, ResidueSeq};

fn main() -> klr_core::Result<()> {
    let n = 4;
    let quiver = Quiver::new(n)?;
    let trace = derive_idempotent_vanishing(&ResidueSeq::new(vec![0, 2, 1, 3])?)?;
    println!("claim: {}", trace.claim);
    for (k, step) in trace.steps.iter().enumerate() {
        println!("  step {k}: {} at {} in {} gives {}", step.rule, step.position, step.term, step.result);
    }

    let book = verified_facts(n)?;
    println!("{} facts established by {} replayed traces", book.len(), book.traces_replayed());

    let dots = derive_dot_rules(n)?;
    let longest = dots.iter().max_by_key(|t| t.len()).expect("nonempty");
    println!("{} dot traces, longest is {} with {} steps", dots.len(), longest.claim, longest.len());
    // Dot traces cite idempotent vanishing lemmas.
    if let Some(e) = dots.iter().find_map(|t| FactBook::default().admit(t, &quiver).err()) {
        println!("against an empty book: {e}");
    }
    let mut fresh = FactBook::default();
    for p in (0..n).permutations(n) {
        let i = ResidueSeq::new(p)?;
        if !is_admissible(&i) {
            fresh.admit(&derive_idempotent_vanishing(&i)?, &quiver)?;
        }
    }
    for t in &dots {
        fresh.admit(t, &quiver)?;
    }
    println!("after the idempotent lemmas every dot trace replays: {} facts", fresh.len());
    Ok(())
}
