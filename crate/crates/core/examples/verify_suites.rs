//! Runs the verification suites and prints a summary per suite.
//!
//! ```bash
//! cargo run -p klr-core --example verify_suites -- 5
//! ```

use klr_core::verify::{run_suite, Suite, VerifyOptions};

fn main() -> klr_core::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let opts = VerifyOptions { samples: 10_000, seed: 1 };
    for suite in [Suite::Engine, Suite::Quiver, Suite::Reptheory] {
        let report = run_suite(n, suite, opts)?;
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        println!("{suite:<9} {} checks, failures: {failed:?}", report.checks.len());
    }
    Ok(())
}
