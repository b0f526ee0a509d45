//! Run an acceptance suite: `cargo run --example verify_suite -- limits quick`.

use thinfrac::verify::{run_suite, Budget, Suite};

fn main() -> thinfrac::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("constants").parse()?;
    let budget: Budget = args.next().as_deref().unwrap_or("quick").parse()?;
    let report = run_suite(suite, budget, |r| println!("{}", r.summary_line()))?;
    println!("suite {suite} ({budget}): {}", if report.passed { "pass" } else { "fail" });
    Ok(())
}
