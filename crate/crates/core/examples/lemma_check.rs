//! Randomised check of the exchange inequalities on small schedules.
//!
//! cargo run --example lemma_check -- 2000

use aoi_lab::analytics::verify_lemmas;

fn main() -> aoi_lab::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    let report = verify_lemmas(10, 4, trials, 7)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if report.violations() > 0 {
        std::process::exit(2);
    }
    Ok(())
}
