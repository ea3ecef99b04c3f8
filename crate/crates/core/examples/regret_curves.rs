//! Monte-Carlo regret curves for every learner on one setting, written as
//! CSV plus a JSON manifest.
//!
//! cargo run --release --example regret_curves -- 2.c out

use std::path::PathBuf;

use aoi_lab::harness::{Preset, builtin_setting, run_experiment, write_outputs};

fn main() -> aoi_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let setting = args.next().unwrap_or_else(|| "2.c".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));

    let config = builtin_setting(&setting)?.with_preset(Preset::Desk);
    let result = run_experiment(&config)?;
    for curve in &result.curves {
        println!("{:>15}  {:>9.1} +/- {:.1}", curve.policy.name(), curve.final_mean(), curve.final_stderr());
    }
    let files = write_outputs(&result, &out, true)?;
    println!("wrote {} and {}", files.csv.display(), files.manifest.display());
    Ok(())
}
