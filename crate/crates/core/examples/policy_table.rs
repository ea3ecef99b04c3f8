//! Final regret for all ten settings in one table (the desk preset: 100
//! replications).
//!
//! cargo run --release --example policy_table > table.csv

use aoi_lab::harness::{Preset, SETTING_IDS, builtin_setting, final_regret_table};
use aoi_lab::policies::PolicyKind;

fn main() -> aoi_lab::Result<()> {
    let configs = SETTING_IDS
        .iter()
        .map(|id| Ok(builtin_setting(id)?.with_preset(Preset::Desk)))
        .collect::<aoi_lab::Result<Vec<_>>>()?;
    let table = final_regret_table(&configs, &PolicyKind::LEARNERS)?;

    eprint!("{:<6}", "");
    for p in &table.policies {
        eprint!("{:>10}", p.name());
    }
    eprintln!();
    for (id, row) in table.settings.iter().zip(&table.cells) {
        eprint!("{id:<6}");
        for cell in row {
            eprint!("{:>10.0}", cell.mean_regret);
        }
        eprintln!();
    }
    table.write_csv(std::io::stdout())
}
