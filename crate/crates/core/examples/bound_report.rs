//! Closed-form regret bounds next to a quick Monte-Carlo estimate.

use aoi_lab::analytics::{BoundParams, bernoulli_kl, eval_bounds};
use aoi_lab::harness::{SETTING_IDS, builtin_setting, run_experiment};
use aoi_lab::policies::PolicyKind;

fn main() -> aoi_lab::Result<()> {
    println!("KL(0.1 || 0.3) = {:.6}", bernoulli_kl(0.1, 0.3));
    println!("{:<5} {:>10} {:>10} {:>10} {:>10}", "id", "lower", "ucb", "q-ucb", "ucb (MC)");
    for id in SETTING_IDS {
        let config = builtin_setting(id)?
            .with_horizon(5_000)
            .with_replications(20)
            .with_policies(vec![PolicyKind::Ucb]);
        let b = eval_bounds(&config.instance, config.horizon as u64, BoundParams::default(), None)?;
        let mc = run_experiment(&config)?.curves[0].final_mean();
        println!("{id:<5} {:>10.1} {:>10.0} {:>10.0} {:>10.1}", b.lower_bound, b.ucb_upper, b.q_ucb_upper, mc);
    }
    Ok(())
}
