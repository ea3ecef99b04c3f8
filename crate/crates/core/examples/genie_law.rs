//! The genie's age is stationary: its mean equals 1 / mu* at every slot.
//!
//! cargo run --release --example genie_law

use aoi_lab::env::{Coupling, InitMode, run_genie};
use aoi_lab::harness::builtin_setting;
use aoi_lab::rng;

fn main() {
    let instance = builtin_setting("1.a").unwrap().instance;
    let (horizon, reps) = (10_000, 200);

    let mut total = 0u64;
    for r in 0..reps {
        let ages = run_genie(&instance, horizon, &mut rng::stream(1, r, 0), Coupling::Coupled, InitMode::Geometric);
        total += ages.iter().sum::<u64>();
    }
    let mean = total as f64 / (reps as f64 * horizon as f64);
    println!("mu = {:?}", instance.mu());
    println!("empirical genie mean AoI {mean:.4}, 1/mu* = {:.4}", 1.0 / instance.mu_star());
}
