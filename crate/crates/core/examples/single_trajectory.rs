//! Step one policy against the genie on shared channel draws and print the
//! first slots of the trajectory.
//!
//! cargo run --example single_trajectory -- aa-ts

use aoi_lab::env::{Coupling, InitMode, Instance, simulate};
use aoi_lab::policies::{Policy, PolicyKind, PolicyParams};
use aoi_lab::rng;

fn main() {
    let kind: PolicyKind = std::env::args().nth(1).as_deref().unwrap_or("aa-ts").parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(1);
    });
    let instance = Instance::new(vec![0.2, 0.5, 0.8]).unwrap();
    let mut policy = Policy::new(kind, &instance, PolicyParams::default());

    let traj = simulate(
        &instance,
        &mut policy,
        2_000,
        Coupling::Coupled,
        InitMode::Geometric,
        &mut rng::stream(5, 0, rng::ENV_TAG),
        &mut rng::stream(5, 0, kind.stream_tag()),
    );

    println!("slot  channel  aoi  genie  regret");
    for t in 0..20 {
        println!("{:>4}  {:>7}  {:>3}  {:>5}  {:>6}", t + 1, traj.chosen[t] + 1, traj.aoi[t], traj.genie_aoi[t], traj.cum_regret[t]);
    }
    println!("...");
    println!(
        "{kind}: regret {} after {} slots, {} sub-optimal pulls, {} dominance violations",
        traj.cum_regret.last().unwrap(),
        traj.horizon(),
        traj.suboptimal_pulls(&instance),
        traj.dominance_violations()
    );
    println!("pull counts {:?}", policy.state().pulls());
}
