//! Exact expected age of a fixed schedule, and what the exchange
//! constructions do to it.

use aoi_lab::analytics::{
    FixedSchedule, cluster_worst_first, cumulative_aoi_upper_bound, exact_cumulative_aoi, exact_expected_aoi,
    worsen_suboptimal,
};
use aoi_lab::env::Instance;

fn main() -> aoi_lab::Result<()> {
    let instance = Instance::new(vec![0.8, 0.2])?;
    // Channel 1 before slot 1, then channels 2 and 1 (zero-based here).
    let hand = FixedSchedule::with_pre_history(vec![1, 0], 0);
    println!("E[a(2)] for schedule (2, 1) = {}", exact_expected_aoi(&instance, &hand, 2)?);

    let instance = Instance::new(vec![0.9, 0.5, 0.3, 0.1])?;
    let schedule = FixedSchedule::new(vec![0, 1, 0, 2, 0, 0, 1, 0], &instance);
    let worsened = worsen_suboptimal(&schedule, &instance);
    let clustered = cluster_worst_first(&worsened, &instance);
    let n = schedule.suboptimal_slots(&instance);

    for (name, s) in [("original", &schedule), ("worsened", &worsened), ("clustered", &clustered)] {
        let per_slot: Vec<String> = (1..=s.len())
            .map(|t| format!("{:.3}", exact_expected_aoi(&instance, s, t).unwrap()))
            .collect();
        println!("{name:>10} {:?}  sum {:.4}", s.channels, exact_cumulative_aoi(&instance, s)?);
        println!("{:>10} {}", "", per_slot.join(" "));
    }
    println!("upper bound with {n} sub-optimal slots: {:.4}", cumulative_aoi_upper_bound(&instance, schedule.len(), n));
    Ok(())
}
