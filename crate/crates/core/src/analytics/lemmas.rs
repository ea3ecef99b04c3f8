//! Randomised check of the schedule-exchange inequalities.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::oracle::{
    FixedSchedule, cluster_worst_first, cumulative_aoi_upper_bound, exact_cumulative_aoi, worsen_suboptimal,
};
use crate::env::Instance;
use crate::error::Result;
use crate::rng;

/// Slack allowed for floating-point rounding in each comparison.
pub const LEMMA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub trials: usize,
    pub max_t: usize,
    pub max_k: usize,
    pub seed: u64,
    /// `sum E[a | K] <= sum E[a | K_A]` failures.
    pub worsen_violations: usize,
    /// `sum E[a | K_A] <= sum E[a | K_B]` failures.
    pub cluster_violations: usize,
    /// Failures of the cumulative-age upper bound in terms of `N(K)`.
    pub upper_bound_violations: usize,
    /// Smallest observed `rhs - lhs` over all three checks.
    pub min_slack: f64,
}

impl LemmaReport {
    pub fn violations(&self) -> usize {
        self.worsen_violations + self.cluster_violations + self.upper_bound_violations
    }
}

/// Random instance with `1..=max_k` channels, success probabilities in (0, 1].
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_k: usize) -> Instance {
    let k = rng.gen_range(1..=max_k.max(1));
    let mu = (0..k).map(|_| 1.0 - rng.r#gen::<f64>()).collect();
    Instance::new(mu).expect("probabilities drawn in (0, 1]")
}

/// Random schedule of length `1..=max_t` with best-channel pre-history.
pub fn random_schedule<R: Rng + ?Sized>(rng: &mut R, instance: &Instance, max_t: usize) -> FixedSchedule {
    let t = rng.gen_range(1..=max_t.max(1));
    let channels = (0..t).map(|_| rng.gen_range(0..instance.k())).collect();
    FixedSchedule::new(channels, instance)
}

pub fn verify_lemmas(max_t: usize, max_k: usize, trials: usize, seed: u64) -> Result<LemmaReport> {
    let mut rng = rng::seeded(seed);
    let mut report = LemmaReport {
        trials,
        max_t,
        max_k,
        seed,
        worsen_violations: 0,
        cluster_violations: 0,
        upper_bound_violations: 0,
        min_slack: f64::INFINITY,
    };
    for _ in 0..trials {
        let instance = random_instance(&mut rng, max_k);
        let schedule = random_schedule(&mut rng, &instance, max_t);
        let worsened = worsen_suboptimal(&schedule, &instance);
        let clustered = cluster_worst_first(&worsened, &instance);

        let base = exact_cumulative_aoi(&instance, &schedule)?;
        let a = exact_cumulative_aoi(&instance, &worsened)?;
        let b = exact_cumulative_aoi(&instance, &clustered)?;
        let bound = cumulative_aoi_upper_bound(&instance, schedule.len(), schedule.suboptimal_slots(&instance));

        for (lhs, rhs, counter) in [
            (base, a, &mut report.worsen_violations),
            (a, b, &mut report.cluster_violations),
            (base, bound, &mut report.upper_bound_violations),
        ] {
            report.min_slack = report.min_slack.min(rhs - lhs);
            if lhs > rhs + LEMMA_TOLERANCE {
                *counter += 1;
            }
        }
    }
    Ok(report)
}
