//! Exact expected-age oracle, schedule exchange constructions and regret
//! bound evaluation. Everything here is deterministic.

mod bounds;
mod lemmas;
mod oracle;

pub use bounds::{
    BoundParams, BoundReport, bernoulli_kl, eval_bounds, linear_regret_bound, ucb_suboptimal_pulls_bound,
};
pub use lemmas::{LEMMA_TOLERANCE, LemmaReport, random_instance, random_schedule, verify_lemmas};
pub use oracle::{
    FixedSchedule, cluster_worst_first, cumulative_aoi_upper_bound, exact_cumulative_aoi, exact_expected_aoi,
    worsen_suboptimal,
};
