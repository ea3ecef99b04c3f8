use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::env::{Trajectory, run_genie, simulate};
use crate::error::Result;
use crate::policies::{Policy, PolicyKind};
use crate::rng;

/// Number of log-spaced points in a regret curve (the horizon is always added).
pub const CURVE_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretCurve {
    pub policy: PolicyKind,
    pub times: Vec<usize>,
    pub mean_regret: Vec<f64>,
    pub stderr: Vec<f64>,
    pub replications: usize,
}

impl RegretCurve {
    pub fn final_mean(&self) -> f64 {
        *self.mean_regret.last().expect("curves are never empty")
    }

    pub fn final_stderr(&self) -> f64 {
        *self.stderr.last().expect("curves are never empty")
    }

    /// Mean and standard error at slot `t`, if `t` was recorded.
    pub fn at(&self, t: usize) -> Option<(f64, f64)> {
        let i = self.times.binary_search(&t).ok()?;
        Some((self.mean_regret[i], self.stderr[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: PolicyKind,
    /// Mean age over all slots and replications.
    pub mean_aoi: f64,
    pub mean_suboptimal_pulls: f64,
    /// Slots where the policy's age was below the genie's (a negative regret
    /// increment), summed over replications.
    pub dominance_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub curves: Vec<RegretCurve>,
    pub summaries: Vec<PolicySummary>,
    pub genie_mean_aoi: f64,
    pub slots_simulated: u64,
}

impl ExperimentResult {
    pub fn curve(&self, policy: PolicyKind) -> Option<&RegretCurve> {
        self.curves.iter().find(|c| c.policy == policy)
    }

    pub fn summary(&self, policy: PolicyKind) -> Option<&PolicySummary> {
        self.summaries.iter().find(|s| s.policy == policy)
    }
}

/// `points` log-spaced slots in `1..=horizon` plus every power of ten and
/// `horizon` itself, sorted and deduplicated.
pub fn record_times(horizon: usize, points: usize) -> Vec<usize> {
    let mut times: Vec<usize> = if points <= 1 || horizon <= 1 {
        Vec::new()
    } else {
        let top = (horizon as f64).ln();
        (0..points)
            .map(|i| ((top * i as f64 / (points - 1) as f64).exp().round() as usize).clamp(1, horizon))
            .collect()
    };
    times.extend(std::iter::successors(Some(1usize), |&d| d.checked_mul(10)).take_while(|&d| d <= horizon));
    times.push(horizon);
    times.sort_unstable();
    times.dedup();
    times
}

struct PolicyRun {
    regret_at: Vec<f64>,
    aoi_sum: u64,
    suboptimal: usize,
    violations: usize,
}

struct Replication {
    genie_aoi_sum: u64,
    runs: Vec<PolicyRun>,
}

fn run_replication(config: &ExperimentConfig, replication: u64, times: &[usize]) -> Replication {
    let instance = &config.instance;
    let env_stream = || rng::stream(config.seed, replication, rng::ENV_TAG);
    let genie = run_genie(instance, config.horizon, &mut env_stream(), config.coupling, config.init);

    let runs = config
        .policies
        .iter()
        .map(|&kind| {
            let mut policy = Policy::new(kind, instance, config.policy_params());
            let traj: Trajectory = simulate(
                instance,
                &mut policy,
                config.horizon,
                config.coupling,
                config.init,
                &mut env_stream(),
                &mut rng::stream(config.seed, replication, kind.stream_tag()),
            );
            debug_assert_eq!(traj.genie_aoi, genie);
            PolicyRun {
                regret_at: times.iter().map(|&t| traj.cum_regret[t - 1]).collect(),
                aoi_sum: traj.aoi.iter().sum(),
                suboptimal: traj.suboptimal_pulls(instance),
                violations: traj.dominance_violations(),
            }
        })
        .collect();

    Replication { genie_aoi_sum: genie.iter().sum(), runs }
}

fn mean_and_stderr(values: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs every replication (in parallel on the current rayon pool) and
/// reduces them in replication order, so the result does not depend on
/// scheduling or thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let times = if config.record_all_slots {
        (1..=config.horizon).collect()
    } else {
        record_times(config.horizon, CURVE_POINTS)
    };

    let reps: Vec<Replication> = (0..config.replications as u64)
        .into_par_iter()
        .map(|r| run_replication(config, r, &times))
        .collect();

    let r = reps.len();
    let slots_per_policy = (config.horizon * r) as f64;
    let mut curves = Vec::with_capacity(config.policies.len());
    let mut summaries = Vec::with_capacity(config.policies.len());
    for (p, &policy) in config.policies.iter().enumerate() {
        let (mean_regret, stderr) = (0..times.len())
            .map(|i| mean_and_stderr(reps.iter().map(|rep| rep.runs[p].regret_at[i])))
            .unzip();
        curves.push(RegretCurve { policy, times: times.clone(), mean_regret, stderr, replications: r });
        summaries.push(PolicySummary {
            policy,
            mean_aoi: reps.iter().map(|rep| rep.runs[p].aoi_sum as f64).sum::<f64>() / slots_per_policy,
            mean_suboptimal_pulls: reps.iter().map(|rep| rep.runs[p].suboptimal as f64).sum::<f64>() / r as f64,
            dominance_violations: reps.iter().map(|rep| rep.runs[p].violations as u64).sum(),
        });
    }

    Ok(ExperimentResult {
        config: config.clone(),
        curves,
        summaries,
        genie_mean_aoi: reps.iter().map(|rep| rep.genie_aoi_sum as f64).sum::<f64>() / slots_per_policy,
        slots_simulated: (config.horizon * r * config.policies.len()) as u64,
    })
}
