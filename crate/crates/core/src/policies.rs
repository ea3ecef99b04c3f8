//! Scheduling policies.
//!
//! Every policy follows the same loop: observe the current age, pick a
//! channel, then ingest the binary outcome of that channel only. The
//! per-policy `*_decide` functions are pure in the policy state; [`Policy`]
//! bundles a state with its rule and knobs for use by the simulator.
//!
//! Channels are zero-based. Every argmax breaks ties toward the lowest
//! index, and all logarithms are natural.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::env::{Instance, argmax};
use crate::error::{Error, Result};

/// Counts and successes per channel plus the slot counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyState {
    pulls: Vec<u64>,
    successes: Vec<u64>,
    /// Index of the next decision slot, starting at 1.
    t: u64,
}

impl PolicyState {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "need at least one channel");
        Self { pulls: vec![0; k], successes: vec![0; k], t: 1 }
    }

    /// Builds a state directly from per-channel counts; `t` is set to one
    /// past the number of recorded decisions.
    pub fn from_counts(pulls: Vec<u64>, successes: Vec<u64>) -> Self {
        assert_eq!(pulls.len(), successes.len());
        assert!(pulls.iter().zip(&successes).all(|(n, s)| s <= n));
        let t = pulls.iter().sum::<u64>() + 1;
        Self { pulls, successes, t }
    }

    /// Overrides the slot counter, for evaluating indices at a chosen `t`.
    pub fn with_slot(mut self, t: u64) -> Self {
        assert!(t >= 1);
        self.t = t;
        self
    }

    pub fn k(&self) -> usize {
        self.pulls.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn successes(&self) -> &[u64] {
        &self.successes
    }

    pub fn mu_hat(&self, k: usize) -> f64 {
        match self.pulls[k] {
            0 => 0.0,
            n => self.successes[k] as f64 / n as f64,
        }
    }

    /// Posterior Beta shape `successes + 1`.
    pub fn alpha(&self, k: usize) -> u64 {
        self.successes[k] + 1
    }

    /// Posterior Beta shape `failures + 1`.
    pub fn beta(&self, k: usize) -> u64 {
        self.pulls[k] - self.successes[k] + 1
    }

    pub fn decisions(&self) -> u64 {
        self.t - 1
    }

    /// Running-mean update of the chosen channel.
    pub fn update(&mut self, channel: usize, success: bool) {
        self.pulls[channel] += 1;
        self.successes[channel] += u64::from(success);
        self.t += 1;
    }

    /// Add-one smoothed success estimate `alpha / (alpha + beta)`.
    pub fn smoothed_estimate(&self, k: usize) -> f64 {
        self.alpha(k) as f64 / (self.alpha(k) + self.beta(k)) as f64
    }

    /// Channel the AA-TS and AA-UCB rules exploit: the argmax of the
    /// smoothed estimate, whose reciprocal is `limit(t)`. Raw `mu_hat` would
    /// score unsampled channels 0 and can pin the exploit branch on a bad
    /// channel that happened to succeed once.
    pub fn best_estimate(&self) -> usize {
        let est: Vec<f64> = (0..self.k()).map(|k| self.smoothed_estimate(k)).collect();
        argmax(&est)
    }

    fn in_round_robin(&self) -> bool {
        self.t <= self.k() as u64
    }
}

pub fn update(mut state: PolicyState, channel: usize, success: bool) -> PolicyState {
    state.update(channel, success);
    state
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    ForcedInit,
    Explore,
    Exploit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decision {
    pub channel: usize,
    pub branch: Branch,
}

impl Decision {
    fn new(channel: usize, branch: Branch) -> Self {
        Self { channel, branch }
    }
}

/// UCB index `mu_hat + sqrt(8 ln t / T_k)`; infinite for an unsampled channel.
pub fn ucb_index(state: &PolicyState, k: usize) -> f64 {
    ucb_value(state.mu_hat(k), state.pulls[k], (state.t as f64).ln())
}

fn ucb_value(mu_hat: f64, pulls: u64, log_t: f64) -> f64 {
    match pulls {
        0 => f64::INFINITY,
        n => mu_hat + (8.0 * log_t / n as f64).sqrt(),
    }
}

/// Q-UCB index `mu_hat + sqrt(ln^2 t / (2 T_k))`; infinite for an unsampled channel.
pub fn q_ucb_index(state: &PolicyState, k: usize) -> f64 {
    q_ucb_value(state.mu_hat(k), state.pulls[k], (state.t as f64).ln())
}

fn q_ucb_value(mu_hat: f64, pulls: u64, log_t: f64) -> f64 {
    match pulls {
        0 => f64::INFINITY,
        n => mu_hat + (log_t * log_t / (2.0 * n as f64)).sqrt(),
    }
}

/// Forced-exploration probability `min{1, 3K ln^2 t / t}` of the Q policies.
pub fn explore_probability(k: usize, t: u64) -> f64 {
    let log_t = (t as f64).ln();
    (3.0 * k as f64 * log_t * log_t / t as f64).min(1.0)
}

/// AoI threshold of the AA-TS and AA-UCB rules: `min_k (alpha_k + beta_k) / alpha_k`.
pub fn limit(state: &PolicyState) -> f64 {
    (0..state.k())
        .map(|k| (state.alpha(k) + state.beta(k)) as f64 / state.alpha(k) as f64)
        .fold(f64::INFINITY, f64::min)
}

fn index_argmax(state: &PolicyState, index: impl Fn(&PolicyState, usize) -> f64) -> usize {
    let values: Vec<f64> = (0..state.k()).map(|k| index(state, k)).collect();
    argmax(&values)
}

fn posterior_sample<R: Rng + ?Sized>(state: &PolicyState, rng: &mut R) -> usize {
    let samples: Vec<f64> = (0..state.k())
        .map(|k| {
            Beta::new(state.alpha(k) as f64, state.beta(k) as f64)
                .expect("shape parameters are at least 1")
                .sample(rng)
        })
        .collect();
    argmax(&samples)
}

/// One Bernoulli draw of the forced-exploration gate. Always consumes one
/// uniform so that variants sharing a stream stay aligned.
fn explore_gate<R: Rng + ?Sized>(state: &PolicyState, rng: &mut R) -> bool {
    let p = explore_probability(state.k(), state.t);
    rng.r#gen::<f64>() < p
}

fn uniform_channel<R: Rng + ?Sized>(state: &PolicyState, rng: &mut R) -> usize {
    rng.gen_range(0..state.k())
}

pub fn ucb_decide(state: &PolicyState, _current_age: u64) -> Decision {
    if state.in_round_robin() {
        return Decision::new(state.t as usize - 1, Branch::ForcedInit);
    }
    Decision::new(index_argmax(state, ucb_index), Branch::Exploit)
}

pub fn ts_decide<R: Rng + ?Sized>(state: &PolicyState, _current_age: u64, rng: &mut R) -> Decision {
    Decision::new(posterior_sample(state, rng), Branch::Exploit)
}

pub fn q_ucb_decide<R: Rng + ?Sized>(state: &PolicyState, _current_age: u64, rng: &mut R) -> Decision {
    if explore_gate(state, rng) {
        Decision::new(uniform_channel(state, rng), Branch::Explore)
    } else {
        Decision::new(index_argmax(state, q_ucb_index), Branch::Exploit)
    }
}

pub fn q_ts_decide<R: Rng + ?Sized>(state: &PolicyState, _current_age: u64, rng: &mut R) -> Decision {
    if explore_gate(state, rng) {
        Decision::new(uniform_channel(state, rng), Branch::Explore)
    } else {
        Decision::new(posterior_sample(state, rng), Branch::Exploit)
    }
}

pub fn aa_ts_decide<R: Rng + ?Sized>(state: &PolicyState, current_age: u64, rng: &mut R) -> Decision {
    aa_ts_decide_with_limit(state, current_age, limit(state), rng)
}

/// AA-TS against an explicit threshold; `f64::INFINITY` never exploits.
pub fn aa_ts_decide_with_limit<R: Rng + ?Sized>(
    state: &PolicyState,
    current_age: u64,
    limit: f64,
    rng: &mut R,
) -> Decision {
    if current_age as f64 > limit {
        Decision::new(state.best_estimate(), Branch::Exploit)
    } else {
        Decision::new(posterior_sample(state, rng), Branch::Explore)
    }
}

pub fn aa_ucb_decide(state: &PolicyState, current_age: u64) -> Decision {
    if state.in_round_robin() {
        return Decision::new(state.t as usize - 1, Branch::ForcedInit);
    }
    if current_age as f64 > limit(state) {
        Decision::new(state.best_estimate(), Branch::Exploit)
    } else {
        Decision::new(index_argmax(state, ucb_index), Branch::Explore)
    }
}

/// AA-Q-UCB. Round-robins over the channels first, then explores only when
/// the gate fires and `current_age < thr`.
pub fn aa_q_ucb_decide<R: Rng + ?Sized>(state: &PolicyState, current_age: u64, rng: &mut R, thr: f64) -> Decision {
    if state.in_round_robin() {
        return Decision::new(state.t as usize - 1, Branch::ForcedInit);
    }
    if explore_gate(state, rng) && (current_age as f64) < thr {
        Decision::new(uniform_channel(state, rng), Branch::Explore)
    } else {
        Decision::new(index_argmax(state, q_ucb_index), Branch::Exploit)
    }
}

pub fn aa_q_ts_decide<R: Rng + ?Sized>(state: &PolicyState, current_age: u64, rng: &mut R, thr: f64) -> Decision {
    if explore_gate(state, rng) && (current_age as f64) < thr {
        Decision::new(uniform_channel(state, rng), Branch::Explore)
    } else {
        Decision::new(posterior_sample(state, rng), Branch::Exploit)
    }
}

/// Registry of schedulers, including the two baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PolicyKind {
    Ucb,
    Ts,
    QUcb,
    QTs,
    AaUcb,
    AaTs,
    AaQUcb,
    AaQTs,
    Genie,
    UniformRandom,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 10] = [
        PolicyKind::Ucb,
        PolicyKind::Ts,
        PolicyKind::QUcb,
        PolicyKind::QTs,
        PolicyKind::AaUcb,
        PolicyKind::AaTs,
        PolicyKind::AaQUcb,
        PolicyKind::AaQTs,
        PolicyKind::Genie,
        PolicyKind::UniformRandom,
    ];

    /// The eight learning policies, without the baselines.
    pub const LEARNERS: [PolicyKind; 8] = [
        PolicyKind::Ucb,
        PolicyKind::Ts,
        PolicyKind::QUcb,
        PolicyKind::QTs,
        PolicyKind::AaUcb,
        PolicyKind::AaTs,
        PolicyKind::AaQUcb,
        PolicyKind::AaQTs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ucb => "ucb",
            PolicyKind::Ts => "ts",
            PolicyKind::QUcb => "q-ucb",
            PolicyKind::QTs => "q-ts",
            PolicyKind::AaUcb => "aa-ucb",
            PolicyKind::AaTs => "aa-ts",
            PolicyKind::AaQUcb => "aa-q-ucb",
            PolicyKind::AaQTs => "aa-q-ts",
            PolicyKind::Genie => "genie",
            PolicyKind::UniformRandom => "uniform-random",
        }
    }

    /// Stable small integer used to pick the policy's random stream.
    pub fn stream_tag(self) -> u64 {
        PolicyKind::ALL.iter().position(|&p| p == self).unwrap() as u64 + 1
    }

    /// The AoI-agnostic policy an AoI-aware one is built on.
    pub fn agnostic_counterpart(self) -> Option<PolicyKind> {
        match self {
            PolicyKind::AaUcb => Some(PolicyKind::Ucb),
            PolicyKind::AaTs => Some(PolicyKind::Ts),
            PolicyKind::AaQUcb => Some(PolicyKind::QUcb),
            PolicyKind::AaQTs => Some(PolicyKind::QTs),
            _ => None,
        }
    }

    pub fn parse_list(list: &str) -> Result<Vec<PolicyKind>> {
        list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPolicy(s.to_string()))
    }
}

impl TryFrom<String> for PolicyKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PolicyKind> for String {
    fn from(p: PolicyKind) -> Self {
        p.name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyParams {
    /// Age threshold of AA-Q-UCB and AA-Q-TS; exploration needs `age < thr`.
    pub thr: f64,
    /// Replaces AA-TS's computed `limit(t)` when set.
    pub limit_override: Option<f64>,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self { thr: 2.0, limit_override: None }
    }
}

/// A policy rule together with its learning state.
#[derive(Debug, Clone)]
pub struct Policy {
    kind: PolicyKind,
    state: PolicyState,
    params: PolicyParams,
    k_star: usize,
}

impl Policy {
    pub fn new(kind: PolicyKind, instance: &Instance, params: PolicyParams) -> Self {
        Self { kind, state: PolicyState::new(instance.k()), params, k_star: instance.k_star() }
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn state(&self) -> &PolicyState {
        &self.state
    }

    pub fn decide<R: Rng + ?Sized>(&self, current_age: u64, rng: &mut R) -> Decision {
        let s = &self.state;
        match self.kind {
            PolicyKind::Ucb => ucb_decide(s, current_age),
            PolicyKind::Ts => ts_decide(s, current_age, rng),
            PolicyKind::QUcb => q_ucb_decide(s, current_age, rng),
            PolicyKind::QTs => q_ts_decide(s, current_age, rng),
            PolicyKind::AaUcb => aa_ucb_decide(s, current_age),
            PolicyKind::AaTs => {
                let lim = self.params.limit_override.unwrap_or_else(|| limit(s));
                aa_ts_decide_with_limit(s, current_age, lim, rng)
            }
            PolicyKind::AaQUcb => aa_q_ucb_decide(s, current_age, rng, self.params.thr),
            PolicyKind::AaQTs => aa_q_ts_decide(s, current_age, rng, self.params.thr),
            PolicyKind::Genie => Decision::new(self.k_star, Branch::Exploit),
            PolicyKind::UniformRandom => Decision::new(uniform_channel(s, rng), Branch::Explore),
        }
    }

    pub fn update(&mut self, channel: usize, success: bool) {
        self.state.update(channel, success);
    }
}
