//! The K-channel update system: channel draws, the age recurrence and the
//! genie baseline.
//!
//! Time convention: the age recorded for slot `t` is the age at the start
//! of slot `t`, i.e. the value a scheduler sees when deciding. The outcome
//! of slot `t`'s transmission determines the age recorded for slot `t + 1`.

use rand::Rng;
use rand_distr::{Distribution, Geometric, Open01};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::Policy;

/// Channel success probabilities and the quantities derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Instance {
    mu: Vec<f64>,
    k_star: usize,
    mu_min: f64,
}

impl Instance {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidInstance("at least one channel is required".into()));
        }
        if let Some((k, &m)) = mu.iter().enumerate().find(|&(_, &m)| !(m > 0.0 && m <= 1.0)) {
            return Err(Error::InvalidInstance(format!(
                "mu[{}] = {m} is outside (0, 1]",
                k + 1
            )));
        }
        let k_star = argmax(&mu);
        let mu_min = mu.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self { mu, k_star, mu_min })
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Zero-based index of the best channel (lowest index among ties).
    pub fn k_star(&self) -> usize {
        self.k_star
    }

    pub fn mu_star(&self) -> f64 {
        self.mu[self.k_star]
    }

    pub fn mu_min(&self) -> f64 {
        self.mu_min
    }

    /// `mu_star` minus the best of the remaining channels; `None` when K = 1.
    pub fn delta(&self) -> Option<f64> {
        self.mu
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != self.k_star)
            .map(|(_, &m)| m)
            .reduce(f64::max)
            .map(|second| self.mu_star() - second)
    }

    /// Zero-based index of the worst channel other than `k_star`.
    pub fn worst_suboptimal(&self) -> Option<usize> {
        self.mu
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != self.k_star)
            .fold(None, |best: Option<(usize, f64)>, (k, &m)| match best {
                Some((_, bm)) if bm <= m => best,
                _ => Some((k, m)),
            })
            .map(|(k, _)| k)
    }

    pub fn check_channel(&self, channel: usize) -> Result<()> {
        if channel < self.k() {
            Ok(())
        } else {
            Err(Error::InvalidChannel { channel, k: self.k() })
        }
    }
}

impl TryFrom<Vec<f64>> for Instance {
    type Error = Error;

    fn try_from(mu: Vec<f64>) -> Result<Self> {
        Instance::new(mu)
    }
}

impl From<Instance> for Vec<f64> {
    fn from(instance: Instance) -> Self {
        instance.mu
    }
}

/// Lowest index attaining the maximum.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// One shared uniform per slot; channel k succeeds iff `u <= mu_k`.
    #[default]
    Coupled,
    /// Independent Bernoulli outcome per channel.
    Independent,
}

impl std::str::FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coupled" => Ok(Coupling::Coupled),
            "independent" => Ok(Coupling::Independent),
            other => Err(Error::InvalidConfig(format!("unknown coupling mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    /// Initial age drawn from Geometric(mu_star) on {1, 2, ...}.
    #[default]
    Geometric,
    Unit,
}

impl std::str::FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" | "geometric_genie" => Ok(InitMode::Geometric),
            "unit" => Ok(InitMode::Unit),
            other => Err(Error::InvalidConfig(format!("unknown init mode `{other}`"))),
        }
    }
}

/// Slots since the last delivered update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AoiState {
    age: u64,
}

impl AoiState {
    pub fn new(age: u64) -> Self {
        assert!(age >= 1, "age must be at least 1");
        Self { age }
    }

    pub fn age(self) -> u64 {
        self.age
    }

    pub fn step(self, success: bool) -> Self {
        if success { Self { age: 1 } } else { Self { age: self.age + 1 } }
    }
}

pub fn step(state: AoiState, success: bool) -> AoiState {
    state.step(success)
}

/// Randomness realised in one slot, shared by every scheduler.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelDraw {
    Coupled { u: f64 },
    Independent { bits: Vec<bool> },
}

impl ChannelDraw {
    pub fn success(&self, instance: &Instance, channel: usize) -> bool {
        match self {
            ChannelDraw::Coupled { u } => *u <= instance.mu[channel],
            ChannelDraw::Independent { bits } => bits[channel],
        }
    }

    pub fn bits(&self, instance: &Instance) -> Vec<bool> {
        (0..instance.k()).map(|k| self.success(instance, k)).collect()
    }
}

pub fn draw_slot<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, coupling: Coupling) -> ChannelDraw {
    match coupling {
        Coupling::Coupled => ChannelDraw::Coupled { u: Open01.sample(rng) },
        Coupling::Independent => ChannelDraw::Independent {
            bits: instance.mu.iter().map(|&m| rng.gen_bool(m)).collect(),
        },
    }
}

pub fn init_age<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, mode: InitMode) -> AoiState {
    match mode {
        InitMode::Unit => AoiState::new(1),
        InitMode::Geometric => {
            // rand_distr's Geometric counts failures before the first success.
            let failures = Geometric::new(instance.mu_star())
                .expect("mu_star lies in (0, 1]")
                .sample(rng);
            AoiState::new(failures + 1)
        }
    }
}

/// Genie ages for `horizon` slots. Draws the initial age and then one
/// channel draw per slot from `rng`, exactly as [`simulate`] does, so the
/// two agree on a shared stream.
pub fn run_genie<R: Rng + ?Sized>(
    instance: &Instance,
    horizon: usize,
    rng: &mut R,
    coupling: Coupling,
    init: InitMode,
) -> Vec<u64> {
    let mut age = init_age(instance, rng, init);
    let k_star = instance.k_star();
    (0..horizon)
        .map(|_| {
            let recorded = age.age();
            let draw = draw_slot(instance, rng, coupling);
            age = age.step(draw.success(instance, k_star));
            recorded
        })
        .collect()
}

/// One replication of a single policy against the genie.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub chosen: Vec<usize>,
    pub aoi: Vec<u64>,
    pub genie_aoi: Vec<u64>,
    pub cum_regret: Vec<f64>,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.aoi.len()
    }

    /// Slots where the policy's age fell below the genie's.
    pub fn dominance_violations(&self) -> usize {
        self.aoi.iter().zip(&self.genie_aoi).filter(|(a, g)| a < g).count()
    }

    pub fn suboptimal_pulls(&self, instance: &Instance) -> usize {
        self.chosen.iter().filter(|&&k| k != instance.k_star()).count()
    }
}

/// Runs `policy` for `horizon` slots. `env_rng` supplies the initial age
/// and channel draws; `policy_rng` is consumed only by the policy.
pub fn simulate<E: Rng + ?Sized, P: Rng + ?Sized>(
    instance: &Instance,
    policy: &mut Policy,
    horizon: usize,
    coupling: Coupling,
    init: InitMode,
    env_rng: &mut E,
    policy_rng: &mut P,
) -> Trajectory {
    let start = init_age(instance, env_rng, init);
    let (mut age, mut genie) = (start, start);
    let k_star = instance.k_star();
    let mut traj = Trajectory {
        chosen: Vec::with_capacity(horizon),
        aoi: Vec::with_capacity(horizon),
        genie_aoi: Vec::with_capacity(horizon),
        cum_regret: Vec::with_capacity(horizon),
    };
    let mut regret = 0i64;
    for _ in 0..horizon {
        let decision = policy.decide(age.age(), policy_rng);
        let draw = draw_slot(instance, env_rng, coupling);
        let success = draw.success(instance, decision.channel);
        policy.update(decision.channel, success);

        regret += age.age() as i64 - genie.age() as i64;
        traj.chosen.push(decision.channel);
        traj.aoi.push(age.age());
        traj.genie_aoi.push(genie.age());
        traj.cum_regret.push(regret as f64);

        age = age.step(success);
        genie = genie.step(draw.success(instance, k_star));
    }
    traj
}
