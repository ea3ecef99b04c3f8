use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::BoundParams;
use crate::env::{Coupling, InitMode, Instance};
use crate::error::{Error, Result};
use crate::policies::{PolicyKind, PolicyParams};

pub const DEFAULT_HORIZON: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

/// Ids of the built-in settings, in table order.
pub const SETTING_IDS: [&str; 10] = ["1.a", "1.b", "1.c", "1.d", "1.e", "2.a", "2.b", "2.c", "2.d", "2.e"];

/// Replication-count presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 100 replications, for quick runs and CI.
    Desk,
    /// 1000 replications, for full-scale runs.
    Full,
}

impl Preset {
    pub fn replications(self) -> usize {
        match self {
            Preset::Desk => 100,
            Preset::Full => 1_000,
        }
    }
}

fn default_thr() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub setting_id: String,
    #[serde(rename = "mu")]
    pub instance: Instance,
    pub horizon: usize,
    pub replications: usize,
    pub seed: u64,
    pub policies: Vec<PolicyKind>,
    #[serde(default)]
    pub coupling: Coupling,
    #[serde(default)]
    pub init: InitMode,
    #[serde(default = "default_thr")]
    pub thr: f64,
    /// Record the regret curve at every slot instead of ~200 log-spaced ones.
    #[serde(default)]
    pub record_all_slots: bool,
    #[serde(default)]
    pub bounds: BoundParams,
}

impl ExperimentConfig {
    pub fn new(setting_id: impl Into<String>, instance: Instance) -> Self {
        Self {
            setting_id: setting_id.into(),
            instance,
            horizon: DEFAULT_HORIZON,
            replications: Preset::Full.replications(),
            seed: DEFAULT_SEED,
            policies: PolicyKind::LEARNERS.to_vec(),
            coupling: Coupling::default(),
            init: InitMode::default(),
            thr: default_thr(),
            record_all_slots: false,
            bounds: BoundParams::default(),
        }
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        self.replications = preset.replications();
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_policies(mut self, policies: impl Into<Vec<PolicyKind>>) -> Self {
        self.policies = policies.into();
        self
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    pub fn policy_params(&self) -> PolicyParams {
        PolicyParams { thr: self.thr, limit_override: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.replications < 1 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::InvalidConfig("policy roster is empty".into()));
        }
        for (i, p) in self.policies.iter().enumerate() {
            if self.policies[..i].contains(p) {
                return Err(Error::InvalidConfig(format!("policy `{p}` listed twice")));
            }
        }
        if !(self.thr >= 1.0) {
            return Err(Error::InvalidConfig(format!("thr = {} must be at least 1", self.thr)));
        }
        self.bounds.validate()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::InvalidConfig(format!("{}: {j}", path.display())),
            other => other,
        })
    }
}

/// `k` equally spaced points from `lo` to `hi`, both included.
pub fn equally_spaced(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (k - 1) as f64;
            // Snap away binary noise so 0.1 + 0.05 prints as 0.15.
            (x * 1e12).round() / 1e12
        })
        .collect()
}

/// One of the ten built-in settings, with the full-scale defaults
/// (T = 10000, 1000 replications, all eight learning policies).
pub fn builtin_setting(id: &str) -> Result<ExperimentConfig> {
    let (lo, hi, k) = match id {
        "1.a" => (0.1, 0.3, 5),
        "1.b" => (0.1, 0.4, 5),
        "1.c" => (0.1, 0.5, 5),
        "1.d" => (0.1, 0.6, 5),
        "1.e" => (0.1, 0.7, 5),
        "2.a" => (0.05, 0.9, 2),
        "2.b" => (0.05, 0.9, 4),
        "2.c" => (0.05, 0.9, 6),
        "2.d" => (0.05, 0.9, 8),
        "2.e" => (0.05, 0.9, 10),
        other => return Err(Error::UnknownSetting(other.to_string())),
    };
    let instance = Instance::new(equally_spaced(lo, hi, k))?;
    Ok(ExperimentConfig::new(id, instance))
}
