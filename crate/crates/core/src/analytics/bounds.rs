//! Numeric evaluation of the regret bounds.
//!
//! The Q-policy bounds carry an `O(K/T^2)` term and the TS bound is only
//! known up to its order `O(K log T)`. Both are evaluated with a unit
//! constant and flagged as such in the report; treat them as overlays
//! rather than pass/fail oracles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::env::Instance;
use crate::error::{Error, Result};

/// Constants the bounds leave open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Consistency exponent, in (0, 1).
    pub alpha: f64,
    /// Consistency constant `C(mu)`, positive.
    pub c: f64,
    /// Horizon after which the Q-policy bounds apply, at least 1.
    pub t0: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self { alpha: 0.5, c: 1.0, t0: 1.0 }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidBoundParams(format!("alpha = {} is outside (0, 1)", self.alpha)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidBoundParams(format!("C = {} must be positive", self.c)));
        }
        if !(self.t0 >= 1.0 && self.t0.is_finite()) {
            return Err(Error::InvalidBoundParams(format!("t0 = {} must be at least 1", self.t0)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub horizon: u64,
    /// Lower bound for any consistent policy.
    pub lower_bound: f64,
    pub ucb_upper: f64,
    /// Additive term plus `(1/mu_min - 1/mu*) K log T`; the true constant is unknown.
    pub ts_upper_shape: f64,
    pub q_ucb_upper: f64,
    pub q_ts_upper: f64,
    /// The `K/T^2 / mu_min` part of the Q bounds, unit constant assumed.
    pub q_heuristic_term: f64,
    /// `(1 - mu*)/(mu* mu_min) + (1/mu_min - 1/mu*) E[N]` when counts are supplied.
    pub from_counts: Option<f64>,
    pub d_mu: f64,
    pub kl_min_mid: f64,
    pub c_q: f64,
    pub constants_used: BoundParams,
}

/// Bernoulli KL divergence `KL(p, q)` with the `0 log 0 = 0` convention.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    fn term(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    }
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// `(1/mu_min - 1/mu*) T`, valid at every horizon.
pub fn linear_regret_bound(instance: &Instance, horizon: u64) -> f64 {
    (1.0 / instance.mu_min() - 1.0 / instance.mu_star()) * horizon as f64
}

fn additive_term(instance: &Instance) -> f64 {
    let (ms, mm) = (instance.mu_star(), instance.mu_min());
    (1.0 - ms) / (ms * mm)
}

/// Expected sub-optimal pulls of UCB: `(K-1)(32 ln T / delta^2 + 1 + pi^2/3)`.
pub fn ucb_suboptimal_pulls_bound(k: usize, horizon: u64, delta: f64) -> f64 {
    (k as f64 - 1.0) * (32.0 * (horizon as f64).ln() / (delta * delta) + 1.0 + PI * PI / 3.0)
}

pub fn eval_bounds(
    instance: &Instance,
    horizon: u64,
    params: BoundParams,
    counts: Option<f64>,
) -> Result<BoundReport> {
    params.validate()?;
    let delta = instance.delta().ok_or(Error::ZeroGap)?;
    if delta <= 0.0 {
        return Err(Error::ZeroGap);
    }
    let k = instance.k();
    let kf = k as f64;
    let (ms, mm) = (instance.mu_star(), instance.mu_min());
    let log_t = (horizon.max(1) as f64).ln();
    let gap_cost = 1.0 / mm - 1.0 / ms;
    let linear = linear_regret_bound(instance, horizon);

    let mid = (ms + 1.0) / 2.0;
    let kl = bernoulli_kl(mm, mid);
    if !kl.is_finite() || kl <= 0.0 {
        return Err(Error::NonFiniteKl { p: mm, q: mid });
    }
    let d_mu = delta / kl;
    let lower_bound =
        (kf - 1.0) * d_mu / ms * ((1.0 - params.alpha) * log_t - (4.0 * kf * params.c).ln());

    let (ucb_upper, ts_upper_shape) = if horizon > k as u64 {
        (
            additive_term(instance) + gap_cost * ucb_suboptimal_pulls_bound(k, horizon, delta),
            additive_term(instance) + gap_cost * kf * log_t,
        )
    } else {
        (linear, linear)
    };

    // -1 / ln(1 - mu*) tends to 0 as mu* -> 1.
    let c_q = if ms < 1.0 { -1.0 / (1.0 - ms).ln() } else { 0.0 };
    let t = horizon as f64;
    let q_heuristic_term = if horizon > 0 { kf / (t * t) / mm } else { 0.0 };
    let q_upper = if t > params.t0 {
        (c_q * log_t + 1.0 + c_q * kf * log_t.powi(4)) / mm + q_heuristic_term
    } else {
        linear
    };

    Ok(BoundReport {
        horizon,
        lower_bound,
        ucb_upper,
        ts_upper_shape,
        q_ucb_upper: q_upper,
        q_ts_upper: q_upper,
        q_heuristic_term,
        from_counts: counts.map(|n| additive_term(instance) + gap_cost * n),
        d_mu,
        kl_min_mid: kl,
        c_q,
        constants_used: params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(mu: &[f64]) -> Instance {
        Instance::new(mu.to_vec()).unwrap()
    }

    #[test]
    fn kl_of_identical_is_zero() {
        for p in [0.0, 0.1, 0.5, 0.93, 1.0] {
            assert_eq!(bernoulli_kl(p, p), 0.0);
        }
        assert!(bernoulli_kl(0.3, 0.0).is_infinite());
        assert!(bernoulli_kl(0.3, 1.0).is_infinite());
    }

    #[test]
    fn linear_branch_example() {
        let i = inst(&[0.2, 0.5]);
        let r = eval_bounds(&i, 1, BoundParams::default(), None).unwrap();
        assert!((r.ucb_upper - 3.0).abs() < 1e-12);
        assert!((r.ts_upper_shape - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ucb_bound_closed_form() {
        let i = inst(&[0.1, 0.15, 0.2, 0.25, 0.3]);
        let t = 10_000u64;
        let r = eval_bounds(&i, t, BoundParams::default(), Some(10.0)).unwrap();
        let delta: f64 = 0.05;
        let expect = 0.7 / (0.3 * 0.1)
            + (10.0 - 1.0 / 0.3) * 4.0 * (32.0 * (t as f64).ln() / (delta * delta) + 1.0 + PI * PI / 3.0);
        assert!(((r.ucb_upper - expect) / expect).abs() < 1e-9);
        let fc = 0.7 / 0.03 + (10.0 - 1.0 / 0.3) * 10.0;
        assert!((r.from_counts.unwrap() - fc).abs() < 1e-9);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(eval_bounds(&inst(&[0.5, 0.5]), 100, BoundParams::default(), None), Err(Error::ZeroGap)));
        assert!(matches!(eval_bounds(&inst(&[0.5]), 100, BoundParams::default(), None), Err(Error::ZeroGap)));
        assert!(matches!(
            eval_bounds(&inst(&[0.5, 1.0]), 100, BoundParams::default(), None),
            Err(Error::NonFiniteKl { .. })
        ));
        let bad = BoundParams { alpha: 1.0, ..Default::default() };
        assert!(eval_bounds(&inst(&[0.2, 0.5]), 100, bad, None).is_err());
    }

    #[test]
    fn q_bounds_switch_at_t0() {
        let i = inst(&[0.2, 0.5]);
        let p = BoundParams { t0: 500.0, ..Default::default() };
        let early = eval_bounds(&i, 400, p, None).unwrap();
        assert!((early.q_ucb_upper - linear_regret_bound(&i, 400)).abs() < 1e-12);
        let late = eval_bounds(&i, 1_000, p, None).unwrap();
        let c = -1.0 / 0.5f64.ln();
        let l = 1_000f64.ln();
        let expect = (c * l + 1.0 + c * 2.0 * l.powi(4) + 2.0 / 1e6) / 0.2;
        assert!(((late.q_ts_upper - expect) / expect).abs() < 1e-12);
    }
}
