//! Exact expected age for a fixed channel schedule.
//!
//! Here `E[a(t)]` is the age at the end of slot `t`, after slot `t`'s
//! transmission: `P(a(t) > tau)` is the probability that the `tau` most
//! recent transmissions (slots `t, t-1, ..`) all failed. Slots before 1 use
//! the pre-history channel, which turns the infinite tail into a geometric
//! series with a closed form. The simulator's start-of-slot age for slot
//! `t + 1` has the same law as this quantity.

use serde::{Deserialize, Serialize};

use crate::env::Instance;
use crate::error::{Error, Result};

/// Channels used in slots `1..=T` plus the channel assumed for every slot `<= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSchedule {
    pub channels: Vec<usize>,
    pub pre_history: usize,
}

impl FixedSchedule {
    /// Schedule with the best channel as pre-history.
    pub fn new(channels: Vec<usize>, instance: &Instance) -> Self {
        Self { channels, pre_history: instance.k_star() }
    }

    pub fn with_pre_history(channels: Vec<usize>, pre_history: usize) -> Self {
        Self { channels, pre_history }
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Slots that do not use the best channel.
    pub fn suboptimal_slots(&self, instance: &Instance) -> usize {
        self.channels.iter().filter(|&&k| k != instance.k_star()).count()
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        for &k in self.channels.iter().chain(std::iter::once(&self.pre_history)) {
            instance.check_channel(k)?;
        }
        if instance.mu()[self.pre_history] <= 0.0 {
            return Err(Error::DivergentTail(self.pre_history));
        }
        Ok(())
    }
}

/// `E[a(t)]` for `1 <= t <= T`.
pub fn exact_expected_aoi(instance: &Instance, schedule: &FixedSchedule, t: usize) -> Result<f64> {
    schedule.validate(instance)?;
    if t == 0 || t > schedule.len() {
        return Err(Error::InvalidSlot { slot: t, len: schedule.len() });
    }
    Ok(expected_aoi_unchecked(instance.mu(), schedule, t))
}

fn expected_aoi_unchecked(mu: &[f64], schedule: &FixedSchedule, t: usize) -> f64 {
    let mut total = 1.0;
    let mut survive = 1.0;
    for slot in (1..=t).rev() {
        survive *= 1.0 - mu[schedule.channels[slot - 1]];
        total += survive;
    }
    let mu_pre = mu[schedule.pre_history];
    total + survive * (1.0 - mu_pre) / mu_pre
}

/// `sum_{t=1}^{T} E[a(t)]`; zero for an empty schedule.
pub fn exact_cumulative_aoi(instance: &Instance, schedule: &FixedSchedule) -> Result<f64> {
    schedule.validate(instance)?;
    Ok(cumulative_unchecked(instance.mu(), schedule))
}

// Linear-time recursion: E[a(t)] = 1 + (1 - mu_{k(t)}) E[a(t-1)], where the
// slot-0 value is the stationary mean 1/mu_pre of the pre-history channel.
fn cumulative_unchecked(mu: &[f64], schedule: &FixedSchedule) -> f64 {
    let mut prev = 1.0 / mu[schedule.pre_history];
    let mut sum = 0.0;
    for &k in &schedule.channels {
        prev = 1.0 + (1.0 - mu[k]) * prev;
        sum += prev;
    }
    sum
}

/// Replaces every sub-optimal slot with the worst channel.
pub fn worsen_suboptimal(schedule: &FixedSchedule, instance: &Instance) -> FixedSchedule {
    let k_star = instance.k_star();
    let Some(worst) = instance.worst_suboptimal() else {
        return schedule.clone();
    };
    FixedSchedule {
        channels: schedule.channels.iter().map(|&k| if k == k_star { k } else { worst }).collect(),
        pre_history: schedule.pre_history,
    }
}

/// Worst channel in the first `N` slots, best channel afterwards, where `N`
/// is the schedule's count of sub-optimal slots.
pub fn cluster_worst_first(schedule: &FixedSchedule, instance: &Instance) -> FixedSchedule {
    let k_star = instance.k_star();
    let Some(worst) = instance.worst_suboptimal() else {
        return schedule.clone();
    };
    let n = schedule.suboptimal_slots(instance);
    let mut channels = vec![worst; n];
    channels.resize(schedule.len(), k_star);
    FixedSchedule { channels, pre_history: schedule.pre_history }
}

/// Upper bound on cumulative expected age for a schedule with `n`
/// sub-optimal slots: `T/mu* + (1-mu*)/(mu* mu_min) + (1/mu_min - 1/mu*) n`.
pub fn cumulative_aoi_upper_bound(instance: &Instance, horizon: usize, n: usize) -> f64 {
    let (ms, mm) = (instance.mu_star(), instance.mu_min());
    horizon as f64 / ms + (1.0 - ms) / (ms * mm) + (1.0 / mm - 1.0 / ms) * n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(mu: &[f64]) -> Instance {
        Instance::new(mu.to_vec()).unwrap()
    }

    #[test]
    fn genie_schedule_is_stationary() {
        let i = inst(&[0.5]);
        let s = FixedSchedule::new(vec![0; 10], &i);
        for t in 1..=10 {
            assert!((exact_expected_aoi(&i, &s, t).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!((exact_cumulative_aoi(&i, &s).unwrap() - 20.0).abs() < 1e-12);

        let s = FixedSchedule::new(vec![0], &i);
        assert!((exact_expected_aoi(&i, &s, 1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_channel_hand_example() {
        let i = inst(&[0.8, 0.2]);
        let s = FixedSchedule::with_pre_history(vec![1, 0], 0);
        assert!((exact_expected_aoi(&i, &s, 2).unwrap() - 1.4).abs() < 1e-12);
    }

    #[test]
    fn empty_schedule_sums_to_zero() {
        let i = inst(&[0.3, 0.6]);
        assert_eq!(exact_cumulative_aoi(&i, &FixedSchedule::new(vec![], &i)).unwrap(), 0.0);
    }

    #[test]
    fn cumulative_matches_per_slot_sum() {
        let i = inst(&[0.9, 0.1, 0.45]);
        let s = FixedSchedule::with_pre_history(vec![0, 1, 2, 2, 0, 1, 1, 0], 2);
        let direct: f64 = (1..=s.len()).map(|t| exact_expected_aoi(&i, &s, t).unwrap()).sum();
        assert!((direct - exact_cumulative_aoi(&i, &s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_slots_and_channels() {
        let i = inst(&[0.5, 0.5]);
        let s = FixedSchedule::new(vec![0, 1], &i);
        assert!(matches!(exact_expected_aoi(&i, &s, 0), Err(Error::InvalidSlot { .. })));
        assert!(matches!(exact_expected_aoi(&i, &s, 3), Err(Error::InvalidSlot { .. })));
        let bad = FixedSchedule::new(vec![0, 2], &i);
        assert!(matches!(exact_cumulative_aoi(&i, &bad), Err(Error::InvalidChannel { .. })));
    }

    #[test]
    fn exchange_constructions() {
        let i = inst(&[0.9, 0.5, 0.1]);
        let s = FixedSchedule::new(vec![0, 1, 2], &i);
        let a = worsen_suboptimal(&s, &i);
        assert_eq!(a.channels, vec![0, 2, 2]);
        assert_eq!(a.suboptimal_slots(&i), s.suboptimal_slots(&i));
        assert_eq!(cluster_worst_first(&a, &i).channels, vec![2, 2, 0]);

        let opt = FixedSchedule::new(vec![0; 4], &i);
        assert_eq!(worsen_suboptimal(&opt, &i), opt);
        assert_eq!(cluster_worst_first(&opt, &i), opt);
    }
}
