//! Test-only oracles, independent of the library's evaluation paths.

#![allow(dead_code)]

use aoi_lab::Instance;
use aoi_lab::analytics::FixedSchedule;

/// `E[a(t)]` (end-of-slot age) by enumerating every success/failure pattern
/// of slots `1..=t`. With no success in those slots the age is `t` plus the
/// slot-0 age, whose mean under the pre-history channel is `1/mu_pre`.
pub fn enumerate_expected_aoi(instance: &Instance, schedule: &FixedSchedule, t: usize) -> f64 {
    let mu = instance.mu();
    let mut total = 0.0;
    for pattern in 0u32..(1 << t) {
        let mut prob = 1.0;
        let mut last_success = None;
        for slot in 1..=t {
            let p = mu[schedule.channels[slot - 1]];
            if pattern >> (slot - 1) & 1 == 1 {
                prob *= p;
                last_success = Some(slot);
            } else {
                prob *= 1.0 - p;
            }
        }
        let age = match last_success {
            Some(s) => (t - s + 1) as f64,
            None => t as f64 + 1.0 / mu[schedule.pre_history],
        };
        total += prob * age;
    }
    total
}

pub fn enumerate_cumulative_aoi(instance: &Instance, schedule: &FixedSchedule) -> f64 {
    (1..=schedule.len()).map(|t| enumerate_expected_aoi(instance, schedule, t)).sum()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn pooled_stderr(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}
