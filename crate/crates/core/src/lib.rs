//! Age-of-information bandits: simulation, exact analysis and experiments.
//!
//! A source sends a fresh update every slot over one of K unreliable
//! channels; channel `k` delivers with unknown probability `mu_k`. The age
//! of information resets to 1 after a delivery and grows by one otherwise.
//! Schedulers learn which channel to use, and their AoI regret is measured
//! against a genie that always uses the best channel.
//!
//! - [`env`]: instances, channel draws, the age recurrence, trajectories.
//! - [`policies`]: UCB, Thompson sampling, their forced-exploration Q
//!   variants, the four AoI-aware variants, plus genie and uniform baselines.
//! - [`analytics`]: exact expected age for fixed schedules, the exchange
//!   constructions and their inequalities, regret bound evaluation.
//! - [`harness`]: built-in settings, Monte-Carlo runs with common random
//!   numbers, regret curves, tables, CSV and manifest output.
//! - [`cli`]: the `aoi-lab` command line.
//!
//! ```
//! use aoi_lab::harness::{builtin_setting, run_experiment};
//! use aoi_lab::policies::PolicyKind;
//!
//! let config = builtin_setting("1.a")
//!     .unwrap()
//!     .with_horizon(200)
//!     .with_replications(4)
//!     .with_policies([PolicyKind::Ts, PolicyKind::AaTs]);
//! let result = run_experiment(&config).unwrap();
//! assert!(result.curve(PolicyKind::AaTs).unwrap().final_mean() >= 0.0);
//! ```

pub mod analytics;
pub mod cli;
pub mod env;
pub mod error;
pub mod harness;
pub mod policies;
pub mod rng;

pub use env::{AoiState, Coupling, InitMode, Instance, Trajectory};
pub use error::{Error, Result};
pub use policies::{Decision, Policy, PolicyKind, PolicyParams, PolicyState};
