//! CSV curves and the JSON run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha1::{Digest, Sha1};

use super::config::ExperimentConfig;
use super::runner::{ExperimentResult, PolicySummary};
use crate::analytics::{BoundReport, eval_bounds};
use crate::error::{Error, Result};

pub const CURVE_HEADER: &str = "policy,t,mean_regret,stderr,replications";

#[derive(Serialize)]
struct CurveRow<'a> {
    policy: &'a str,
    t: usize,
    mean_regret: f64,
    stderr: f64,
    replications: usize,
}

pub fn write_curves_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for curve in &result.curves {
        for (i, &t) in curve.times.iter().enumerate() {
            w.serialize(CurveRow {
                policy: curve.policy.name(),
                t,
                mean_regret: curve.mean_regret[i],
                stderr: curve.stderr[i],
                replications: curve.replications,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn curves_csv(result: &ExperimentResult) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_curves_csv(result, &mut buf)?;
    Ok(buf)
}

/// Git blob object id of `content`: SHA-1 over `"blob <len>\0" + content`.
pub fn git_blob_hash(content: &[u8]) -> String {
    let mut h = Sha1::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    pub git_blob_sha1: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    /// `T / mu*`, the genie's expected cumulative age.
    pub analytic_genie_cumulative_aoi: f64,
    pub empirical_genie_mean_aoi: f64,
    pub slots_simulated: u64,
    pub policies: Vec<PolicySummary>,
    pub final_regret: BTreeMap<String, [f64; 2]>,
    /// Regret bound implied by each policy's mean sub-optimal pull count.
    pub bound_from_counts: BTreeMap<String, f64>,
    pub bounds: Option<BoundReport>,
    pub bounds_error: Option<String>,
    pub outputs: Vec<OutputEntry>,
}

impl Manifest {
    pub fn build(result: &ExperimentResult, outputs: Vec<OutputEntry>) -> Self {
        let config = &result.config;
        let horizon = config.horizon as u64;
        let (bounds, bounds_error) = match eval_bounds(&config.instance, horizon, config.bounds, None) {
            Ok(b) => (Some(b), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let bound_from_counts = result
            .summaries
            .iter()
            .filter_map(|s| {
                eval_bounds(&config.instance, horizon, config.bounds, Some(s.mean_suboptimal_pulls))
                    .ok()
                    .and_then(|b| b.from_counts)
                    .map(|v| (s.policy.name().to_string(), v))
            })
            .collect();
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            seed: config.seed,
            analytic_genie_cumulative_aoi: config.horizon as f64 / config.instance.mu_star(),
            empirical_genie_mean_aoi: result.genie_mean_aoi,
            slots_simulated: result.slots_simulated,
            policies: result.summaries.clone(),
            final_regret: result
                .curves
                .iter()
                .map(|c| (c.policy.name().to_string(), [c.final_mean(), c.final_stderr()]))
                .collect(),
            bound_from_counts,
            bounds,
            bounds_error,
            outputs,
        }
    }
}

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

/// File stem for a setting id, keeping only portable characters.
pub fn file_stem(setting_id: &str) -> String {
    let stem: String = setting_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '_' })
        .collect();
    if stem.is_empty() { "experiment".into() } else { stem }
}

/// Writes `<stem>.csv` and `<stem>.manifest.json` under `dir`. Existing
/// files are left untouched unless `force` is set.
pub fn write_outputs(result: &ExperimentResult, dir: &Path, force: bool) -> Result<OutputFiles> {
    let stem = file_stem(&result.config.setting_id);
    let files = OutputFiles {
        csv: dir.join(format!("{stem}.csv")),
        manifest: dir.join(format!("{stem}.manifest.json")),
    };
    if !force {
        for p in [&files.csv, &files.manifest] {
            if p.exists() {
                return Err(Error::WouldOverwrite(p.display().to_string()));
            }
        }
    }
    fs::create_dir_all(dir)?;

    let csv_bytes = curves_csv(result)?;
    let manifest = Manifest::build(
        result,
        vec![OutputEntry { file: format!("{stem}.csv"), git_blob_sha1: git_blob_hash(&csv_bytes) }],
    );
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest)?;
    manifest_bytes.push(b'\n');

    fs::write(&files.csv, csv_bytes)?;
    fs::write(&files.manifest, manifest_bytes)?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn git_blob_hash_matches_git() {
        // `printf 'hello\n' | git hash-object --stdin`
        assert_eq!(git_blob_hash(b"hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
        assert_eq!(git_blob_hash(b""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    }

    #[test]
    fn stems_are_portable() {
        assert_eq!(file_stem("1.a"), "1.a");
        assert_eq!(file_stem("my run/2"), "my_run_2");
        assert_eq!(file_stem(""), "experiment");
    }
}
