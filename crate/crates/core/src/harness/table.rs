use std::io::Write;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::runner::run_experiment;
use crate::error::{Error, Result};
use crate::policies::PolicyKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableCell {
    pub mean_regret: f64,
    pub stderr: f64,
    pub replications: usize,
}

/// Regret at the horizon, one row per setting and one column per policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTable {
    pub settings: Vec<String>,
    pub policies: Vec<PolicyKind>,
    pub cells: Vec<Vec<TableCell>>,
}

impl RegretTable {
    pub fn get(&self, setting: &str, policy: PolicyKind) -> Option<TableCell> {
        let s = self.settings.iter().position(|x| x == setting)?;
        let p = self.policies.iter().position(|&x| x == policy)?;
        Some(self.cells[s][p])
    }

    /// Long-format CSV: `setting,policy,mean_regret,stderr,replications`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            setting: &'a str,
            policy: &'a str,
            mean_regret: f64,
            stderr: f64,
            replications: usize,
        }
        let mut w = csv::Writer::from_writer(out);
        for (s, row) in self.settings.iter().zip(&self.cells) {
            for (p, cell) in self.policies.iter().zip(row) {
                w.serialize(Row {
                    setting: s,
                    policy: p.name(),
                    mean_regret: cell.mean_regret,
                    stderr: cell.stderr,
                    replications: cell.replications,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs each config with `policies` as its roster and tabulates regret at T.
pub fn final_regret_table(configs: &[ExperimentConfig], policies: &[PolicyKind]) -> Result<RegretTable> {
    if policies.is_empty() {
        return Err(Error::InvalidConfig("policy roster is empty".into()));
    }
    let mut cells = Vec::with_capacity(configs.len());
    for config in configs {
        let config = config.clone().with_policies(policies);
        let result = run_experiment(&config)?;
        cells.push(
            result
                .curves
                .iter()
                .map(|c| TableCell {
                    mean_regret: c.final_mean(),
                    stderr: c.final_stderr(),
                    replications: c.replications,
                })
                .collect(),
        );
    }
    Ok(RegretTable {
        settings: configs.iter().map(|c| c.setting_id.clone()).collect(),
        policies: policies.to_vec(),
        cells,
    })
}
