//! Monte-Carlo detection rates of an active eavesdropper.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::choice::{trial_seed, SeededChoices};
use crate::protocol::{random_message, run_with, RunConfig};

use super::{AnalysisError, Rate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRate {
    pub check: String,
    /// Runs in which the check was carried out.
    pub runs: u64,
    /// Checked units (decoys, check pairs) with a wrong result, over all
    /// checked units.
    pub per_unit: Rate,
    /// Runs in which this check failed, over the runs that reached it.
    pub failures: Rate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub config: RunConfig,
    pub trials: u64,
    pub checks: Vec<CheckRate>,
    pub aborts: Rate,
    /// Completed runs in which either side decoded a wrong message.
    pub wrong_decodes: u64,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    // check -> (runs, units, mismatches, failures)
    checks: BTreeMap<String, (u64, u64, u64, u64)>,
    aborts: u64,
    wrong_decodes: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, (r, u, m, f)) in other.checks {
            let e = self.checks.entry(k).or_default();
            e.0 += r;
            e.1 += u;
            e.2 += m;
            e.3 += f;
        }
        self.aborts += other.aborts;
        self.wrong_decodes += other.wrong_decodes;
        self
    }
}

fn one_trial(config: &RunConfig, trial: u64) -> Result<Tally, AnalysisError> {
    let mut config = config.clone();
    config.seed = trial_seed(config.seed, trial);
    let mut choices = SeededChoices::new(config.seed);
    let len = config.message_len();
    let alice = random_message(len, &mut choices);
    let bob = random_message(len, &mut choices);
    let run = run_with(&config, &alice, &bob, &mut choices)?;
    let mut tally = Tally::default();
    for c in &run.checks {
        tally.checks.insert(
            c.check.clone(),
            (1, c.units as u64, c.mismatches as u64, u64::from(!c.passed())),
        );
    }
    if run.is_completed() {
        if run.alice_decoded.as_ref() != Some(&bob) || run.bob_decoded.as_ref() != Some(&alice) {
            tally.wrong_decodes = 1;
        }
    } else {
        tally.aborts = 1;
    }
    Ok(tally)
}

/// Runs `trials` independent runs of `config`, each with its own seed
/// derived from `config.seed` and uniformly random messages.
pub fn detection_stats(config: &RunConfig, trials: u64) -> Result<DetectionReport, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::Invalid("trials must be at least 1".into()));
    }
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(config, t))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let checks = tally
        .checks
        .into_iter()
        .map(|(check, (runs, units, mismatches, failures))| CheckRate {
            check,
            runs,
            per_unit: Rate::new(mismatches, units),
            failures: Rate::new(failures, runs),
        })
        .collect();
    Ok(DetectionReport {
        config: config.clone(),
        trials,
        checks,
        aborts: Rate::new(tally.aborts, trials),
        wrong_decodes: tally.wrong_decodes,
    })
}

impl DetectionReport {
    pub fn check(&self, name: &str) -> Option<&CheckRate> {
        self.checks.iter().find(|c| c.check == name)
    }
}
