//! Branch frequencies of the Z measurement of `a` in the W protocol, with
//! and without the exchange transformation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::choice::{trial_seed, SeededChoices};
use crate::protocol::w::run_w_with;
use crate::protocol::{random_message, ProtocolKind, RunConfig};

use super::{AnalysisError, Rate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub trials: u64,
    pub seed: u64,
    /// Fraction of runs without the exchange in which `a` read `|0⟩`.
    pub without_exchange: Rate,
    /// Same, for runs with the exchange applied.
    pub with_exchange: Rate,
}

pub fn w_branch_frequencies(trials: u64, seed: u64) -> Result<BranchReport, AnalysisError> {
    let params = RunConfig::new(ProtocolKind::W, seed).two_bit_params();
    // (plain runs, plain zeros, exchanged runs, exchanged zeros)
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<[u64; 4], AnalysisError> {
            let mut params = params;
            params.seed = trial_seed(seed, t);
            let mut choices = SeededChoices::new(params.seed);
            let alice = random_message(2, &mut choices);
            let bob = random_message(2, &mut choices);
            let run = run_w_with(&alice, &bob, &params, &mut choices)?;
            let zero = u64::from(run.trace.a_outcome == Some(false));
            Ok(if run.trace.exchange_applied {
                [0, 0, 1, zero]
            } else {
                [1, zero, 0, 0]
            })
        })
        .try_reduce(
            || [0; 4],
            |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]),
        )?;
    Ok(BranchReport {
        trials,
        seed,
        without_exchange: Rate::new(counts[1], counts[0]),
        with_exchange: Rate::new(counts[3], counts[2]),
    })
}
