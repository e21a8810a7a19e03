//! Leakage audit, attack-detection statistics and efficiency accounting.

pub mod branches;
pub mod detection;
pub mod efficiency;
pub mod info;
pub mod leakage;

pub use branches::{w_branch_frequencies, BranchReport};
pub use detection::{detection_stats, CheckRate, DetectionReport};
pub use efficiency::{cabello_efficiency, render_table1, table1, table1_row, EfficiencyReport, RowSource, Table1Row};
pub use info::Joint;
pub use leakage::{audit, eve_entropy, leakage_report, leaky_control_report, LeakageReport, ViewLeakage};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choice::EnumerationLimit;
use crate::protocol::ProtocolError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationLimit),
    #[error("run aborted at {0}")]
    Aborted(String),
    #[error("public view was not produced by any enumerated run")]
    UnreachableView,
    #[error("invalid analysis input: {0}")]
    Invalid(String),
}

/// A binomial count with its observed rate and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub hits: u64,
    pub total: u64,
    pub rate: f64,
    pub sigma: f64,
}

impl Rate {
    pub fn new(hits: u64, total: u64) -> Self {
        let rate = if total == 0 { 0.0 } else { hits as f64 / total as f64 };
        Self {
            hits,
            total,
            rate,
            sigma: binomial_sigma(rate, total),
        }
    }

    /// Whether `expected` lies within `k` standard errors, where the standard
    /// error is taken at `expected` itself.
    pub fn within(&self, expected: f64, k: f64) -> bool {
        (self.rate - expected).abs() <= k * binomial_sigma(expected, self.total)
    }
}

pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}
