//! What a passive eavesdropper learns from the public record, by exact
//! enumeration over both messages and every random choice of a run.

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::channel::{AdversaryKind, AdversaryModel, Payload, PublicView, RunStatus};
use crate::choice::enumerate;
use crate::protocol::bell::BellVariant;
use crate::protocol::{run_with, AnyRunOutcome, ProtocolKind, RunConfig};

use super::info::{entropy, Joint, SUPPORT_EPSILON};
use super::AnalysisError;

/// Upper bound on enumerated leaves per message pair.
pub const ENUMERATION_LIMIT: usize = 1 << 16;

/// One enumerated run: its probability under uniform messages and the
/// protocol's own randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub probability: f64,
    pub alice: Bits,
    pub bob: Bits,
    pub view: PublicView,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub protocol: String,
    /// What one announcement unit is for this protocol.
    pub unit: String,
    /// Smallest `H(unit secrets | unit announcement)` over units, in bits.
    pub unit_entropy_bits: f64,
    /// Smallest number of unit secret assignments consistent with one unit
    /// announcement.
    pub consistent_assignments: usize,
    /// `H(alice, bob)` of the whole run.
    pub secret_entropy_bits: f64,
    /// `H(alice, bob | public view)`.
    pub conditional_entropy_bits: f64,
    /// `I(alice, bob; public view)`.
    pub mutual_information_bits: f64,
    pub enumerated_runs: usize,
}

/// Posterior uncertainty about both messages given one full public view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewLeakage {
    pub entropy_bits: f64,
    pub consistent_assignments: usize,
}

/// The configuration every audit uses: one message unit, no checks and a
/// passive eavesdropper.
pub fn audit_config(protocol: ProtocolKind) -> RunConfig {
    let mut config = RunConfig::new(protocol, 0);
    config.adversary = AdversaryModel::new(AdversaryKind::Passive);
    config
}

/// Every run of `config` under uniform messages, with exact probabilities.
pub fn enumerate_runs(config: &RunConfig) -> Result<Vec<Sample>, AnalysisError> {
    let len = config.message_len();
    let pairs = (1u64 << (2 * len)) as f64;
    let mut out = Vec::new();
    for alice in Bits::all(len) {
        for bob in Bits::all(len) {
            let leaves = enumerate(|choices| run_with(config, &alice, &bob, choices), ENUMERATION_LIMIT)?;
            for (p, result) in leaves {
                out.push(Sample {
                    probability: p / pairs,
                    alice: alice.clone(),
                    bob: bob.clone(),
                    view: completed_view(&result?)?,
                });
            }
        }
    }
    Ok(out)
}

fn completed_view(run: &AnyRunOutcome) -> Result<PublicView, AnalysisError> {
    match run.transcript.outcome().map(|o| &o.status) {
        Some(RunStatus::Aborted { check }) => Err(AnalysisError::Aborted(check.clone())),
        _ => Ok(run.transcript.public_view()),
    }
}

fn symbols<'a>(view: &'a PublicView, topic: &'a str) -> Vec<&'a str> {
    view.announcements(topic)
        .flat_map(|(_, payload)| match payload {
            Payload::Symbols(s) => s.iter().map(String::as_str).collect(),
            Payload::Text(t) => vec![t.as_str()],
            Payload::Positions(_) => Vec::new(),
        })
        .collect()
}

type UnitJoint = Joint<(Bits, Bits), Vec<String>>;

/// Per-unit joint distributions: for the Bell protocol one per position of
/// sequence C (secret = both parties' bits at that position, view = every
/// announcement about that position); for W and GHZ the single
/// Bell-measurement announcement against both two-bit messages.
fn unit_joints(protocol: ProtocolKind, samples: &[Sample]) -> (String, Vec<UnitJoint>) {
    match protocol {
        ProtocolKind::Bell => {
            let units = samples.first().map_or(0, |s| s.alice.len());
            let mut joints = vec![Joint::new(); units];
            for s in samples {
                let results = symbols(&s.view, "results");
                let record = symbols(&s.view, "position_record");
                let initial = symbols(&s.view, "initial_states");
                for (n, joint) in joints.iter_mut().enumerate() {
                    let secret = (Bits::new(vec![s.alice.get(n)]), Bits::new(vec![s.bob.get(n)]));
                    let mut view = vec![results[n].to_string(), record[n].to_string()];
                    view.extend(initial.get(n).map(|x| x.to_string()));
                    joint.add(s.probability, secret, view);
                }
            }
            ("announced particle".to_string(), joints)
        }
        ProtocolKind::W | ProtocolKind::Ghz => {
            let mut joint = Joint::new();
            for s in samples {
                let view = symbols(&s.view, "bell_result").iter().map(|x| x.to_string()).collect();
                joint.add(s.probability, (s.alice.clone(), s.bob.clone()), view);
            }
            ("announced Bell result".to_string(), vec![joint])
        }
    }
}

fn whole_run_joint(samples: &[Sample]) -> Joint<(Bits, Bits), String> {
    let mut joint = Joint::new();
    for s in samples {
        joint.add(s.probability, (s.alice.clone(), s.bob.clone()), s.view.fingerprint());
    }
    joint
}

/// Leakage report for an arbitrary configuration.
pub fn audit(config: &RunConfig) -> Result<LeakageReport, AnalysisError> {
    let samples = enumerate_runs(config)?;
    let (unit, units) = unit_joints(config.protocol, &samples);
    let whole = whole_run_joint(&samples);
    let name = match (config.protocol, config.bell_variant) {
        (ProtocolKind::Bell, BellVariant::AnnounceInitialStates) => "bell-leaky-control".to_string(),
        (p, _) => p.name().to_string(),
    };
    Ok(LeakageReport {
        protocol: name,
        unit,
        unit_entropy_bits: units
            .iter()
            .map(Joint::conditional_entropy)
            .fold(f64::INFINITY, f64::min),
        consistent_assignments: units.iter().map(Joint::min_support).min().unwrap_or(0),
        secret_entropy_bits: whole.secret_entropy(),
        conditional_entropy_bits: whole.conditional_entropy(),
        mutual_information_bits: whole.mutual_information(),
        enumerated_runs: samples.len(),
    })
}

pub fn leakage_report(protocol: ProtocolKind) -> Result<LeakageReport, AnalysisError> {
    audit(&audit_config(protocol))
}

/// The Bell protocol with Alice also publishing the post-CNOT states: a
/// control case the audit must flag.
pub fn leaky_control_report() -> Result<LeakageReport, AnalysisError> {
    let mut config = audit_config(ProtocolKind::Bell);
    config.bell_variant = BellVariant::AnnounceInitialStates;
    audit(&config)
}

/// Eve's remaining uncertainty about both messages after seeing `view`,
/// which must come from a run of `config`.
pub fn eve_entropy(config: &RunConfig, view: &PublicView) -> Result<ViewLeakage, AnalysisError> {
    let samples = enumerate_runs(config)?;
    let joint = whole_run_joint(&samples);
    let posterior = joint
        .posterior(&view.fingerprint())
        .ok_or(AnalysisError::UnreachableView)?;
    Ok(ViewLeakage {
        consistent_assignments: posterior.values().filter(|&&p| p > SUPPORT_EPSILON).count(),
        entropy_bits: entropy(posterior.into_values()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probabilities_sum_to_one() {
        for p in ProtocolKind::ALL {
            let samples = enumerate_runs(&audit_config(p)).unwrap();
            let total: f64 = samples.iter().map(|s| s.probability).sum();
            assert!((total - 1.0).abs() < 1e-12, "{p}: {total}");
        }
    }

    #[test]
    fn aborted_runs_are_rejected() {
        let mut config = audit_config(ProtocolKind::W);
        config.adversary = AdversaryModel::new(AdversaryKind::InterceptResend);
        config.delta3 = 4;
        let aborted = (0..64)
            .map(|seed| {
                config.seed = seed;
                crate::protocol::run(&config, &Bits::from_value(1, 2), &Bits::from_value(2, 2)).unwrap()
            })
            .find(|r| !r.is_completed())
            .expect("some run aborts");
        assert!(matches!(completed_view(&aborted), Err(AnalysisError::Aborted(_))));
    }
}
