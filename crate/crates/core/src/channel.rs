//! Quantum channel with eavesdropper interposition, and the public classical
//! channel. Everything either party says lands in a [`Transcript`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::choice::{ChoiceSource, Stream, StreamChooser};
use crate::qcore::{prepare_basis_state, Basis, ParticleLabel, QError, Register};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    /// Zero-based positions within a sequence.
    Positions(Vec<usize>),
    /// Basis names or measurement results, one per position.
    Symbols(Vec<String>),
    Text(String),
}

impl Payload {
    pub fn symbols<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        Payload::Symbols(items.into_iter().map(|s| s.to_string()).collect())
    }
}

/// One public event. Send events carry only metadata, never labels or
/// amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    QuantumSend {
        sequence: String,
        direction: Direction,
        qubits: usize,
    },
    ClassicalAnnounce {
        party: Party,
        topic: String,
        payload: Payload,
    },
    CheckResult {
        check: String,
        passed: bool,
    },
    Abort {
        reason: String,
    },
}

/// Eve's private record of one intercepted qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveAction {
    pub sequence: String,
    pub qubit: String,
    pub basis: Basis,
    pub outcome: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    #[default]
    None,
    InterceptResend,
    MeasureResend,
    /// Listens to the classical channel only.
    Passive,
}

impl AdversaryKind {
    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::None => "none",
            AdversaryKind::InterceptResend => "intercept-resend",
            AdversaryKind::MeasureResend => "measure-resend",
            AdversaryKind::Passive => "passive",
        }
    }

    pub fn touches_qubits(self) -> bool {
        matches!(self, AdversaryKind::InterceptResend | AdversaryKind::MeasureResend)
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown adversary {0:?} (expected none, intercept-resend, measure-resend or passive)")]
pub struct UnknownAdversary(pub String);

impl FromStr for AdversaryKind {
    type Err = UnknownAdversary;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            AdversaryKind::None,
            AdversaryKind::InterceptResend,
            AdversaryKind::MeasureResend,
            AdversaryKind::Passive,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| UnknownAdversary(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisPolicy {
    /// Z or X with probability 1/2 each, independently per qubit.
    #[default]
    UniformZx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AdversaryModel {
    pub kind: AdversaryKind,
    pub basis_policy: BasisPolicy,
}

impl AdversaryModel {
    pub fn new(kind: AdversaryKind) -> Self {
        Self {
            kind,
            basis_policy: BasisPolicy::UniformZx,
        }
    }

    pub fn none() -> Self {
        Self::new(AdversaryKind::None)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("run was aborted; no further traffic is allowed")]
    Aborted,
    #[error("transcript is sealed")]
    Sealed,
    #[error(transparent)]
    Quantum(#[from] QError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Aborted { check: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

/// Final record of a run, stored with (but outside) the public view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    #[serde(flatten)]
    pub status: RunStatus,
    pub alice_decoded: Option<Bits>,
    pub bob_decoded: Option<Bits>,
}

/// What Eve sees: public parameters plus every public event, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PublicView {
    pub protocol: String,
    pub params: serde_json::Value,
    pub events: Vec<Event>,
}

impl PublicView {
    /// Canonical string form, used to group runs by what Eve observed.
    pub fn fingerprint(&self) -> String {
        serde_json::to_string(self).expect("public view serializes")
    }

    pub fn announcements<'a>(&'a self, topic: &'a str) -> impl Iterator<Item = (Party, &'a Payload)> + 'a {
        self.events.iter().filter_map(move |e| match e {
            Event::ClassicalAnnounce {
                party,
                topic: t,
                payload,
            } if t == topic => Some((*party, payload)),
            _ => None,
        })
    }
}

/// Append-only record of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    protocol: String,
    seed: u64,
    params: serde_json::Value,
    events: Vec<Event>,
    /// Eve's actions; never part of the public view.
    audit: Vec<EveAction>,
    outcome: Option<OutcomeRecord>,
}

impl Transcript {
    pub fn new(protocol: &str, seed: u64, params: serde_json::Value) -> Self {
        Self {
            protocol: protocol.to_string(),
            seed,
            params,
            events: Vec::new(),
            audit: Vec::new(),
            outcome: None,
        }
    }

    pub fn protocol(&self) -> &str {
        &self.protocol
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn audit(&self) -> &[EveAction] {
        &self.audit
    }

    pub fn outcome(&self) -> Option<&OutcomeRecord> {
        self.outcome.as_ref()
    }

    pub fn is_sealed(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn is_aborted(&self) -> bool {
        self.events.iter().any(|e| matches!(e, Event::Abort { .. }))
    }

    fn writable(&self) -> Result<(), ChannelError> {
        if self.is_sealed() {
            Err(ChannelError::Sealed)
        } else if self.is_aborted() {
            Err(ChannelError::Aborted)
        } else {
            Ok(())
        }
    }

    fn push(&mut self, event: Event) -> Result<(), ChannelError> {
        self.writable()?;
        self.events.push(event);
        Ok(())
    }

    pub fn announce(&mut self, party: Party, topic: &str, payload: Payload) -> Result<(), ChannelError> {
        self.push(Event::ClassicalAnnounce {
            party,
            topic: topic.to_string(),
            payload,
        })
    }

    pub fn record_check(&mut self, check: &str, passed: bool) -> Result<(), ChannelError> {
        self.push(Event::CheckResult {
            check: check.to_string(),
            passed,
        })
    }

    pub fn abort(&mut self, reason: &str) -> Result<(), ChannelError> {
        self.push(Event::Abort {
            reason: reason.to_string(),
        })
    }

    /// Seals the transcript; no event may be added afterwards.
    pub fn finish(&mut self, outcome: OutcomeRecord) -> Result<(), ChannelError> {
        if self.is_sealed() {
            return Err(ChannelError::Sealed);
        }
        self.outcome = Some(outcome);
        Ok(())
    }

    pub fn public_view(&self) -> PublicView {
        PublicView {
            protocol: self.protocol.clone(),
            params: self.params.clone(),
            events: self.events.clone(),
        }
    }

    /// Pretty-printed JSON with sorted keys.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's Value map is a BTreeMap, so a round trip sorts every object
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

/// Block-transmits `qubits` through the channel as one send event. An
/// intercepting adversary measures each qubit in transit in a basis drawn
/// from its policy and forwards a fresh qubit in the observed eigenstate.
pub fn send_quantum(
    register: &mut Register,
    qubits: &[ParticleLabel],
    sequence: &str,
    direction: Direction,
    adversary: &AdversaryModel,
    choices: &mut dyn ChoiceSource,
    transcript: &mut Transcript,
) -> Result<(), ChannelError> {
    if let Some(missing) = qubits.iter().find(|q| !register.contains(q)) {
        return Err(QError::UnknownLabel(*missing).into());
    }
    transcript.push(Event::QuantumSend {
        sequence: sequence.to_string(),
        direction,
        qubits: qubits.len(),
    })?;
    if !adversary.kind.touches_qubits() {
        return Ok(());
    }
    for &label in qubits {
        let basis = match adversary.basis_policy {
            BasisPolicy::UniformZx => [Basis::Z, Basis::X][choices.uniform(Stream::Adversary, 2)],
        };
        let outcome = register.measure(&[label], basis, &mut StreamChooser::new(choices, Stream::Adversary))?;
        let seen = outcome.basis_state().expect("single-qubit basis");
        register.insert(prepare_basis_state(seen, label))?;
        transcript.audit.push(EveAction {
            sequence: sequence.to_string(),
            qubit: label.to_string(),
            basis,
            outcome: seen.symbol().to_string(),
        });
    }
    Ok(())
}
