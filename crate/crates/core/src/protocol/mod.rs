//! The three dialogue protocols, each a sequential state machine driven by
//! a [`ChoiceSource`](crate::choice::ChoiceSource).

pub mod bell;
pub mod codes;
pub mod decoy;
pub mod ghz;
pub mod w;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::channel::{AdversaryModel, ChannelError, OutcomeRecord, RunStatus, Transcript};
use crate::choice::{ChoiceSource, SeededChoices, Stream};
use crate::qcore::{Basis, BasisState, QError, StateVector};

use bell::{BellRunParams, BellTrace, BellVariant};
use ghz::GhzTrace;
use w::{TwoBitRunParams, WTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Bell,
    W,
    Ghz,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [ProtocolKind::Bell, ProtocolKind::W, ProtocolKind::Ghz];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Bell => "bell",
            ProtocolKind::W => "w",
            ProtocolKind::Ghz => "ghz",
        }
    }

    /// Message length each party sends in a run with `n` message pairs
    /// (`n` is ignored by the single-state protocols).
    pub fn message_len(self, n: usize) -> usize {
        match self {
            ProtocolKind::Bell => 2 * n,
            ProtocolKind::W | ProtocolKind::Ghz => 2,
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown protocol {0:?} (expected bell, w or ghz)")]
pub struct UnknownProtocol(pub String);

impl FromStr for ProtocolKind {
    type Err = UnknownProtocol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownProtocol(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("{party} message must be {expected} bits, got {got}")]
    MalformedBits {
        party: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Quantum(#[from] QError),
}

pub(crate) fn check_len(party: &'static str, bits: &Bits, expected: usize) -> Result<(), ProtocolError> {
    if bits.len() != expected {
        return Err(ProtocolError::MalformedBits {
            party,
            expected,
            got: bits.len(),
        });
    }
    Ok(())
}

/// Cabello accounting of one run: secret bits delivered, qubits used and
/// classical bits announced, excluding check resources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyInputs {
    pub b_s: usize,
    pub q_t: usize,
    pub b_t: usize,
}

/// Per-check unit counts, for detection statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub check: String,
    pub units: usize,
    pub mismatches: usize,
}

impl CheckTally {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome<T> {
    pub status: RunStatus,
    /// What Alice decoded (Bob's message).
    pub alice_decoded: Option<Bits>,
    /// What Bob decoded (Alice's message).
    pub bob_decoded: Option<Bits>,
    pub transcript: Transcript,
    pub efficiency_inputs: EfficiencyInputs,
    pub checks: Vec<CheckTally>,
    /// Bases measured along the message path (checks excluded).
    pub message_bases: BTreeSet<Basis>,
    pub trace: T,
}

impl<T> RunOutcome<T> {
    pub fn is_completed(&self) -> bool {
        self.status.is_completed()
    }
}

pub(crate) fn seal(
    transcript: &mut Transcript,
    status: &RunStatus,
    alice_decoded: &Option<Bits>,
    bob_decoded: &Option<Bits>,
) -> Result<(), ProtocolError> {
    transcript.finish(OutcomeRecord {
        status: status.clone(),
        alice_decoded: alice_decoded.clone(),
        bob_decoded: bob_decoded.clone(),
    })?;
    Ok(())
}

/// The Z/X eigenstate a single-qubit state equals up to phase, if any.
pub fn identify_eigenstate(state: &StateVector) -> Option<BasisState> {
    let label = *state.labels().first()?;
    if state.num_qubits() != 1 {
        return None;
    }
    BasisState::ALL.into_iter().find(|s| {
        crate::qcore::prepare_basis_state(*s, label)
            .equal_up_to_global_phase(state)
            .unwrap_or(false)
    })
}

impl<T> RunOutcome<T> {
    pub fn map_trace<U>(self, f: impl FnOnce(T) -> U) -> RunOutcome<U> {
        RunOutcome {
            status: self.status,
            alice_decoded: self.alice_decoded,
            bob_decoded: self.bob_decoded,
            transcript: self.transcript,
            efficiency_inputs: self.efficiency_inputs,
            checks: self.checks,
            message_bases: self.message_bases,
            trace: f(self.trace),
        }
    }
}

/// One configuration covering all three protocols. `n`, `delta1` and
/// `delta2` only apply to the Bell protocol; for W and GHZ `delta3` is the
/// number of decoys in each quantum send.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub protocol: ProtocolKind,
    pub n: usize,
    pub delta1: usize,
    pub delta2: usize,
    pub delta3: usize,
    pub seed: u64,
    pub adversary: AdversaryModel,
    #[serde(default)]
    pub bell_variant: BellVariant,
}

impl RunConfig {
    pub fn new(protocol: ProtocolKind, seed: u64) -> Self {
        Self {
            protocol,
            n: 1,
            delta1: 0,
            delta2: 0,
            delta3: 0,
            seed,
            adversary: AdversaryModel::none(),
            bell_variant: BellVariant::Standard,
        }
    }

    pub fn message_len(&self) -> usize {
        self.protocol.message_len(self.n)
    }

    pub fn bell_params(&self) -> BellRunParams {
        BellRunParams::new(self.n, self.seed)
            .with_checks(self.delta1, self.delta2, self.delta3)
            .with_adversary(self.adversary)
            .with_variant(self.bell_variant)
    }

    pub fn two_bit_params(&self) -> TwoBitRunParams {
        TwoBitRunParams::new(self.seed)
            .with_adversary(self.adversary)
            .with_decoys(self.delta3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Trace {
    Bell(BellTrace),
    W(WTrace),
    Ghz(GhzTrace),
}

pub type AnyRunOutcome = RunOutcome<Trace>;

pub fn run_with(
    config: &RunConfig,
    alice_bits: &Bits,
    bob_bits: &Bits,
    choices: &mut dyn ChoiceSource,
) -> Result<AnyRunOutcome, ProtocolError> {
    Ok(match config.protocol {
        ProtocolKind::Bell => {
            bell::run_bell_with(alice_bits, bob_bits, &config.bell_params(), choices)?.map_trace(Trace::Bell)
        }
        ProtocolKind::W => w::run_w_with(alice_bits, bob_bits, &config.two_bit_params(), choices)?.map_trace(Trace::W),
        ProtocolKind::Ghz => {
            ghz::run_ghz_with(alice_bits, bob_bits, &config.two_bit_params(), choices)?.map_trace(Trace::Ghz)
        }
    })
}

pub fn run(config: &RunConfig, alice_bits: &Bits, bob_bits: &Bits) -> Result<AnyRunOutcome, ProtocolError> {
    run_with(config, alice_bits, bob_bits, &mut SeededChoices::new(config.seed))
}

/// Uniform random message of `len` bits from the message stream.
pub fn random_message(len: usize, choices: &mut dyn ChoiceSource) -> Bits {
    (0..len).map(|_| choices.uniform(Stream::Message, 2) == 1).collect()
}
