//! W-state dialogue: one W state carries a two-bit message each way.
//!
//! Bob optionally applies the exchange transformation to `(a, b)`, Z-measures
//! `a` and, knowing which Bell state `(b, c)` collapsed into, toggles it with
//! `U_11` if needed so it spells his two bits under [`BellBitCode`]. Alice
//! applies her Pauli to `b`, Bell-measures `(b, c)` and announces the result.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::channel::{send_quantum, AdversaryModel, Direction, Party, Payload, RunStatus, Transcript};
use crate::choice::{ChoiceSource, SeededChoices, Stream, StreamChooser};
use crate::qcore::{prepare_w, Basis, BellState, Gate, ParticleLabel, Register, Role};

use super::codes::{pauli_between, BellBitCode, PauliBitCode};
use super::decoy::{decoy_check, insert_decoys};
use super::{check_len, seal, CheckTally, EfficiencyInputs, ProtocolError, RunOutcome};

/// Parameters shared by the two single-state protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBitRunParams {
    pub seed: u64,
    pub adversary: AdversaryModel,
    /// Decoys hidden in every quantum send; `0` runs the bare protocol.
    pub decoys_per_send: usize,
}

impl TwoBitRunParams {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            adversary: AdversaryModel::none(),
            decoys_per_send: 0,
        }
    }

    pub fn with_adversary(mut self, adversary: AdversaryModel) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn with_decoys(mut self, decoys_per_send: usize) -> Self {
        self.decoys_per_send = decoys_per_send;
        self
    }

    pub(crate) fn public_json(&self) -> serde_json::Value {
        serde_json::json!({
            "adversary": self.adversary,
            "decoys_per_send": self.decoys_per_send,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct WTrace {
    pub exchange_applied: bool,
    /// Z outcome of particle `a`.
    pub a_outcome: Option<bool>,
    /// `(b, c)` right after the measurement of `a`.
    pub collapsed: Option<BellState>,
    pub bob_toggled: bool,
    pub encoded: Option<BellState>,
    pub announced: Option<BellState>,
}

pub type WRunOutcome = RunOutcome<WTrace>;

/// `(b, c)` state after measuring `a` in Z, per branch.
pub fn collapsed_pair(exchange_applied: bool, a_outcome: bool) -> BellState {
    match (exchange_applied, a_outcome) {
        (false, false) => BellState::PsiPlus,
        (false, true) => BellState::PhiMinus,
        (true, false) => BellState::PsiMinus,
        (true, true) => BellState::PhiPlus,
    }
}

/// Bob's encoding decision. Bits `0x` use the exchange transformation,
/// bits `1x` do not; after the `a` measurement he applies `U_11` to `b`
/// exactly when the collapsed state does not already spell his bits.
pub fn bob_plan(bob_bits: (bool, bool)) -> bool {
    !bob_bits.0
}

pub fn bob_toggle(bob_bits: (bool, bool), collapsed: BellState) -> bool {
    BellBitCode::decode(collapsed) != bob_bits
}

/// Bob's side of the decode: Alice's Pauli is the one taking his encoded
/// state to the announced one.
pub fn decode_w_bob(encoded: BellState, announced: BellState) -> Bits {
    let gate = pauli_between(encoded, announced);
    let (x, y) = PauliBitCode::decode(gate).expect("single-qubit Pauli");
    Bits::new(vec![x, y])
}

/// Alice's side: undo her own Pauli on the announced state and read Bob's
/// bits from the Bell code.
pub fn decode_w_alice(own: Gate, announced: BellState) -> Result<Bits, ProtocolError> {
    if PauliBitCode::decode(own).is_none() {
        return Err(ProtocolError::Integrity(format!(
            "{} is not an encoding operation",
            own.name()
        )));
    }
    // Paulis are self-inverse on Bell labels
    let encoded = announced.with_pauli(own);
    let (x, y) = BellBitCode::decode(encoded);
    Ok(Bits::new(vec![x, y]))
}

fn labels() -> [ParticleLabel; 3] {
    [Role::A, Role::B, Role::C].map(|r| ParticleLabel::message(0, r))
}

pub(crate) struct TwoBitSession<'c> {
    pub params: TwoBitRunParams,
    pub register: Register,
    pub transcript: Transcript,
    pub choices: &'c mut dyn ChoiceSource,
    pub checks: Vec<CheckTally>,
    next_decoy: u32,
}

impl<'c> TwoBitSession<'c> {
    pub fn new(protocol: &str, params: &TwoBitRunParams, choices: &'c mut dyn ChoiceSource) -> Self {
        Self {
            params: *params,
            register: Register::new(),
            transcript: Transcript::new(protocol, params.seed, params.public_json()),
            choices,
            checks: Vec::new(),
            next_decoy: 0,
        }
    }

    /// Sends `payload` (with decoys if enabled) and runs the decoy check.
    /// Returns the failed check id, if any.
    pub fn send(
        &mut self,
        payload: &[ParticleLabel],
        sequence: &str,
        direction: Direction,
    ) -> Result<Option<String>, ProtocolError> {
        let k = self.params.decoys_per_send;
        let batch = insert_decoys(payload, k, self.next_decoy, &mut self.register, self.choices)?;
        self.next_decoy += k as u32;
        send_quantum(
            &mut self.register,
            &batch.sequence,
            sequence,
            direction,
            &self.params.adversary,
            self.choices,
            &mut self.transcript,
        )?;
        let (sender, receiver) = match direction {
            Direction::AliceToBob => (Party::Alice, Party::Bob),
            Direction::BobToAlice => (Party::Bob, Party::Alice),
        };
        self.transcript
            .announce(receiver, "received", Payload::Text(sequence.to_string()))?;
        if k == 0 {
            return Ok(None);
        }
        let check = format!("decoys_{sequence}");
        let tally = decoy_check(
            &check,
            &batch,
            sender,
            &mut self.register,
            self.choices,
            &mut self.transcript,
        )?;
        let passed = tally.passed();
        self.checks.push(tally);
        if passed {
            Ok(None)
        } else {
            self.transcript.abort(&check)?;
            Ok(Some(check))
        }
    }

    pub fn measure(
        &mut self,
        targets: &[ParticleLabel],
        basis: Basis,
    ) -> Result<crate::qcore::MeasurementOutcome, ProtocolError> {
        Ok(self.register.measure(
            targets,
            basis,
            &mut StreamChooser::new(self.choices, Stream::Measurement),
        )?)
    }

    pub fn finish<T>(
        mut self,
        status: RunStatus,
        alice_decoded: Option<Bits>,
        bob_decoded: Option<Bits>,
        q_t: usize,
        message_bases: BTreeSet<Basis>,
        trace: T,
    ) -> Result<RunOutcome<T>, ProtocolError> {
        seal(&mut self.transcript, &status, &alice_decoded, &bob_decoded)?;
        Ok(RunOutcome {
            status,
            alice_decoded,
            bob_decoded,
            transcript: self.transcript,
            efficiency_inputs: EfficiencyInputs { b_s: 4, q_t, b_t: 2 },
            checks: self.checks,
            message_bases,
            trace,
        })
    }
}

const W_QUBITS: usize = 3;

fn w_bases() -> BTreeSet<Basis> {
    BTreeSet::from([Basis::Z, Basis::Bell])
}

/// Bob's encoding step: optional exchange, Z-measure `a`, toggle `b`.
/// Returns the Bell state `(b, c)` now encodes.
pub fn bob_encode_w(
    bob_bits: (bool, bool),
    register: &mut Register,
    choices: &mut dyn ChoiceSource,
    trace: &mut WTrace,
) -> Result<BellState, ProtocolError> {
    let [a, b, _] = labels();
    trace.exchange_applied = bob_plan(bob_bits);
    if trace.exchange_applied {
        register.apply(Gate::Exchange, &[a, b])?;
    }
    let out = register.measure(&[a], Basis::Z, &mut StreamChooser::new(choices, Stream::Measurement))?;
    let a_outcome = out.index == 1;
    let collapsed = collapsed_pair(trace.exchange_applied, a_outcome);
    trace.a_outcome = Some(a_outcome);
    trace.collapsed = Some(collapsed);
    trace.bob_toggled = bob_toggle(bob_bits, collapsed);
    let encoded = if trace.bob_toggled {
        register.apply(Gate::ISigmaY, &[b])?;
        collapsed.with_pauli(Gate::ISigmaY)
    } else {
        collapsed
    };
    trace.encoded = Some(encoded);
    Ok(encoded)
}

pub fn run_w(alice_bits: &Bits, bob_bits: &Bits, params: &TwoBitRunParams) -> Result<WRunOutcome, ProtocolError> {
    let mut choices = SeededChoices::new(params.seed);
    run_w_with(alice_bits, bob_bits, params, &mut choices)
}

pub fn run_w_with(
    alice_bits: &Bits,
    bob_bits: &Bits,
    params: &TwoBitRunParams,
    choices: &mut dyn ChoiceSource,
) -> Result<WRunOutcome, ProtocolError> {
    check_len("alice", alice_bits, 2)?;
    check_len("bob", bob_bits, 2)?;
    let [a, b, c] = labels();
    let mut s = TwoBitSession::new("w", params, choices);
    let mut trace = WTrace::default();

    s.register.insert(prepare_w([a, b, c])?)?;
    if let Some(check) = s.send(&[a, b], "ab", Direction::AliceToBob)? {
        return s.finish(RunStatus::Aborted { check }, None, None, W_QUBITS, w_bases(), trace);
    }

    let encoded = bob_encode_w(bob_bits.pair(0), &mut s.register, s.choices, &mut trace)?;

    if let Some(check) = s.send(&[b], "b", Direction::BobToAlice)? {
        return s.finish(RunStatus::Aborted { check }, None, None, W_QUBITS, w_bases(), trace);
    }

    let alice_gate = PauliBitCode::encode(alice_bits.pair(0));
    s.register.apply(alice_gate, &[b])?;
    let announced = s.measure(&[b, c], Basis::Bell)?.bell_state().expect("Bell basis");
    s.transcript
        .announce(Party::Alice, "bell_result", Payload::symbols([announced]))?;
    trace.announced = Some(announced);

    let bob_decoded = decode_w_bob(encoded, announced);
    let alice_decoded = decode_w_alice(alice_gate, announced)?;
    s.finish(
        RunStatus::Completed,
        Some(alice_decoded),
        Some(bob_decoded),
        W_QUBITS,
        w_bases(),
        trace,
    )
}
