//! Four-particle GHZ dialogue.
//!
//! Alice keeps `a` of a random `G_k` and sends `b`, `c`, `d` one at a time.
//! Bob's double CNOT from `b` leaves `(a, b)` in a Bell state and `(c, d)` in
//! a product state whose Z⊗Z reading names that Bell state. Both parties then
//! apply their Paulis (Bob on `b`, after returning it; Alice on `a`) and
//! Alice announces the Bell measurement of `(a, b)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::Bits;
use crate::channel::{Direction, Party, Payload, RunStatus};
use crate::choice::{ChoiceSource, SeededChoices, Stream};
use crate::qcore::{prepare_ghz4, Basis, BellState, Gate, GhzState, MeasurementOutcome, ParticleLabel, Role};

use super::codes::{pauli_between, PauliBitCode};
use super::w::{TwoBitRunParams, TwoBitSession};
use super::{check_len, ProtocolError, RunOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GhzTrace {
    pub initial: Option<GhzState>,
    pub cd_bits: Option<(bool, bool)>,
    /// `(a, b)` as Bob infers it from the readout.
    pub ab_state: Option<BellState>,
    pub announced: Option<BellState>,
}

pub type GhzRunOutcome = RunOutcome<GhzTrace>;

/// Reads the `(a, b)` Bell state off a Z⊗Z outcome on `(c, d)`.
pub fn readout_cd(outcome: &MeasurementOutcome) -> (BellState, (bool, bool)) {
    let bits = outcome.zz_bits().expect("Z⊗Z outcome");
    let state = match bits {
        (false, false) => BellState::PhiPlus,
        (false, true) => BellState::PhiMinus,
        (true, false) => BellState::PsiPlus,
        (true, true) => BellState::PsiMinus,
    };
    (state, bits)
}

/// Which side of the dialogue is decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoder {
    Alice,
    Bob,
}

/// Recovers the other party's Pauli from the initial `(a, b)` state, one's
/// own Pauli and the announced state.
pub fn decode_ghz(role: Decoder, initial: BellState, own: Gate, announced: BellState) -> Result<Bits, ProtocolError> {
    if PauliBitCode::decode(own).is_none() {
        return Err(ProtocolError::Integrity(format!(
            "{} is not an encoding operation ({role:?})",
            own.name()
        )));
    }
    let other = pauli_between(initial.with_pauli(own), announced);
    let (x, y) = PauliBitCode::decode(other).expect("single-qubit Pauli");
    Ok(Bits::new(vec![x, y]))
}

fn labels() -> [ParticleLabel; 4] {
    [Role::A, Role::B, Role::C, Role::D].map(|r| ParticleLabel::message(0, r))
}

const GHZ_QUBITS: usize = 4;

fn ghz_bases() -> BTreeSet<Basis> {
    BTreeSet::from([Basis::ZZ, Basis::Bell])
}

pub fn run_ghz(alice_bits: &Bits, bob_bits: &Bits, params: &TwoBitRunParams) -> Result<GhzRunOutcome, ProtocolError> {
    let mut choices = SeededChoices::new(params.seed);
    run_ghz_with(alice_bits, bob_bits, params, &mut choices)
}

pub fn run_ghz_with(
    alice_bits: &Bits,
    bob_bits: &Bits,
    params: &TwoBitRunParams,
    choices: &mut dyn ChoiceSource,
) -> Result<GhzRunOutcome, ProtocolError> {
    check_len("alice", alice_bits, 2)?;
    check_len("bob", bob_bits, 2)?;
    let [a, b, c, d] = labels();
    let mut s = TwoBitSession::new("ghz", params, choices);
    let mut trace = GhzTrace::default();

    let kind = GhzState::ALL[s.choices.uniform(Stream::StateChoice, 4)];
    trace.initial = Some(kind);
    s.register.insert(prepare_ghz4(kind, [a, b, c, d])?)?;

    for (label, name) in [(b, "b"), (c, "c"), (d, "d")] {
        if let Some(check) = s.send(&[label], name, Direction::AliceToBob)? {
            return s.finish(RunStatus::Aborted { check }, None, None, GHZ_QUBITS, ghz_bases(), trace);
        }
    }

    s.register.apply(Gate::Cnot, &[b, c])?;
    s.register.apply(Gate::Cnot, &[b, d])?;
    let out = s.measure(&[c, d], Basis::ZZ)?;
    let (ab_state, cd_bits) = readout_cd(&out);
    trace.cd_bits = Some(cd_bits);
    trace.ab_state = Some(ab_state);

    let bob_gate = PauliBitCode::encode(bob_bits.pair(0));
    s.register.apply(bob_gate, &[b])?;
    if let Some(check) = s.send(&[b], "b_return", Direction::BobToAlice)? {
        return s.finish(RunStatus::Aborted { check }, None, None, GHZ_QUBITS, ghz_bases(), trace);
    }

    let alice_gate = PauliBitCode::encode(alice_bits.pair(0));
    s.register.apply(alice_gate, &[a])?;
    let announced = s.measure(&[a, b], Basis::Bell)?.bell_state().expect("Bell basis");
    s.transcript
        .announce(Party::Alice, "bell_result", Payload::symbols([announced]))?;
    trace.announced = Some(announced);

    // Alice knows the initial state because she prepared it
    let initial_ab = kind.after_double_cnot().0;
    let alice_decoded = decode_ghz(Decoder::Alice, initial_ab, alice_gate, announced)?;
    let bob_decoded = decode_ghz(Decoder::Bob, ab_state, bob_gate, announced)?;
    s.finish(
        RunStatus::Completed,
        Some(alice_decoded),
        Some(bob_decoded),
        GHZ_QUBITS,
        ghz_bases(),
        trace,
    )
}
