//! Bell-state dialogue.
//!
//! Alice prepares `N + δ₁ + δ₂` random Bell pairs and sends the `a` halves,
//! then the `b` halves, each followed by a check. Bob CNOTs every message
//! pair, which leaves `a` in |±⟩ and `b` in |0⟩/|1⟩; he reads both, prepares
//! fresh copies, shuffles them into sequence C and encodes one bit per qubit
//! with `I` or `iσ_y`. After a decoy check on the way back Alice encodes her
//! bits the same way, measures every qubit in its original basis and
//! announces the results. Each side decodes with the post-CNOT states only it
//! and the other party know: Alice from her preparation, Bob from his
//! measurements.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::channel::{send_quantum, AdversaryModel, Direction, Party, Payload, RunStatus, Transcript};
use crate::choice::{sample_without_replacement, shuffle, ChoiceSource, SeededChoices, Stream, StreamChooser};
use crate::qcore::{
    prepare_basis_state, prepare_bell, Basis, BasisState, BellState, Gate, ParticleLabel, Register, Role,
};

use super::decoy::{decoy_check, insert_decoys};
use super::{check_len, identify_eigenstate, seal, CheckTally, EfficiencyInputs, ProtocolError, RunOutcome};

pub const CHECK_1: &str = "check1";
pub const CHECK_2: &str = "check2";
pub const CHECK_3: &str = "check3";

/// Audit control: `AnnounceInitialStates` additionally publishes the
/// post-CNOT states, which leaks the XOR of both parties' bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellVariant {
    #[default]
    Standard,
    AnnounceInitialStates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellRunParams {
    pub n: usize,
    pub delta1: usize,
    pub delta2: usize,
    pub delta3: usize,
    pub seed: u64,
    pub adversary: AdversaryModel,
    #[serde(default)]
    pub variant: BellVariant,
}

impl BellRunParams {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            delta1: 0,
            delta2: 0,
            delta3: 0,
            seed,
            adversary: AdversaryModel::none(),
            variant: BellVariant::Standard,
        }
    }

    pub fn with_checks(mut self, delta1: usize, delta2: usize, delta3: usize) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self.delta3 = delta3;
        self
    }

    pub fn with_adversary(mut self, adversary: AdversaryModel) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn with_variant(mut self, variant: BellVariant) -> Self {
        self.variant = variant;
        self
    }

    /// Parameters as published in the transcript; the seed is private.
    fn public_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "delta3": self.delta3,
            "adversary": self.adversary,
            "variant": self.variant,
        })
    }
}

/// One reproduced qubit of sequence C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub label: ParticleLabel,
    pub origin: Role,
    /// State Bob observed after the CNOT and prepared afresh.
    pub prepared_state: BasisState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceC {
    pub entries: Vec<SequenceEntry>,
}

impl SequenceC {
    /// Bob's record of which pair and particle sits at each position,
    /// as `a3`, `b0`, ...
    pub fn position_record(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.to_string()).collect()
    }
}

/// Private per-run record for inspection and tests.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct BellTrace {
    /// Alice's preparation, by pair index.
    pub pair_states: Vec<BellState>,
    pub check1_positions: Vec<usize>,
    pub check2_positions: Vec<usize>,
    pub message_pairs: Vec<usize>,
    pub sequence_c: Option<SequenceC>,
    /// Sequence C after Bob's encoding, per position.
    pub after_bob: Vec<Option<BasisState>>,
    /// Sequence C after Alice's encoding, per position.
    pub after_alice: Vec<Option<BasisState>>,
    pub announced: Vec<BasisState>,
}

pub type BellRunOutcome = RunOutcome<BellTrace>;

/// Applies one encoding bit to a Z/X eigenstate: `I` keeps it, `iσ_y` flips it
/// within its basis.
pub fn encode_bit(state: BasisState, bit: bool) -> BasisState {
    if bit {
        state.flipped()
    } else {
        state
    }
}

fn encoding_gate(bit: bool) -> Gate {
    if bit {
        Gate::ISigmaY
    } else {
        Gate::I
    }
}

/// Recovers the other party's bits: per position, the announced eigenstate
/// equals the known post-CNOT state flipped by both parties' bits.
pub fn decode(own_bits: &Bits, known_states: &[BasisState], announced: &[BasisState]) -> Result<Bits, ProtocolError> {
    if own_bits.len() != known_states.len() || known_states.len() != announced.len() {
        return Err(ProtocolError::Integrity(format!(
            "{} own bits, {} known states, {} announced results",
            own_bits.len(),
            known_states.len(),
            announced.len()
        )));
    }
    known_states
        .iter()
        .zip(announced)
        .enumerate()
        .map(|(n, (known, seen))| {
            if known.basis() != seen.basis() {
                return Err(ProtocolError::Integrity(format!(
                    "position {n}: announced {seen} is not in the {} basis",
                    known.basis()
                )));
            }
            Ok(known.bit() ^ seen.bit() ^ own_bits.get(n))
        })
        .collect()
}

/// Outcomes of two same-basis measurements on a Bell pair are always equal,
/// or always opposite: opposite in Z iff the parity bit is set, in X iff the
/// phase bit is set.
pub fn correlation_is_opposite(state: BellState, basis: Basis) -> bool {
    match basis {
        Basis::Z => state.parity(),
        Basis::X => state.phase(),
        other => panic!("no single-qubit correlation in basis {other}"),
    }
}

fn pair_labels(k: usize, purpose_check: bool) -> (ParticleLabel, ParticleLabel) {
    let k = k as u32;
    if purpose_check {
        (ParticleLabel::check(k, Role::A), ParticleLabel::check(k, Role::B))
    } else {
        (ParticleLabel::message(k, Role::A), ParticleLabel::message(k, Role::B))
    }
}

/// State of one Bell-protocol run between the steps.
pub struct BellSession<'c> {
    params: BellRunParams,
    register: Register,
    transcript: Transcript,
    choices: &'c mut dyn ChoiceSource,
    trace: BellTrace,
    checks: Vec<CheckTally>,
}

impl<'c> BellSession<'c> {
    /// Step 1: Alice picks check positions and prepares every pair.
    pub fn prepare(params: &BellRunParams, choices: &'c mut dyn ChoiceSource) -> Result<Self, ProtocolError> {
        if params.n == 0 {
            return Err(ProtocolError::InvalidParams("n must be at least 1".into()));
        }
        let total = params.n + params.delta1 + params.delta2;
        let check1 = sample_without_replacement(choices, Stream::Position, (0..total).collect(), params.delta1);
        let rest: Vec<usize> = (0..total).filter(|k| !check1.contains(k)).collect();
        let check2 = sample_without_replacement(choices, Stream::Position, rest, params.delta2);
        let message: Vec<usize> = (0..total)
            .filter(|k| !check1.contains(k) && !check2.contains(k))
            .collect();

        let mut register = Register::new();
        let mut pair_states = Vec::with_capacity(total);
        for k in 0..total {
            let kind = BellState::ALL[choices.uniform(Stream::StateChoice, 4)];
            let (a, b) = pair_labels(k, !message.contains(&k));
            register.insert(prepare_bell(kind, [a, b])?)?;
            pair_states.push(kind);
        }
        let transcript = Transcript::new("bell", params.seed, params.public_json());
        Ok(Self {
            params: params.clone(),
            register,
            transcript,
            choices,
            trace: BellTrace {
                pair_states,
                check1_positions: check1,
                check2_positions: check2,
                message_pairs: message,
                ..BellTrace::default()
            },
            checks: Vec::new(),
        })
    }

    fn labels(&self, k: usize) -> (ParticleLabel, ParticleLabel) {
        pair_labels(k, !self.trace.message_pairs.contains(&k))
    }

    fn total_pairs(&self) -> usize {
        self.trace.pair_states.len()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn trace(&self) -> &BellTrace {
        &self.trace
    }

    fn send(&mut self, qubits: &[ParticleLabel], sequence: &str, direction: Direction) -> Result<(), ProtocolError> {
        send_quantum(
            &mut self.register,
            qubits,
            sequence,
            direction,
            &self.params.adversary,
            self.choices,
            &mut self.transcript,
        )?;
        let (receiver, _) = parties(direction);
        self.transcript
            .announce(receiver, "received", Payload::Text(sequence.to_string()))?;
        Ok(())
    }

    /// Step 2 transmission: sequence A to Bob.
    pub fn send_sequence_a(&mut self) -> Result<(), ProtocolError> {
        let a: Vec<ParticleLabel> = (0..self.total_pairs()).map(|k| self.labels(k).0).collect();
        self.send(&a, "A", Direction::AliceToBob)
    }

    /// Step 2 check: Bob measures each checking `a` in a random Z/X basis,
    /// Alice measures the partner `b` in the same basis, and the results must
    /// show the correlation of the prepared Bell state.
    pub fn security_check_1(&mut self) -> Result<CheckTally, ProtocolError> {
        let positions = self.trace.check1_positions.clone();
        self.transcript
            .announce(Party::Alice, "check1_positions", Payload::Positions(positions.clone()))?;
        let mut bases = Vec::with_capacity(positions.len());
        let mut bob_results = Vec::with_capacity(positions.len());
        for &k in &positions {
            let basis = [Basis::Z, Basis::X][self.choices.uniform(Stream::BasisChoice, 2)];
            let (a, _) = self.labels(k);
            let out = self
                .register
                .measure(&[a], basis, &mut StreamChooser::new(self.choices, Stream::Measurement))?;
            bases.push(basis);
            bob_results.push(out.basis_state().expect("single-qubit basis"));
        }
        self.transcript
            .announce(Party::Bob, "check1_bases", Payload::symbols(&bases))?;
        self.transcript
            .announce(Party::Bob, "check1_results", Payload::symbols(&bob_results))?;
        let mut mismatches = 0;
        for ((&k, &basis), bob) in positions.iter().zip(&bases).zip(&bob_results) {
            let (_, b) = self.labels(k);
            let out = self
                .register
                .measure(&[b], basis, &mut StreamChooser::new(self.choices, Stream::Measurement))?;
            let alice = out.basis_state().expect("single-qubit basis");
            let opposite = correlation_is_opposite(self.trace.pair_states[k], basis);
            if (alice.bit() != bob.bit()) != opposite {
                mismatches += 1;
            }
        }
        self.finish_check(CHECK_1, positions.len(), mismatches)
    }

    /// Step 3 transmission: the remaining `b` particles to Bob.
    pub fn send_sequence_b(&mut self) -> Result<(), ProtocolError> {
        let b: Vec<ParticleLabel> = (0..self.total_pairs())
            .filter(|k| !self.trace.check1_positions.contains(k))
            .map(|k| self.labels(k).1)
            .collect();
        self.send(&b, "B", Direction::AliceToBob)
    }

    /// Step 3 check: Bob Bell-measures each checking pair; each result must
    /// equal Alice's prepared state.
    pub fn security_check_2(&mut self) -> Result<CheckTally, ProtocolError> {
        let positions = self.trace.check2_positions.clone();
        self.transcript
            .announce(Party::Alice, "check2_positions", Payload::Positions(positions.clone()))?;
        let mut results = Vec::with_capacity(positions.len());
        for &k in &positions {
            let (a, b) = self.labels(k);
            let out = self.register.measure(
                &[a, b],
                Basis::Bell,
                &mut StreamChooser::new(self.choices, Stream::Measurement),
            )?;
            results.push(out.bell_state().expect("Bell basis"));
        }
        self.transcript
            .announce(Party::Bob, "check2_results", Payload::symbols(&results))?;
        let mismatches = positions
            .iter()
            .zip(&results)
            .filter(|(&k, got)| self.trace.pair_states[k] != **got)
            .count();
        self.finish_check(CHECK_2, positions.len(), mismatches)
    }

    fn finish_check(&mut self, check: &str, units: usize, mismatches: usize) -> Result<CheckTally, ProtocolError> {
        let tally = CheckTally {
            check: check.to_string(),
            units,
            mismatches,
        };
        self.transcript.record_check(check, tally.passed())?;
        self.checks.push(tally.clone());
        Ok(tally)
    }

    /// Step 4: CNOT every message pair (a controls b), X-measure `a`,
    /// Z-measure `b`, prepare fresh qubits in the observed states and shuffle
    /// them into sequence C.
    pub fn bob_cnot_measure_reproduce(&mut self) -> Result<SequenceC, ProtocolError> {
        let mut entries = Vec::with_capacity(2 * self.params.n);
        for k in self.trace.message_pairs.clone() {
            let (a, b) = self.labels(k);
            self.register.apply(Gate::Cnot, &[a, b])?;
            for (label, basis, origin) in [(a, Basis::X, Role::A), (b, Basis::Z, Role::B)] {
                let out = self.register.measure(
                    &[label],
                    basis,
                    &mut StreamChooser::new(self.choices, Stream::Measurement),
                )?;
                let seen = out.basis_state().expect("single-qubit basis");
                self.register.insert(prepare_basis_state(seen, label))?;
                entries.push(SequenceEntry {
                    label,
                    origin,
                    prepared_state: seen,
                });
            }
        }
        shuffle(self.choices, &mut entries);
        let seq = SequenceC { entries };
        self.trace.sequence_c = Some(seq.clone());
        Ok(seq)
    }

    fn encode_all(&mut self, seq: &SequenceC, bits: &Bits) -> Result<Vec<Option<BasisState>>, ProtocolError> {
        for (n, entry) in seq.entries.iter().enumerate() {
            self.register.apply(encoding_gate(bits.get(n)), &[entry.label])?;
        }
        seq.entries
            .iter()
            .map(|e| {
                let s = self.register.isolated_state(&[e.label])?;
                Ok(s.as_ref().and_then(identify_eigenstate))
            })
            .collect()
    }

    fn abort(&mut self, check: &str) -> Result<RunStatus, ProtocolError> {
        self.transcript.abort(check)?;
        Ok(RunStatus::Aborted {
            check: check.to_string(),
        })
    }

    fn into_outcome(
        mut self,
        status: RunStatus,
        alice_decoded: Option<Bits>,
        bob_decoded: Option<Bits>,
    ) -> Result<BellRunOutcome, ProtocolError> {
        seal(&mut self.transcript, &status, &alice_decoded, &bob_decoded)?;
        let n = self.params.n;
        Ok(RunOutcome {
            status,
            alice_decoded,
            bob_decoded,
            transcript: self.transcript,
            efficiency_inputs: EfficiencyInputs {
                b_s: 4 * n,
                q_t: 2 * n,
                b_t: 2 * n,
            },
            checks: self.checks,
            message_bases: BTreeSet::from([Basis::X, Basis::Z]),
            trace: self.trace,
        })
    }
}

fn parties(direction: Direction) -> (Party, Party) {
    match direction {
        Direction::AliceToBob => (Party::Bob, Party::Alice),
        Direction::BobToAlice => (Party::Alice, Party::Bob),
    }
}

/// Runs the whole protocol with the seeded choice source of `params.seed`.
pub fn run_bell(alice_bits: &Bits, bob_bits: &Bits, params: &BellRunParams) -> Result<BellRunOutcome, ProtocolError> {
    let mut choices = SeededChoices::new(params.seed);
    run_bell_with(alice_bits, bob_bits, params, &mut choices)
}

/// Runs the whole protocol with every random decision taken from `choices`.
pub fn run_bell_with(
    alice_bits: &Bits,
    bob_bits: &Bits,
    params: &BellRunParams,
    choices: &mut dyn ChoiceSource,
) -> Result<BellRunOutcome, ProtocolError> {
    check_len("alice", alice_bits, 2 * params.n)?;
    check_len("bob", bob_bits, 2 * params.n)?;

    let mut s = BellSession::prepare(params, choices)?;

    s.send_sequence_a()?;
    if params.delta1 > 0 && !s.security_check_1()?.passed() {
        let status = s.abort(CHECK_1)?;
        return s.into_outcome(status, None, None);
    }

    s.send_sequence_b()?;
    if params.delta2 > 0 && !s.security_check_2()?.passed() {
        let status = s.abort(CHECK_2)?;
        return s.into_outcome(status, None, None);
    }

    let seq = s.bob_cnot_measure_reproduce()?;
    s.trace.after_bob = s.encode_all(&seq, bob_bits)?;

    let c_labels: Vec<ParticleLabel> = seq.entries.iter().map(|e| e.label).collect();
    let batch = insert_decoys(&c_labels, params.delta3, 0, &mut s.register, s.choices)?;
    s.send(&batch.sequence, "C'", Direction::BobToAlice)?;
    if params.delta3 > 0 {
        let tally = decoy_check(
            CHECK_3,
            &batch,
            Party::Bob,
            &mut s.register,
            s.choices,
            &mut s.transcript,
        )?;
        let passed = tally.passed();
        s.checks.push(tally);
        if !passed {
            let status = s.abort(CHECK_3)?;
            return s.into_outcome(status, None, None);
        }
    }

    // Step 6
    s.trace.after_alice = s.encode_all(&seq, alice_bits)?;
    s.transcript
        .announce(Party::Bob, "position_record", Payload::Symbols(seq.position_record()))?;
    let alice_known: Vec<BasisState> = seq
        .entries
        .iter()
        .map(|e| {
            let (a_state, b_state) = s.trace.pair_states[e.label.index as usize].after_cnot();
            if e.origin == Role::A {
                a_state
            } else {
                b_state
            }
        })
        .collect();
    let mut announced = Vec::with_capacity(seq.entries.len());
    for (entry, known) in seq.entries.iter().zip(&alice_known) {
        let out = s.register.measure(
            &[entry.label],
            known.basis(),
            &mut StreamChooser::new(s.choices, Stream::Measurement),
        )?;
        announced.push(out.basis_state().expect("single-qubit basis"));
    }
    s.transcript
        .announce(Party::Alice, "results", Payload::symbols(&announced))?;
    if params.variant == BellVariant::AnnounceInitialStates {
        s.transcript
            .announce(Party::Alice, "initial_states", Payload::symbols(&alice_known))?;
    }
    s.trace.announced = announced.clone();

    let bob_known: Vec<BasisState> = seq.entries.iter().map(|e| e.prepared_state).collect();
    let bob_decoded = decode(bob_bits, &bob_known, &announced)?;
    let alice_decoded = decode(alice_bits, &alice_known, &announced)?;
    s.into_outcome(RunStatus::Completed, Some(alice_decoded), Some(bob_decoded))
}
