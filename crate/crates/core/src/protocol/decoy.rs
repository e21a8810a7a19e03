//! Decoy-photon checks: the sender hides single qubits in random
//! {|0⟩,|1⟩,|+⟩,|−⟩} states at random positions of a sequence; after
//! transmission the receiver measures them in the bases the sender names.

use crate::channel::{Party, Payload, Transcript};
use crate::choice::{sample_without_replacement, ChoiceSource, Stream, StreamChooser};
use crate::qcore::{prepare_basis_state, BasisState, ParticleLabel, Register};

use super::{CheckTally, ProtocolError};

#[derive(Debug, Clone, PartialEq)]
pub struct DecoyBatch {
    /// The transmitted sequence, payload and decoys interleaved.
    pub sequence: Vec<ParticleLabel>,
    /// Positions of the decoys within `sequence`, ascending.
    pub positions: Vec<usize>,
    pub states: Vec<BasisState>,
}

impl DecoyBatch {
    pub fn decoy_labels(&self) -> impl Iterator<Item = ParticleLabel> + '_ {
        self.positions.iter().map(|&p| self.sequence[p])
    }
}

/// Prepares `count` decoys (labels `decoy:first_index..`) and inserts them
/// into `payload` at uniformly chosen positions.
pub fn insert_decoys(
    payload: &[ParticleLabel],
    count: usize,
    first_index: u32,
    register: &mut Register,
    choices: &mut dyn ChoiceSource,
) -> Result<DecoyBatch, ProtocolError> {
    let states: Vec<BasisState> = (0..count)
        .map(|_| BasisState::ALL[choices.uniform(Stream::StateChoice, 4)])
        .collect();
    let total = payload.len() + count;
    let positions = sample_without_replacement(choices, Stream::Position, (0..total).collect(), count);
    let mut payload_iter = payload.iter();
    let mut decoy_k = 0;
    let mut sequence = Vec::with_capacity(total);
    for pos in 0..total {
        if positions.binary_search(&pos).is_ok() {
            let label = ParticleLabel::decoy(first_index + decoy_k as u32);
            register.insert(prepare_basis_state(states[decoy_k], label))?;
            sequence.push(label);
            decoy_k += 1;
        } else {
            sequence.push(*payload_iter.next().expect("payload length"));
        }
    }
    Ok(DecoyBatch {
        sequence,
        positions,
        states,
    })
}

/// Runs the decoy check for `batch` and records its public result.
///
/// The sender announces positions and bases; the receiver measures each
/// decoy and announces the results; the check passes iff every result equals
/// the prepared state.
pub fn decoy_check(
    check: &str,
    batch: &DecoyBatch,
    sender: Party,
    register: &mut Register,
    choices: &mut dyn ChoiceSource,
    transcript: &mut Transcript,
) -> Result<CheckTally, ProtocolError> {
    let receiver = match sender {
        Party::Alice => Party::Bob,
        Party::Bob => Party::Alice,
    };
    transcript.announce(
        sender,
        &format!("{check}_positions"),
        Payload::Positions(batch.positions.clone()),
    )?;
    transcript.announce(
        sender,
        &format!("{check}_bases"),
        Payload::symbols(batch.states.iter().map(|s| s.basis())),
    )?;
    let mut results = Vec::with_capacity(batch.states.len());
    for (label, prepared) in batch.decoy_labels().zip(&batch.states) {
        let out = register.measure(
            &[label],
            prepared.basis(),
            &mut StreamChooser::new(choices, Stream::Measurement),
        )?;
        results.push(out.basis_state().expect("single-qubit basis"));
    }
    transcript.announce(receiver, &format!("{check}_results"), Payload::symbols(&results))?;
    let mismatches = results
        .iter()
        .zip(&batch.states)
        .filter(|(got, want)| got != want)
        .count();
    let tally = CheckTally {
        check: check.to_string(),
        units: batch.states.len(),
        mismatches,
    };
    transcript.record_check(check, tally.passed())?;
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{send_quantum, AdversaryKind, AdversaryModel, Direction};
    use crate::choice::SeededChoices;
    use crate::qcore::Role;

    fn payload() -> Vec<ParticleLabel> {
        (0..3).map(|k| ParticleLabel::message(k, Role::B)).collect()
    }

    #[test]
    fn decoys_are_interleaved_without_reordering_payload() {
        let mut reg = Register::new();
        let mut rng = SeededChoices::new(11);
        let batch = insert_decoys(&payload(), 4, 0, &mut reg, &mut rng).unwrap();
        assert_eq!(batch.sequence.len(), 7);
        let rest: Vec<_> = batch
            .sequence
            .iter()
            .enumerate()
            .filter(|(i, _)| !batch.positions.contains(i))
            .map(|(_, l)| *l)
            .collect();
        assert_eq!(rest, payload());
        assert_eq!(reg.num_qubits(), 4);
    }

    #[test]
    fn honest_channel_passes() {
        for seed in 0..50 {
            let mut reg = Register::new();
            let mut rng = SeededChoices::new(seed);
            let mut t = Transcript::new("bell", seed, serde_json::json!({}));
            let batch = insert_decoys(&[], 6, 0, &mut reg, &mut rng).unwrap();
            let tally = decoy_check("check3", &batch, Party::Bob, &mut reg, &mut rng, &mut t).unwrap();
            assert!(tally.passed());
        }
    }

    #[test]
    fn eve_is_caught_about_a_quarter_of_the_time_per_decoy() {
        let eve = AdversaryModel::new(AdversaryKind::MeasureResend);
        let (mut units, mut bad) = (0, 0);
        for seed in 0..2000 {
            let mut reg = Register::new();
            let mut rng = SeededChoices::new(seed);
            let mut t = Transcript::new("bell", seed, serde_json::json!({}));
            let batch = insert_decoys(&[], 4, 0, &mut reg, &mut rng).unwrap();
            send_quantum(
                &mut reg,
                &batch.sequence,
                "C'",
                Direction::BobToAlice,
                &eve,
                &mut rng,
                &mut t,
            )
            .unwrap();
            let tally = decoy_check("check3", &batch, Party::Bob, &mut reg, &mut rng, &mut t).unwrap();
            units += tally.units;
            bad += tally.mismatches;
        }
        let rate = bad as f64 / units as f64;
        let sigma = (0.25 * 0.75 / units as f64).sqrt();
        assert!((rate - 0.25).abs() < 4.0 * sigma, "rate {rate}");
    }
}
