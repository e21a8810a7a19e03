use std::collections::BTreeMap;

use qdsim_core::analysis::leakage::{audit_config, enumerate_runs};
use qdsim_core::analysis::{eve_entropy, leakage_report, leaky_control_report};
use qdsim_core::protocol::codes::{BellBitCode, PauliBitCode};
use qdsim_core::protocol::{run, ProtocolKind};
use qdsim_core::qcore::BellState;
use qdsim_core::Bits;

fn h(counts: impl IntoIterator<Item = usize>) -> f64 {
    let counts: Vec<f64> = counts.into_iter().map(|c| c as f64).collect();
    let total: f64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|c| -(c / total) * (c / total).log2())
        .sum()
}

/// Average posterior entropy of `secret` given `view` over equally likely
/// worlds.
fn conditional_entropy<S: Ord, V: Ord>(worlds: impl IntoIterator<Item = (S, V)>) -> f64 {
    let mut by_view: BTreeMap<V, BTreeMap<S, usize>> = BTreeMap::new();
    for (s, v) in worlds {
        *by_view.entry(v).or_default().entry(s).or_default() += 1;
    }
    let total: usize = by_view.values().flat_map(|m| m.values()).sum();
    by_view
        .values()
        .map(|m| {
            let n: usize = m.values().sum();
            n as f64 / total as f64 * h(m.values().copied())
        })
        .sum()
}

#[test]
fn bell_particle_matches_a_hand_count() {
    // announced bit = hidden post-CNOT bit xor Alice's bit xor Bob's bit
    let worlds = (0..8u8).map(|w| {
        let (s, i, j) = (w & 1, (w >> 1) & 1, (w >> 2) & 1);
        ((i, j), s ^ i ^ j)
    });
    let oracle = conditional_entropy(worlds);
    assert!((oracle - 2.0).abs() < 1e-12);
    let report = leakage_report(ProtocolKind::Bell).unwrap();
    assert!((report.unit_entropy_bits - oracle).abs() < 1e-9);
    assert_eq!(report.consistent_assignments, 4);
    assert!(report.mutual_information_bits.abs() < 1e-12);
}

#[test]
fn ghz_matches_a_hand_count() {
    let mut worlds = Vec::new();
    for initial in BellState::ALL {
        for a in 0..4u64 {
            for b in 0..4u64 {
                let (ab, bb) = (Bits::from_value(a, 2), Bits::from_value(b, 2));
                let ann = initial
                    .with_pauli(PauliBitCode::encode(ab.pair(0)))
                    .with_pauli(PauliBitCode::encode(bb.pair(0)));
                worlds.push(((a, b), ann));
            }
        }
    }
    let oracle = conditional_entropy(worlds);
    assert!((oracle - 4.0).abs() < 1e-12);
    let report = leakage_report(ProtocolKind::Ghz).unwrap();
    assert!((report.unit_entropy_bits - oracle).abs() < 1e-9);
    assert_eq!(report.consistent_assignments, 16);
    assert!(report.mutual_information_bits.abs() < 1e-12);
}

#[test]
fn w_matches_a_hand_count() {
    // Bob always lands on the Bell state that spells his bits, so nothing
    // hidden enters the announcement.
    let mut worlds = Vec::new();
    for a in 0..4u64 {
        for b in 0..4u64 {
            let (ab, bb) = (Bits::from_value(a, 2), Bits::from_value(b, 2));
            let ann = BellBitCode::encode(bb.pair(0)).with_pauli(PauliBitCode::encode(ab.pair(0)));
            worlds.push(((a, b), ann));
        }
    }
    let oracle = conditional_entropy(worlds);
    let report = leakage_report(ProtocolKind::W).unwrap();
    assert!((report.unit_entropy_bits - oracle).abs() < 1e-9);
    assert!((report.mutual_information_bits - (4.0 - oracle)).abs() < 1e-9);
}

#[test]
fn leaky_control_is_flagged() {
    let report = leaky_control_report().unwrap();
    assert!(report.mutual_information_bits > 0.5);
    assert!(report.unit_entropy_bits < 2.0);
}

#[test]
fn view_posterior_for_a_concrete_run() {
    let config = audit_config(ProtocolKind::Ghz);
    let out = run(&config, &"01".parse().unwrap(), &"10".parse().unwrap()).unwrap();
    let v = eve_entropy(&config, &out.transcript.public_view()).unwrap();
    assert_eq!(v.consistent_assignments, 16);
    assert!((v.entropy_bits - 4.0).abs() < 1e-9);
}

#[test]
fn enumeration_covers_every_message_pair() {
    let samples = enumerate_runs(&audit_config(ProtocolKind::Bell)).unwrap();
    // 16 message pairs × 4 states × 2 orderings
    assert_eq!(samples.len(), 128);
}
