use num_complex::Complex64;
use proptest::prelude::*;
use qdsim_core::channel::{AdversaryKind, AdversaryModel, Event};
use qdsim_core::choice::{SeededChoices, Stream, StreamChooser};
use qdsim_core::protocol::codes::{pauli_between, BellBitCode, PauliBitCode};
use qdsim_core::protocol::{run, ProtocolKind, RunConfig};
use qdsim_core::qcore::{
    prepare_bell, prepare_ghz4, Basis, BellState, Gate, GhzState, ParticleLabel, Role, StateVector,
};
use qdsim_core::Bits;

fn pair() -> [ParticleLabel; 2] {
    [ParticleLabel::message(0, Role::A), ParticleLabel::message(0, Role::B)]
}

fn bell() -> impl Strategy<Value = BellState> {
    prop::sample::select(BellState::ALL.to_vec())
}

fn pauli() -> impl Strategy<Value = Gate> {
    prop::sample::select(Gate::SINGLE_QUBIT.to_vec())
}

fn protocol() -> impl Strategy<Value = ProtocolKind> {
    prop::sample::select(ProtocolKind::ALL.to_vec())
}

fn label_state(s: &StateVector) -> BellState {
    let l = pair();
    let hits: Vec<_> = BellState::ALL
        .into_iter()
        .filter(|&b| prepare_bell(b, l).unwrap().equal_up_to_global_phase(s).unwrap())
        .collect();
    assert_eq!(hits.len(), 1);
    hits[0]
}

proptest! {
    #[test]
    fn pauli_on_either_half_matches_the_label_algebra(state in bell(), g in pauli(), on_b in any::<bool>()) {
        let l = pair();
        let target = if on_b { l[1] } else { l[0] };
        let moved = prepare_bell(state, l).unwrap().with_gate(g, &[target]).unwrap();
        prop_assert_eq!(label_state(&moved), state.with_pauli(g));
    }

    #[test]
    fn flips_compose(state in bell(), g in pauli(), h in pauli()) {
        let x = state.with_pauli(Gate::SigmaX);
        let z = state.with_pauli(Gate::SigmaZ);
        prop_assert_eq!(x.parity(), !state.parity());
        prop_assert_eq!(x.phase(), state.phase());
        prop_assert_eq!(z.phase(), !state.phase());
        prop_assert_eq!(z.parity(), state.parity());
        prop_assert_eq!(state.with_pauli(g).with_pauli(g), state);
        prop_assert_eq!(state.with_pauli(g).with_pauli(h), state.with_pauli(h).with_pauli(g));
    }

    #[test]
    fn encodings_are_bijections(from in bell(), bits in any::<(bool, bool)>()) {
        let g = PauliBitCode::encode(bits);
        prop_assert_eq!(PauliBitCode::decode(g), Some(bits));
        prop_assert_eq!(BellBitCode::decode(BellBitCode::encode(bits)), bits);
        prop_assert_eq!(pauli_between(from, from.with_pauli(g)), g);
    }

    #[test]
    fn cnot_disentangles_every_bell_state(state in bell()) {
        let l = pair();
        let before = prepare_bell(state, l).unwrap();
        prop_assert!(!before.is_product_across(&l[..1]).unwrap());
        let after = before.with_gate(Gate::Cnot, &l).unwrap();
        prop_assert!(after.is_product_across(&l[..1]).unwrap());
    }

    #[test]
    fn double_cnot_splits_ghz(kind in prop::sample::select(GhzState::ALL.to_vec())) {
        let l = [Role::A, Role::B, Role::C, Role::D].map(|r| ParticleLabel::message(0, r));
        let after = prepare_ghz4(kind, l)
            .unwrap()
            .with_gate(Gate::Cnot, &[l[1], l[2]])
            .unwrap()
            .with_gate(Gate::Cnot, &[l[1], l[3]])
            .unwrap();
        prop_assert!(after.is_product_across(&l[..2]).unwrap());
        prop_assert!(!after.is_product_across(&l[..1]).unwrap());
    }

    #[test]
    fn identical_configs_give_identical_transcripts(
        p in protocol(),
        seed in any::<u64>(),
        eve in prop::sample::select(vec![AdversaryKind::None, AdversaryKind::InterceptResend, AdversaryKind::Passive]),
        msg in any::<u64>(),
    ) {
        let mut config = RunConfig::new(p, seed);
        config.n = 2;
        config.delta1 = 1;
        config.delta2 = 1;
        config.delta3 = 2;
        config.adversary = AdversaryModel::new(eve);
        let len = config.message_len();
        let alice = Bits::from_value(msg, len);
        let bob = Bits::from_value(msg >> 8, len);
        let x = run(&config, &alice, &bob).unwrap().transcript.to_json();
        let y = run(&config, &alice, &bob).unwrap().transcript.to_json();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn honest_runs_always_decode(p in protocol(), seed in any::<u64>(), msg in any::<u64>(), n in 1usize..3) {
        let mut config = RunConfig::new(p, seed);
        config.n = n;
        config.delta1 = 2;
        config.delta2 = 2;
        config.delta3 = 2;
        let len = config.message_len();
        let alice = Bits::from_value(msg, len);
        let bob = Bits::from_value(msg.rotate_left(17), len);
        let out = run(&config, &alice, &bob).unwrap();
        prop_assert!(out.is_completed());
        prop_assert_eq!(out.bob_decoded, Some(alice));
        prop_assert_eq!(out.alice_decoded, Some(bob));
    }

    #[test]
    fn passive_eve_changes_nothing_but_the_parameters(p in protocol(), seed in any::<u64>()) {
        let mut config = RunConfig::new(p, seed);
        config.delta1 = 1;
        config.delta3 = 2;
        let len = config.message_len();
        let (alice, bob) = (Bits::from_value(seed, len), Bits::from_value(!seed, len));
        let honest = run(&config, &alice, &bob).unwrap();
        config.adversary = AdversaryModel::new(AdversaryKind::Passive);
        let watched = run(&config, &alice, &bob).unwrap();
        prop_assert_eq!(honest.transcript.events(), watched.transcript.events());
        prop_assert!(watched.transcript.audit().is_empty());
    }

    #[test]
    fn quantum_sends_carry_counts_only(seed in any::<u64>()) {
        let mut config = RunConfig::new(ProtocolKind::Bell, seed);
        config.delta3 = 3;
        let out = run(&config, &Bits::from_value(1, 2), &Bits::from_value(2, 2)).unwrap();
        for e in out.transcript.events() {
            if let Event::QuantumSend { .. } = e {
                let json = serde_json::to_value(e).unwrap();
                let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
                keys.sort();
                prop_assert_eq!(keys, ["direction", "qubits", "sequence", "type"]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn born_frequencies(theta in 0.0f64..std::f64::consts::PI, seed in any::<u64>()) {
        const SHOTS: u64 = 4000;
        let q = ParticleLabel::message(0, Role::A);
        let state = StateVector::new(
            vec![q],
            vec![Complex64::new((theta / 2.0).cos(), 0.0), Complex64::new(0.0, (theta / 2.0).sin())],
        )
        .unwrap();
        let p1 = (theta / 2.0).sin().powi(2);
        let mut src = SeededChoices::new(seed);
        let ones = (0..SHOTS)
            .filter(|_| {
                let out = state
                    .measure(&[q], Basis::Z, &mut StreamChooser::new(&mut src, Stream::Measurement))
                    .unwrap();
                out.index == 1
            })
            .count() as f64;
        let sigma = (p1 * (1.0 - p1) / SHOTS as f64).sqrt();
        prop_assert!((ones / SHOTS as f64 - p1).abs() <= 5.0 * sigma + 2.0 / SHOTS as f64);
    }
}
