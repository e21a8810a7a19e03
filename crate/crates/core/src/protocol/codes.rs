//! Agreed bit encodings for the two-bit protocols.

use crate::qcore::{BellState, Gate};

/// Two-bit ↔ Pauli operation: `U_00 = I`, `U_01 = σ_x`, `U_10 = σ_z`,
/// `U_11 = iσ_y`.
pub struct PauliBitCode;

impl PauliBitCode {
    pub fn encode(bits: (bool, bool)) -> Gate {
        match bits {
            (false, false) => Gate::I,
            (false, true) => Gate::SigmaX,
            (true, false) => Gate::SigmaZ,
            (true, true) => Gate::ISigmaY,
        }
    }

    pub fn decode(gate: Gate) -> Option<(bool, bool)> {
        match gate {
            Gate::I => Some((false, false)),
            Gate::SigmaX => Some((false, true)),
            Gate::SigmaZ => Some((true, false)),
            Gate::ISigmaY => Some((true, true)),
            _ => None,
        }
    }
}

/// Two-bit ↔ Bell state at Bob's site in the W protocol: `ψ− = 00`,
/// `φ+ = 01`, `ψ+ = 10`, `φ− = 11`.
pub struct BellBitCode;

impl BellBitCode {
    pub fn encode(bits: (bool, bool)) -> BellState {
        match bits {
            (false, false) => BellState::PsiMinus,
            (false, true) => BellState::PhiPlus,
            (true, false) => BellState::PsiPlus,
            (true, true) => BellState::PhiMinus,
        }
    }

    pub fn decode(state: BellState) -> (bool, bool) {
        match state {
            BellState::PsiMinus => (false, false),
            BellState::PhiPlus => (false, true),
            BellState::PsiPlus => (true, false),
            BellState::PhiMinus => (true, true),
        }
    }
}

/// The single Pauli `U` with `U·from = to` on the Bell labels (up to phase).
pub fn pauli_between(from: BellState, to: BellState) -> Gate {
    Gate::SINGLE_QUBIT
        .into_iter()
        .find(|&g| from.with_pauli(g) == to)
        .expect("the Pauli group acts transitively on the Bell basis")
}
