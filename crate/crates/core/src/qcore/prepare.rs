//! Canonical states used by the three dialogue protocols.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gate::Gate;
use super::label::ParticleLabel;
use super::measure::{Basis, BasisState};
use super::state::StateVector;
use super::QError;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The four Bell states, indexed as `2·parity + phase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BellState {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn from_bits(parity: bool, phase: bool) -> Self {
        Self::ALL[(parity as usize) << 1 | phase as usize]
    }

    /// `true` for the ψ states (qubits disagree in Z).
    pub fn parity(self) -> bool {
        matches!(self, BellState::PsiPlus | BellState::PsiMinus)
    }

    /// `true` for the minus states.
    pub fn phase(self) -> bool {
        matches!(self, BellState::PhiMinus | BellState::PsiMinus)
    }

    pub fn index(self) -> usize {
        (self.parity() as usize) << 1 | self.phase() as usize
    }

    pub fn symbol(self) -> &'static str {
        Basis::Bell.outcome_symbols()[self.index()]
    }

    pub fn parse(symbol: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.symbol() == symbol)
    }

    pub fn amplitudes(self) -> [Complex64; 4] {
        match self {
            BellState::PhiPlus => [c(H), c(0.0), c(0.0), c(H)],
            BellState::PhiMinus => [c(H), c(0.0), c(0.0), c(-H)],
            BellState::PsiPlus => [c(0.0), c(H), c(H), c(0.0)],
            BellState::PsiMinus => [c(0.0), c(H), c(-H), c(0.0)],
        }
    }

    /// Bell label after a single-qubit Pauli on either particle, up to global
    /// phase: σ_x flips the parity bit, σ_z the phase bit, iσ_y both.
    pub fn with_pauli(self, pauli: Gate) -> Self {
        let (flip_parity, flip_phase) = match pauli {
            Gate::I => (false, false),
            Gate::SigmaX => (true, false),
            Gate::SigmaZ => (false, true),
            Gate::ISigmaY => (true, true),
            other => panic!("{} is not a single-qubit Pauli", other.name()),
        };
        Self::from_bits(self.parity() ^ flip_parity, self.phase() ^ flip_phase)
    }

    /// Product state left by CNOT (first particle controls): the control ends in
    /// |±⟩ carrying the phase bit, the target in |0⟩/|1⟩ carrying the parity bit.
    pub fn after_cnot(self) -> (BasisState, BasisState) {
        (
            BasisState::new(Basis::X, self.phase()),
            BasisState::new(Basis::Z, self.parity()),
        )
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The four four-particle GHZ states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GhzState {
    G1,
    G2,
    G3,
    G4,
}

impl GhzState {
    pub const ALL: [GhzState; 4] = [GhzState::G1, GhzState::G2, GhzState::G3, GhzState::G4];

    pub fn amplitudes(self) -> [Complex64; 16] {
        let (lo, hi, sign) = match self {
            GhzState::G1 => (0b0000, 0b1111, 1.0),
            GhzState::G2 => (0b0001, 0b1110, -1.0),
            GhzState::G3 => (0b0101, 0b1010, 1.0),
            GhzState::G4 => (0b0100, 0b1011, -1.0),
        };
        let mut amps = [c(0.0); 16];
        amps[lo] = c(H);
        amps[hi] = c(sign * H);
        amps
    }

    /// `(a,b)` Bell state and `(c,d)` Z⊗Z bits left by CNOT(b→c)·CNOT(b→d).
    pub fn after_double_cnot(self) -> (BellState, (bool, bool)) {
        match self {
            GhzState::G1 => (BellState::PhiPlus, (false, false)),
            GhzState::G2 => (BellState::PhiMinus, (false, true)),
            GhzState::G3 => (BellState::PsiPlus, (true, false)),
            GhzState::G4 => (BellState::PsiMinus, (true, true)),
        }
    }
}

impl fmt::Display for GhzState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn prepare_bell(kind: BellState, labels: [ParticleLabel; 2]) -> Result<StateVector, QError> {
    StateVector::new(labels.to_vec(), kind.amplitudes().to_vec())
}

/// `(1/2)(|001⟩ + |010⟩ − |100⟩ + |111⟩)`, i.e.
/// `(1/√2)(|0⟩_a|ψ+⟩_bc − |1⟩_a|φ−⟩_bc)`.
pub fn prepare_w(labels: [ParticleLabel; 3]) -> Result<StateVector, QError> {
    let mut amps = vec![c(0.0); 8];
    amps[0b001] = c(0.5);
    amps[0b010] = c(0.5);
    amps[0b100] = c(-0.5);
    amps[0b111] = c(0.5);
    StateVector::new(labels.to_vec(), amps)
}

pub fn prepare_ghz4(kind: GhzState, labels: [ParticleLabel; 4]) -> Result<StateVector, QError> {
    StateVector::new(labels.to_vec(), kind.amplitudes().to_vec())
}

pub fn prepare_basis_state(state: BasisState, label: ParticleLabel) -> StateVector {
    StateVector::new(vec![label], state.amplitudes().to_vec()).expect("single-qubit eigenstates are normalized")
}
