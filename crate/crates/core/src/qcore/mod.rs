//! Small statevector engine: labeled qubits, the protocol gates, and
//! projective measurement in the Z, X, Bell and Z⊗Z bases.

mod gate;
mod label;
mod measure;
mod prepare;
mod register;
mod state;

use thiserror::Error;

pub use gate::{Gate, GateMatrix};
pub use label::{ParticleLabel, Purpose, Role};
pub use measure::{sample_index, Basis, BasisState, Chooser, MeasurementOutcome};
pub use prepare::{prepare_basis_state, prepare_bell, prepare_ghz4, prepare_w, BellState, GhzState};
pub use register::Register;
pub use state::StateVector;

/// Registers never exceed this many entangled qubits.
pub const MAX_QUBITS: usize = 5;
/// Tolerance for amplitude and overlap comparisons.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;
/// Tolerance for the unit-norm invariant.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(ParticleLabel),
    #[error("unknown qubit label {0}")]
    UnknownLabel(ParticleLabel),
    #[error("expected {expected} targets, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expected {expected} amplitudes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state has squared norm {0}")]
    NotNormalized(f64),
    #[error("states are over different qubits")]
    LabelSetMismatch,
    #[error("{0} qubits exceeds the register limit")]
    TooManyQubits(usize),
}

pub fn apply_gate(state: StateVector, gate: Gate, targets: &[ParticleLabel]) -> Result<StateVector, QError> {
    state.with_gate(gate, targets)
}

pub fn measure<C: Chooser + ?Sized>(
    state: &StateVector,
    targets: &[ParticleLabel],
    basis: Basis,
    chooser: &mut C,
) -> Result<MeasurementOutcome, QError> {
    state.measure(targets, basis, chooser)
}

pub fn equal_up_to_global_phase(s1: &StateVector, s2: &StateVector) -> Result<bool, QError> {
    s1.equal_up_to_global_phase(s2)
}
