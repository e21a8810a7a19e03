use super::gate::Gate;
use super::label::ParticleLabel;
use super::measure::{Basis, Chooser, MeasurementOutcome};
use super::state::StateVector;
use super::QError;

/// Every qubit alive in a run, held as a list of mutually unentangled
/// subsystems. Gates spanning several subsystems merge them first.
#[derive(Debug, Clone, Default)]
pub struct Register {
    groups: Vec<StateVector>,
}

impl Register {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, state: StateVector) -> Result<(), QError> {
        if let Some(dup) = state.labels().iter().find(|l| self.contains(l)) {
            return Err(QError::DuplicateLabel(*dup));
        }
        if state.num_qubits() > 0 {
            self.groups.push(state);
        }
        Ok(())
    }

    pub fn contains(&self, label: &ParticleLabel) -> bool {
        self.groups.iter().any(|g| g.contains(label))
    }

    pub fn num_qubits(&self) -> usize {
        self.groups.iter().map(|g| g.num_qubits()).sum()
    }

    fn group_index(&self, label: &ParticleLabel) -> Result<usize, QError> {
        self.groups
            .iter()
            .position(|g| g.contains(label))
            .ok_or(QError::UnknownLabel(*label))
    }

    /// The subsystem holding `label`.
    pub fn subsystem(&self, label: &ParticleLabel) -> Result<&StateVector, QError> {
        Ok(&self.groups[self.group_index(label)?])
    }

    /// Merges the subsystems holding `labels` into one and returns its index.
    fn gather(&mut self, labels: &[ParticleLabel]) -> Result<usize, QError> {
        let mut idx: Vec<usize> = labels.iter().map(|l| self.group_index(l)).collect::<Result<_, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        let first = idx[0];
        for &other in idx[1..].iter().rev() {
            let g = self.groups.remove(other);
            self.groups[first] = self.groups[first].tensor(&g)?;
        }
        Ok(first)
    }

    pub fn apply(&mut self, gate: Gate, targets: &[ParticleLabel]) -> Result<(), QError> {
        if targets.len() != gate.arity() {
            return Err(QError::ArityMismatch {
                expected: gate.arity(),
                got: targets.len(),
            });
        }
        let g = self.gather(targets)?;
        self.groups[g].apply(gate, targets)
    }

    /// Measures and removes `targets` from the register.
    pub fn measure<C: Chooser + ?Sized>(
        &mut self,
        targets: &[ParticleLabel],
        basis: Basis,
        chooser: &mut C,
    ) -> Result<MeasurementOutcome, QError> {
        if targets.len() != basis.arity() {
            return Err(QError::ArityMismatch {
                expected: basis.arity(),
                got: targets.len(),
            });
        }
        let g = self.gather(targets)?;
        let outcome = self.groups[g].measure(targets, basis, chooser)?;
        if outcome.collapsed.num_qubits() == 0 {
            self.groups.remove(g);
        } else {
            self.groups[g] = outcome.collapsed.clone();
        }
        Ok(outcome)
    }

    /// Joint state of `labels` if they form a subsystem on their own (no
    /// entanglement with anything else), in the given order.
    pub fn isolated_state(&self, labels: &[ParticleLabel]) -> Result<Option<StateVector>, QError> {
        let mut idx: Vec<usize> = labels.iter().map(|l| self.group_index(l)).collect::<Result<_, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        let mut joint = StateVector::empty();
        for i in idx {
            let g = &self.groups[i];
            if g.labels().iter().any(|l| !labels.contains(l)) {
                return Ok(None);
            }
            joint = joint.tensor(g)?;
        }
        joint.reordered(labels).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::label::Role;
    use crate::qcore::measure::BasisState;
    use crate::qcore::prepare::{prepare_basis_state, prepare_bell, BellState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gates_across_groups_merge_them() {
        let a = ParticleLabel::message(0, Role::A);
        let b = ParticleLabel::message(0, Role::B);
        let mut reg = Register::new();
        reg.insert(prepare_basis_state(BasisState::Plus, a)).unwrap();
        reg.insert(prepare_basis_state(BasisState::Zero, b)).unwrap();
        reg.apply(Gate::Cnot, &[a, b]).unwrap();
        let joint = reg.isolated_state(&[a, b]).unwrap().unwrap();
        let phi = prepare_bell(BellState::PhiPlus, [a, b]).unwrap();
        assert!(joint.equal_up_to_global_phase(&phi).unwrap());
    }

    #[test]
    fn measurement_removes_qubits() {
        let a = ParticleLabel::message(0, Role::A);
        let b = ParticleLabel::message(0, Role::B);
        let mut reg = Register::new();
        reg.insert(prepare_bell(BellState::PsiMinus, [a, b]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = reg.measure(&[a], Basis::Z, &mut rng).unwrap();
        assert!(!reg.contains(&a));
        let rest = reg.isolated_state(&[b]).unwrap().unwrap();
        let want = prepare_basis_state(BasisState::new(Basis::Z, out.index == 0), b);
        assert!(rest.equal_up_to_global_phase(&want).unwrap());
        assert!(matches!(reg.insert(want), Err(QError::DuplicateLabel(_))));
    }
}
