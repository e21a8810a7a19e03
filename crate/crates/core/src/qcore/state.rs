use std::collections::HashSet;

use num_complex::Complex64;

use super::gate::Gate;
use super::label::ParticleLabel;
use super::measure::{Basis, Chooser, MeasurementOutcome};
use super::{QError, AMPLITUDE_TOLERANCE, NORM_TOLERANCE};

/// Normalized amplitudes over an ordered register of labeled qubits.
///
/// Basis index bit `n-1-k` belongs to `labels[k]`, so the leftmost symbol of a
/// ket is the first label.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<ParticleLabel>,
    amps: Vec<Complex64>,
}

fn check_unique(labels: &[ParticleLabel]) -> Result<(), QError> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(*l) {
            return Err(QError::DuplicateLabel(*l));
        }
    }
    Ok(())
}

impl StateVector {
    pub fn new(labels: Vec<ParticleLabel>, amps: Vec<Complex64>) -> Result<Self, QError> {
        check_unique(&labels)?;
        if labels.len() > super::MAX_QUBITS {
            return Err(QError::TooManyQubits(labels.len()));
        }
        if amps.len() != 1 << labels.len() {
            return Err(QError::DimensionMismatch {
                expected: 1 << labels.len(),
                got: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QError::NotNormalized(norm));
        }
        Ok(Self { labels, amps })
    }

    /// The zero-qubit state with amplitude 1.
    pub fn empty() -> Self {
        Self {
            labels: Vec::new(),
            amps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Computational basis state `|bits⟩`.
    pub fn computational(labels: Vec<ParticleLabel>, bits: &[bool]) -> Result<Self, QError> {
        if bits.len() != labels.len() {
            return Err(QError::ArityMismatch {
                expected: labels.len(),
                got: bits.len(),
            });
        }
        let index = bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(labels, amps)
    }

    pub fn labels(&self) -> &[ParticleLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: &ParticleLabel) -> bool {
        self.labels.contains(label)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn position(&self, label: &ParticleLabel) -> Result<usize, QError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or(QError::UnknownLabel(*label))
    }

    fn positions(&self, targets: &[ParticleLabel]) -> Result<Vec<usize>, QError> {
        check_unique(targets)?;
        targets.iter().map(|t| self.position(t)).collect()
    }

    fn mask(&self, pos: usize) -> usize {
        1 << (self.labels.len() - 1 - pos)
    }

    /// `self ⊗ other`, with `other`'s qubits appended after ours.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QError> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_unique(&labels)?;
        if labels.len() > super::MAX_QUBITS {
            return Err(QError::TooManyQubits(labels.len()));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|x| other.amps.iter().map(move |y| x * y))
            .collect();
        Ok(StateVector { labels, amps })
    }

    /// The same state with qubits re-listed in `order`.
    pub fn reordered(&self, order: &[ParticleLabel]) -> Result<StateVector, QError> {
        if order.len() != self.labels.len() {
            return Err(QError::LabelSetMismatch);
        }
        let src: Vec<usize> = self.positions(order).map_err(|_| QError::LabelSetMismatch)?;
        let n = self.labels.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (new_index, amp) in amps.iter_mut().enumerate() {
            let mut old_index = 0;
            for (k, &p) in src.iter().enumerate() {
                if new_index >> (n - 1 - k) & 1 == 1 {
                    old_index |= self.mask(p);
                }
            }
            *amp = self.amps[old_index];
        }
        Ok(StateVector {
            labels: order.to_vec(),
            amps,
        })
    }

    /// `⟨self|other⟩`, aligning `other` to our label order first.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QError> {
        let aligned = other.reordered(&self.labels)?;
        Ok(self.amps.iter().zip(&aligned.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// True iff `|⟨self|other⟩| = 1` within the amplitude tolerance.
    pub fn equal_up_to_global_phase(&self, other: &StateVector) -> Result<bool, QError> {
        Ok((self.inner(other)?.norm() - 1.0).abs() <= AMPLITUDE_TOLERANCE)
    }

    pub fn apply(&mut self, gate: Gate, targets: &[ParticleLabel]) -> Result<(), QError> {
        if targets.len() != gate.arity() {
            return Err(QError::ArityMismatch {
                expected: gate.arity(),
                got: targets.len(),
            });
        }
        let pos = self.positions(targets)?;
        let masks: Vec<usize> = pos.iter().map(|&p| self.mask(p)).collect();
        let matrix = gate.matrix();
        let sub = matrix.dim();
        let target_mask: usize = masks.iter().sum();
        let spread = |s: usize| -> usize {
            masks
                .iter()
                .enumerate()
                .filter(|(k, _)| s >> (masks.len() - 1 - k) & 1 == 1)
                .map(|(_, m)| m)
                .sum()
        };
        let offsets: Vec<usize> = (0..sub).map(spread).collect();
        let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
        for base in (0..self.amps.len()).filter(|i| i & target_mask == 0) {
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                self.amps[base | off] = (0..sub).map(|col| matrix.get(row, col) * gathered[col]).sum();
            }
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        Ok(())
    }

    pub fn with_gate(mut self, gate: Gate, targets: &[ParticleLabel]) -> Result<Self, QError> {
        self.apply(gate, targets)?;
        Ok(self)
    }

    /// Projective measurement of `targets` in `basis`. The measured qubits are
    /// removed from the returned collapsed register.
    pub fn measure<C: Chooser + ?Sized>(
        &self,
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
        let branches = self.project_all(targets, basis)?;
        let weights: Vec<f64> = branches.iter().map(|(p, _)| *p).collect();
        let index = chooser.choose(&weights);
        let (probability, unnormalized) = branches.into_iter().nth(index).expect("index in range");
        debug_assert!(probability > 0.0);
        let scale = 1.0 / probability.sqrt();
        let rest_labels: Vec<ParticleLabel> = self.labels.iter().filter(|l| !targets.contains(l)).copied().collect();
        let collapsed = StateVector {
            labels: rest_labels,
            amps: unnormalized.into_iter().map(|a| a * scale).collect(),
        };
        Ok(MeasurementOutcome {
            basis,
            index,
            probability,
            collapsed,
        })
    }

    /// Born probabilities of each outcome without collapsing.
    pub fn probabilities(&self, targets: &[ParticleLabel], basis: Basis) -> Result<Vec<f64>, QError> {
        if targets.len() != basis.arity() {
            return Err(QError::ArityMismatch {
                expected: basis.arity(),
                got: targets.len(),
            });
        }
        Ok(self.project_all(targets, basis)?.into_iter().map(|(p, _)| p).collect())
    }

    /// For each basis vector `e_k`, the probability and the (unnormalized)
    /// vector `(⟨e_k| ⊗ I)|ψ⟩` over the remaining qubits.
    fn project_all(&self, targets: &[ParticleLabel], basis: Basis) -> Result<Vec<(f64, Vec<Complex64>)>, QError> {
        let pos = self.positions(targets)?;
        let masks: Vec<usize> = pos.iter().map(|&p| self.mask(p)).collect();
        let rest_masks: Vec<usize> = (0..self.labels.len())
            .filter(|p| !pos.contains(p))
            .map(|p| self.mask(p))
            .collect();
        let place = |value: usize, ms: &[usize]| -> usize {
            ms.iter()
                .enumerate()
                .filter(|(k, _)| value >> (ms.len() - 1 - k) & 1 == 1)
                .map(|(_, m)| m)
                .sum()
        };
        let rest_dim = 1 << rest_masks.len();
        Ok(basis
            .vectors()
            .into_iter()
            .map(|e| {
                let v: Vec<Complex64> = (0..rest_dim)
                    .map(|r| {
                        let base = place(r, &rest_masks);
                        e.iter()
                            .enumerate()
                            .map(|(s, coeff)| coeff.conj() * self.amps[base | place(s, &masks)])
                            .sum()
                    })
                    .collect();
                let p = v.iter().map(|a| a.norm_sqr()).sum::<f64>();
                // round-off below the amplitude tolerance is an impossible outcome
                let p = if p < AMPLITUDE_TOLERANCE * AMPLITUDE_TOLERANCE {
                    0.0
                } else {
                    p
                };
                (p, v)
            })
            .collect())
    }

    /// Whether the state factorizes across the cut `part | rest`, i.e. has
    /// Schmidt rank 1.
    pub fn is_product_across(&self, part: &[ParticleLabel]) -> Result<bool, QError> {
        let pos = self.positions(part)?;
        let mut order: Vec<ParticleLabel> = pos.iter().map(|&p| self.labels[p]).collect();
        order.extend(self.labels.iter().filter(|l| !part.contains(l)));
        let s = self.reordered(&order)?;
        let cols = 1 << (self.labels.len() - part.len());
        let rows = 1 << part.len();
        let m = |r: usize, c: usize| s.amps[r * cols + c];
        // rank one iff every 2×2 minor vanishes
        for r1 in 0..rows {
            for r2 in r1 + 1..rows {
                for c1 in 0..cols {
                    for c2 in c1 + 1..cols {
                        let minor = m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1);
                        if minor.norm() > AMPLITUDE_TOLERANCE {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
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

    fn a() -> ParticleLabel {
        ParticleLabel::message(0, Role::A)
    }
    fn b() -> ParticleLabel {
        ParticleLabel::message(0, Role::B)
    }

    #[test]
    fn rejects_bad_construction() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(matches!(
            StateVector::new(vec![a()], vec![one, one]),
            Err(QError::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::new(vec![a()], vec![one]),
            Err(QError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            StateVector::new(vec![a(), a()], vec![one, zero, zero, zero]),
            Err(QError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn cnot_uses_first_target_as_control() {
        let s = StateVector::computational(vec![a(), b()], &[true, false]).unwrap();
        let s = s.with_gate(Gate::Cnot, &[a(), b()]).unwrap();
        assert_eq!(s.amplitudes()[0b11], Complex64::new(1.0, 0.0));
        let s = StateVector::computational(vec![a(), b()], &[false, true]).unwrap();
        let s = s.with_gate(Gate::Cnot, &[b(), a()]).unwrap();
        assert_eq!(s.amplitudes()[0b11], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn apply_errors() {
        let mut s = prepare_bell(BellState::PhiPlus, [a(), b()]).unwrap();
        assert!(matches!(s.apply(Gate::Cnot, &[a()]), Err(QError::ArityMismatch { .. })));
        assert!(matches!(
            s.apply(Gate::SigmaX, &[ParticleLabel::message(9, Role::C)]),
            Err(QError::UnknownLabel(_))
        ));
    }

    #[test]
    fn reorder_and_tensor_agree() {
        let plus = prepare_basis_state(BasisState::Plus, a());
        let one = prepare_basis_state(BasisState::One, b());
        let ab = plus.tensor(&one).unwrap();
        let ba = one.tensor(&plus).unwrap();
        assert!((ab.inner(&ba).unwrap() - 1.0).norm() < 1e-12);
        assert_eq!(ba.reordered(&[a(), b()]).unwrap(), ab);
    }

    #[test]
    fn global_phase_comparison() {
        let plus = prepare_basis_state(BasisState::Plus, a());
        let minus = prepare_basis_state(BasisState::Minus, a());
        let neg_plus = StateVector::new(vec![a()], plus.amplitudes().iter().map(|x| -x).collect()).unwrap();
        assert!(plus.equal_up_to_global_phase(&neg_plus).unwrap());
        assert!(!plus.equal_up_to_global_phase(&minus).unwrap());
        // iσ_y|−⟩ = −|+⟩
        let flipped = minus.with_gate(Gate::ISigmaY, &[a()]).unwrap();
        assert!(flipped.equal_up_to_global_phase(&plus).unwrap());
        assert!(matches!(
            plus.equal_up_to_global_phase(&prepare_basis_state(BasisState::Plus, b())),
            Err(QError::LabelSetMismatch)
        ));
    }

    #[test]
    fn measuring_an_eigenstate_is_certain() {
        let zero = prepare_basis_state(BasisState::Zero, a());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let out = zero.measure(&[a()], Basis::Z, &mut rng).unwrap();
            assert_eq!(out.symbol(), "0");
            assert_eq!(out.probability, 1.0);
            assert_eq!(out.collapsed.num_qubits(), 0);
        }
    }

    #[test]
    fn measuring_one_half_of_a_bell_pair_collapses_the_other() {
        let s = prepare_bell(BellState::PhiPlus, [a(), b()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let out = s.measure(&[a()], Basis::Z, &mut rng).unwrap();
            assert!((out.probability - 0.5).abs() < 1e-12);
            let partner = out.collapsed.measure(&[b()], Basis::Z, &mut rng).unwrap();
            assert_eq!(partner.index, out.index);
        }
    }

    #[test]
    fn measure_arity_checked() {
        let s = prepare_bell(BellState::PhiPlus, [a(), b()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            s.measure(&[a()], Basis::Bell, &mut rng),
            Err(QError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn product_detection() {
        let bell = prepare_bell(BellState::PsiMinus, [a(), b()]).unwrap();
        assert!(!bell.is_product_across(&[a()]).unwrap());
        let prod = prepare_basis_state(BasisState::Minus, a())
            .tensor(&prepare_basis_state(BasisState::One, b()))
            .unwrap();
        assert!(prod.is_product_across(&[b()]).unwrap());
    }
}
