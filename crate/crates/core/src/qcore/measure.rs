use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prepare::BellState;
use super::state::StateVector;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Source of outcome selections for a projective measurement.
///
/// `weights` are the Born probabilities of each outcome; the implementation
/// returns an index whose weight is strictly positive.
pub trait Chooser {
    fn choose(&mut self, weights: &[f64]) -> usize;
}

impl<R: Rng + ?Sized> Chooser for R {
    fn choose(&mut self, weights: &[f64]) -> usize {
        let u: f64 = self.random();
        sample_index(u, weights)
    }
}

/// Inverse-CDF pick of `u ∈ [0, 1)` over unnormalized `weights`, never landing
/// on a zero-weight index.
pub fn sample_index(u: f64, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last_positive = Some(i);
        if target < acc {
            return i;
        }
    }
    last_positive.expect("at least one outcome must have positive weight")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
    Bell,
    ZZ,
}

impl Basis {
    pub fn arity(self) -> usize {
        match self {
            Basis::Z | Basis::X => 1,
            Basis::Bell | Basis::ZZ => 2,
        }
    }

    pub fn outcome_symbols(self) -> &'static [&'static str] {
        match self {
            Basis::Z => &["0", "1"],
            Basis::X => &["+", "-"],
            Basis::Bell => &["phi+", "phi-", "psi+", "psi-"],
            Basis::ZZ => &["00", "01", "10", "11"],
        }
    }

    /// Basis vectors over the measured qubits, in outcome order.
    pub fn vectors(self) -> Vec<Vec<Complex64>> {
        let c = |x: f64| Complex64::new(x, 0.0);
        let h = FRAC_1_SQRT_2;
        match self {
            Basis::Z => vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
            Basis::X => vec![vec![c(h), c(h)], vec![c(h), c(-h)]],
            Basis::Bell => BellState::ALL.iter().map(|b| b.amplitudes().to_vec()).collect(),
            Basis::ZZ => (0..4)
                .map(|k| (0..4).map(|i| c(if i == k { 1.0 } else { 0.0 })).collect())
                .collect(),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Basis::Z => "Z",
            Basis::X => "X",
            Basis::Bell => "BELL",
            Basis::ZZ => "ZZ",
        };
        f.write_str(s)
    }
}

/// An eigenstate of either single-qubit measuring basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisState {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl BasisState {
    pub const ALL: [BasisState; 4] = [BasisState::Zero, BasisState::One, BasisState::Plus, BasisState::Minus];

    pub fn new(basis: Basis, bit: bool) -> Self {
        match (basis, bit) {
            (Basis::Z, false) => BasisState::Zero,
            (Basis::Z, true) => BasisState::One,
            (Basis::X, false) => BasisState::Plus,
            (Basis::X, true) => BasisState::Minus,
            (other, _) => panic!("{other} is not a single-qubit basis"),
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            BasisState::Zero | BasisState::One => Basis::Z,
            BasisState::Plus | BasisState::Minus => Basis::X,
        }
    }

    /// `0` for |0⟩ and |+⟩, `1` for |1⟩ and |−⟩.
    pub fn bit(self) -> bool {
        matches!(self, BasisState::One | BasisState::Minus)
    }

    pub fn flipped(self) -> Self {
        Self::new(self.basis(), !self.bit())
    }

    pub fn symbol(self) -> &'static str {
        self.basis().outcome_symbols()[self.bit() as usize]
    }

    pub fn parse(symbol: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.symbol() == symbol)
    }

    pub fn amplitudes(self) -> [Complex64; 2] {
        let v = self.basis().vectors();
        let row = &v[self.bit() as usize];
        [row[0], row[1]]
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub basis: Basis,
    pub index: usize,
    /// Born probability of `index` at sampling time.
    pub probability: f64,
    /// Post-measurement state of the unmeasured qubits.
    pub collapsed: StateVector,
}

impl MeasurementOutcome {
    pub fn symbol(&self) -> &'static str {
        self.basis.outcome_symbols()[self.index]
    }

    /// Eigenstate observed by a Z or X measurement.
    pub fn basis_state(&self) -> Option<BasisState> {
        match self.basis {
            Basis::Z | Basis::X => Some(BasisState::new(self.basis, self.index == 1)),
            _ => None,
        }
    }

    pub fn bell_state(&self) -> Option<BellState> {
        (self.basis == Basis::Bell).then(|| BellState::ALL[self.index])
    }

    /// The two bits read by a Z⊗Z measurement.
    pub fn zz_bits(&self) -> Option<(bool, bool)> {
        (self.basis == Basis::ZZ).then_some((self.index & 2 != 0, self.index & 1 != 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    }

    #[test]
    fn every_basis_is_orthonormal_and_complete() {
        for basis in [Basis::Z, Basis::X, Basis::Bell, Basis::ZZ] {
            let vs = basis.vectors();
            let dim = 1 << basis.arity();
            assert_eq!(vs.len(), dim);
            assert_eq!(basis.outcome_symbols().len(), dim);
            for (i, u) in vs.iter().enumerate() {
                for (j, v) in vs.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((inner(u, v) - want).norm() < 1e-12, "{basis} {i} {j}");
                }
            }
            // Σ_k |e_k⟩⟨e_k| = I
            for r in 0..dim {
                for c in 0..dim {
                    let s: Complex64 = vs.iter().map(|e| e[r] * e[c].conj()).sum();
                    let want = if r == c { 1.0 } else { 0.0 };
                    assert!((s - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn basis_state_symbols_round_trip() {
        for s in BasisState::ALL {
            assert_eq!(BasisState::parse(s.symbol()), Some(s));
            assert_eq!(s.flipped().flipped(), s);
            assert_eq!(s.flipped().basis(), s.basis());
        }
        assert_eq!(BasisState::parse("phi+"), None);
    }

    #[test]
    fn sample_index_skips_zero_weights() {
        assert_eq!(sample_index(0.0, &[0.0, 1.0]), 1);
        assert_eq!(sample_index(0.999_999, &[1.0, 0.0]), 0);
        assert_eq!(sample_index(0.49, &[0.5, 0.5]), 0);
        assert_eq!(sample_index(0.51, &[0.5, 0.5]), 1);
        assert_eq!(sample_index(0.9, &[0.25, 0.25, 0.25, 0.25]), 3);
    }
}
