use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The unitaries the three dialogue protocols need.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    I,
    SigmaX,
    SigmaZ,
    /// `iσ_y = |0⟩⟨1| − |1⟩⟨0|`, a real matrix.
    ISigmaY,
    /// Controlled-not; the first target is the control.
    Cnot,
    /// Exchange transformation `|00⟩⟨00| + |01⟩⟨10| + |10⟩⟨01| + |11⟩⟨11|`.
    Exchange,
}

/// Dense row-major unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    fn from_real(dim: usize, rows: &[f64]) -> Self {
        debug_assert_eq!(rows.len(), dim * dim);
        Self {
            dim,
            entries: rows.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Largest entry-wise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = ZERO;
                for k in 0..self.dim {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    pub fn mul(&self, other: &GateMatrix) -> GateMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let dim = self.dim;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = (0..dim).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        GateMatrix { dim, entries }
    }
}

impl Gate {
    pub const SINGLE_QUBIT: [Gate; 4] = [Gate::I, Gate::SigmaX, Gate::SigmaZ, Gate::ISigmaY];

    pub fn arity(self) -> usize {
        match self {
            Gate::I | Gate::SigmaX | Gate::SigmaZ | Gate::ISigmaY => 1,
            Gate::Cnot | Gate::Exchange => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::I => "I",
            Gate::SigmaX => "SIGMA_X",
            Gate::SigmaZ => "SIGMA_Z",
            Gate::ISigmaY => "I_SIGMA_Y",
            Gate::Cnot => "CNOT",
            Gate::Exchange => "U_EX",
        }
    }

    pub fn matrix(self) -> GateMatrix {
        match self {
            Gate::I => GateMatrix::from_real(2, &[1.0, 0.0, 0.0, 1.0]),
            Gate::SigmaX => GateMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]),
            Gate::SigmaZ => GateMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]),
            Gate::ISigmaY => GateMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]),
            #[rustfmt::skip]
            Gate::Cnot => GateMatrix::from_real(4, &[
                1.0, 0.0, 0.0, 0.0,
                0.0, 1.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 1.0,
                0.0, 0.0, 1.0, 0.0,
            ]),
            #[rustfmt::skip]
            Gate::Exchange => GateMatrix::from_real(4, &[
                1.0, 0.0, 0.0, 0.0,
                0.0, 0.0, 1.0, 0.0,
                0.0, 1.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 1.0,
            ]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Gate; 6] = [
        Gate::I,
        Gate::SigmaX,
        Gate::SigmaZ,
        Gate::ISigmaY,
        Gate::Cnot,
        Gate::Exchange,
    ];

    #[test]
    fn every_gate_is_unitary() {
        for gate in ALL {
            let m = gate.matrix();
            assert_eq!(m.dim(), 1 << gate.arity());
            assert!(m.unitarity_defect() < 1e-12, "{} not unitary", gate.name());
        }
    }

    #[test]
    fn exchange_squares_to_identity_and_is_swap() {
        let ex = Gate::Exchange.matrix();
        let sq = ex.mul(&ex);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(sq.get(i, j), Complex64::new(want, 0.0));
            }
        }
        // swap permutation on basis index (x, y) -> (y, x)
        for col in 0..4usize {
            let swapped = ((col & 1) << 1) | (col >> 1);
            assert_eq!(ex.get(swapped, col), ONE);
        }
    }

    #[test]
    fn i_sigma_y_is_z_times_x() {
        let zx = Gate::SigmaZ.matrix().mul(&Gate::SigmaX.matrix());
        assert_eq!(zx, Gate::ISigmaY.matrix());
    }
}
