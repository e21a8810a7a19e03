use std::fmt;

use serde::{Deserialize, Serialize};

/// Which particle of a pair, triple or quartet a qubit is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
    C,
    D,
}

impl Role {
    pub fn as_char(self) -> char {
        match self {
            Role::A => 'a',
            Role::B => 'b',
            Role::C => 'c',
            Role::D => 'd',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Purpose {
    Message,
    Check,
    Decoy,
}

/// Identity of a single qubit in a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParticleLabel {
    pub index: u32,
    pub role: Role,
    pub purpose: Purpose,
}

impl ParticleLabel {
    pub const fn new(index: u32, role: Role, purpose: Purpose) -> Self {
        Self { index, role, purpose }
    }

    pub const fn message(index: u32, role: Role) -> Self {
        Self::new(index, role, Purpose::Message)
    }

    pub const fn check(index: u32, role: Role) -> Self {
        Self::new(index, role, Purpose::Check)
    }

    /// Decoys are lone qubits, so their role is always `a`.
    pub const fn decoy(index: u32) -> Self {
        Self::new(index, Role::A, Purpose::Decoy)
    }
}

impl fmt::Display for ParticleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.purpose {
            Purpose::Message => write!(f, "{}{}", self.role.as_char(), self.index),
            Purpose::Check => write!(f, "check:{}{}", self.role.as_char(), self.index),
            Purpose::Decoy => write!(f, "decoy:{}", self.index),
        }
    }
}
