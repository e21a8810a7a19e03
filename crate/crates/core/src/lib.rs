//! Statevector simulation of three quantum-dialogue protocols (Bell pairs,
//! W states and four-particle GHZ states), with transcript recording,
//! eavesdropper models and leakage analysis.

pub mod analysis;
pub mod bits;
pub mod channel;
pub mod choice;
pub mod protocol;
pub mod qcore;

pub use bits::Bits;
pub use channel::{AdversaryKind, AdversaryModel, Transcript};
pub use protocol::ProtocolKind;
