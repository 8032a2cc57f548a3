//! Synthesis of the generalized Toffoli (`C^{N-1}X`) and controlled-phase
//! (`C^{N-1}Z`) gates on qutrit hardware with an arbitrary coupling map.
//!
//! The decomposition folds a spanning tree of the selected qutrits onto the
//! root's children, injects a single `CZ`, and unfolds again, using `2N-3`
//! two-qutrit gates and no ancilla qutrits. Every synthesized circuit can be
//! checked against the ideal gate with the exact simulators in [`sim`] and
//! the oracle in [`verify`].

pub mod circuit;
mod error;
pub mod gates;
pub mod linalg;
pub mod lower;
pub mod sim;
pub mod synth;
pub mod topology;
pub mod verify;

pub use circuit::{Circuit, CircuitKind, CircuitOp, SynthStats};
pub use error::{Error, Result};
pub use gates::{Core, Gate};
pub use linalg::{Matrix, C64};
pub use topology::{Address, CouplingMap, Host2, RootedTree};
pub use verify::VerifyReport;
