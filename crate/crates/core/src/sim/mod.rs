//! Exact simulation of qutrit circuits.
//!
//! Three backends share the same gate semantics:
//! - [`QutritState`]: dense `3^n` statevector.
//! - [`BasisRunner`]: follows a single basis state through circuits whose
//!   gates all map basis states to basis states up to a phase, recording a
//!   per-gate digit trace.
//! - [`SparseState`]: amplitude map for circuits that branch only a little
//!   (the single-qutrit basis changes around a `C^{N-1}X`).

mod basis;
mod sparse;
mod state;

pub use basis::{replay, run_basis, BasisPath, BasisRunner, TraceEvent};
pub use sparse::SparseState;
pub use state::{apply, QutritState};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{pow3, Matrix, MAX_DENSE_QUTRITS};

/// True when `index` has a `|2>` digit in an `n`-qutrit register.
pub fn has_ancilla_digit(mut index: u64, n: usize) -> bool {
    for _ in 0..n {
        if index % 3 == 2 {
            return true;
        }
        index /= 3;
    }
    false
}

/// Full `3^n x 3^n` unitary of a circuit, built column by column.
pub fn full_unitary(circuit: &Circuit) -> Result<Matrix> {
    if circuit.n > MAX_DENSE_QUTRITS {
        return Err(Error::BudgetExceeded {
            n: circuit.n,
            max: MAX_DENSE_QUTRITS,
        });
    }
    let dim = pow3(circuit.n);
    let mut out = Matrix::zeros(dim);
    for col in 0..dim {
        let mut state = QutritState::basis(circuit.n, col as u64);
        state.run(circuit)?;
        for (row, &amp) in state.amps().iter().enumerate() {
            out.set(row, col, amp);
        }
    }
    Ok(out)
}
