use crate::circuit::Circuit;
use crate::error::Result;
use crate::gates::{matrix_of, Gate};
use crate::linalg::{check_targets, pow3, Matrix, C64, ONE, ZERO};

/// Dense statevector of `n` qutrits, qutrit 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct QutritState {
    n: usize,
    amps: Vec<C64>,
}

impl QutritState {
    pub fn basis(n: usize, index: u64) -> Self {
        let mut amps = vec![ZERO; pow3(n)];
        amps[index as usize] = ONE;
        QutritState { n, amps }
    }

    /// Builds a state from raw amplitudes; `amps.len()` must be `3^n`.
    pub fn from_amps(n: usize, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), pow3(n), "amplitude count must be 3^n");
        QutritState { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest amplitude modulus on a basis state containing a `|2>` digit.
    pub fn leakage(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| super::has_ancilla_digit(*i as u64, self.n))
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply_gate(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        self.apply_matrix(&matrix_of(gate), targets)
    }

    pub fn apply_matrix(&mut self, m: &Matrix, targets: &[usize]) -> Result<()> {
        check_targets(targets, self.n)?;
        let k = targets.len();
        if m.dim() != pow3(k) {
            return Err(crate::Error::DimensionMismatch {
                left: m.dim(),
                right: pow3(k),
            });
        }
        let strides: Vec<usize> = targets.iter().map(|&t| pow3(self.n - 1 - t)).collect();
        let offsets: Vec<usize> = (0..m.dim())
            .map(|local| {
                let mut rest = local;
                let mut off = 0;
                for s in strides.iter().rev() {
                    off += (rest % 3) * s;
                    rest /= 3;
                }
                off
            })
            .collect();
        let mut gathered = vec![ZERO; m.dim()];
        for base in 0..self.amps.len() {
            if strides.iter().any(|&s| (base / s) % 3 != 0) {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base + off];
            }
            for (row, off) in offsets.iter().enumerate() {
                self.amps[base + off] = (0..m.dim()).map(|col| m.get(row, col) * gathered[col]).sum();
            }
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        for op in &circuit.ops {
            self.apply_gate(&op.gate, &op.targets)?;
        }
        Ok(())
    }
}

/// Functional form of [`QutritState::apply_gate`].
pub fn apply(state: &QutritState, gate: &Gate, targets: &[usize]) -> Result<QutritState> {
    let mut out = state.clone();
    out.apply_gate(gate, targets)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Core;
    use crate::linalg::{index_of, I};

    fn idx(ds: &[u8]) -> u64 {
        index_of(ds)
    }

    #[test]
    fn iswap_on_11() {
        let s = QutritState::basis(2, idx(&[1, 1]));
        let out = apply(&s, &Gate::Iswap(Core::Iswap02, 0.0), &[0, 1]).unwrap();
        assert!((out.amps()[idx(&[0, 2]) as usize] + I).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-12);
        assert_eq!(out.leakage(), 1.0);
    }

    #[test]
    fn cz_leaves_ground_state() {
        let s = QutritState::basis(3, 0);
        assert_eq!(apply(&s, &Gate::Cz, &[1, 2]).unwrap(), s);
    }

    #[test]
    fn u_on_leading_pair_of_111() {
        let s = QutritState::basis(3, idx(&[1, 1, 1]));
        let out = apply(&s, &Gate::U(Core::Iswap02), &[0, 1]).unwrap();
        assert!((out.amps()[idx(&[1, 0, 1]) as usize] - ONE).norm() < 1e-15);
    }

    #[test]
    fn reversed_targets() {
        let s = QutritState::basis(2, idx(&[1, 1]));
        let out = apply(&s, &Gate::Iswap(Core::Iswap02, 0.0), &[1, 0]).unwrap();
        assert!((out.amps()[idx(&[2, 0]) as usize] + I).norm() < 1e-15);
    }

    #[test]
    fn invalid_targets() {
        let s = QutritState::basis(2, 0);
        assert!(apply(&s, &Gate::Cz, &[0, 2]).is_err());
        assert!(apply(&s, &Gate::X01, &[0, 1]).is_err());
    }

    #[test]
    fn matches_embedded_matrix() {
        use crate::linalg::embed;
        let g = Gate::Rot(crate::gates::Rotation::R02y, 0.83);
        let m = matrix_of(&g);
        for target in 0..3 {
            let full = embed(&m, &[target], 3).unwrap();
            for col in 0..27u64 {
                let out = apply(&QutritState::basis(3, col), &g, &[target]).unwrap();
                for (row, z) in out.amps().iter().enumerate() {
                    assert!((z - full.get(row, col as usize)).norm() < 1e-14);
                }
            }
        }
    }
}
