use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gates::matrix_of;
use crate::linalg::{check_targets, digit, Matrix, C64, ONE};

/// Amplitudes below this are dropped after each gate.
const PRUNE: f64 = 1e-14;

/// Statevector stored as a map from basis index to amplitude.
///
/// Cost scales with the number of populated basis states rather than `3^n`,
/// so it handles large registers as long as the circuit branches little.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    n: usize,
    amps: BTreeMap<u64, C64>,
}

impl SparseState {
    pub fn basis(n: usize, index: u64) -> Self {
        SparseState {
            n,
            amps: BTreeMap::from([(index, ONE)]),
        }
    }

    pub fn amplitude(&self, index: u64) -> C64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.amps.iter().map(|(&i, &z)| (i, z))
    }

    pub fn norm(&self) -> f64 {
        self.amps.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_matrix(&mut self, m: &Matrix, targets: &[usize]) -> Result<()> {
        check_targets(targets, self.n)?;
        let n = self.n;
        let strides: Vec<u64> = targets.iter().map(|&t| 3u64.pow((n - 1 - t) as u32)).collect();
        let mut next: BTreeMap<u64, C64> = BTreeMap::new();
        for (&index, &amp) in &self.amps {
            let ds: Vec<u64> = targets.iter().map(|&t| digit(index, t, n) as u64).collect();
            let col = ds.iter().fold(0usize, |acc, &d| acc * 3 + d as usize);
            let base = index - ds.iter().zip(&strides).map(|(d, s)| d * s).sum::<u64>();
            for row in 0..m.dim() {
                let z = m.get(row, col);
                if z.norm() == 0.0 {
                    continue;
                }
                let mut rest = row as u64;
                let mut offset = 0;
                for s in strides.iter().rev() {
                    offset += (rest % 3) * s;
                    rest /= 3;
                }
                *next.entry(base + offset).or_default() += z * amp;
            }
        }
        next.retain(|_, z| z.norm() > PRUNE);
        self.amps = next;
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        for op in &circuit.ops {
            self.apply_matrix(&matrix_of(&op.gate), &op.targets)?;
        }
        Ok(())
    }
}
