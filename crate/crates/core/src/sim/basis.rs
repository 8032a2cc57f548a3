use std::fmt;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{matrix_of, Gate};
use crate::linalg::{digit, Matrix, C64, ONE};

/// A column counts as permutation-like when exactly one entry exceeds this.
const BASIS_THRESHOLD: f64 = 1.0 - 1e-9;

/// Output of a basis-state run: a single basis index times a phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPath {
    pub index: u64,
    pub phase: C64,
}

/// Digit transition of one op on its targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub op: usize,
    pub gate: String,
    pub targets: Vec<usize>,
    pub input: Vec<u8>,
    pub output: Vec<u8>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let targets: Vec<String> = self.targets.iter().map(|t| t.to_string()).collect();
        let digits = |ds: &[u8]| ds.iter().map(|d| char::from(b'0' + d)).collect::<String>();
        write!(
            f,
            "{}, {}, {}, {}, {}",
            self.op,
            self.gate,
            targets.join(" "),
            digits(&self.input),
            digits(&self.output)
        )
    }
}

/// Basis-path simulator with the circuit's gate matrices precomputed.
pub struct BasisRunner<'a> {
    circuit: &'a Circuit,
    matrices: Vec<Matrix>,
    strides: Vec<Vec<u64>>,
}

impl<'a> BasisRunner<'a> {
    pub fn new(circuit: &'a Circuit) -> Self {
        let n = circuit.n;
        BasisRunner {
            circuit,
            matrices: circuit.ops.iter().map(|op| matrix_of(&op.gate)).collect(),
            strides: circuit
                .ops
                .iter()
                .map(|op| op.targets.iter().map(|&t| 3u64.pow((n - 1 - t) as u32)).collect())
                .collect(),
        }
    }

    /// Whether every gate in the circuit maps basis states to basis states.
    pub fn is_permutation_circuit(&self) -> bool {
        self.matrices
            .iter()
            .all(|m| (0..m.dim()).all(|col| m.column(col).filter(|z| z.norm() > BASIS_THRESHOLD).count() == 1))
    }

    pub fn run(&self, input: u64) -> Result<BasisPath> {
        self.walk(input, None)
    }

    pub fn run_traced(&self, input: u64) -> Result<(BasisPath, Vec<TraceEvent>)> {
        let mut trace = Vec::with_capacity(self.circuit.ops.len());
        let path = self.walk(input, Some(&mut trace))?;
        Ok((path, trace))
    }

    fn walk(&self, input: u64, mut trace: Option<&mut Vec<TraceEvent>>) -> Result<BasisPath> {
        let n = self.circuit.n;
        let mut index = input;
        let mut phase = ONE;
        for (i, op) in self.circuit.ops.iter().enumerate() {
            let m = &self.matrices[i];
            let strides = &self.strides[i];
            let in_digits: Vec<u8> = op.targets.iter().map(|&t| digit(index, t, n)).collect();
            let col = in_digits.iter().fold(0usize, |acc, &d| acc * 3 + d as usize);
            let mut hit = None;
            for (row, z) in m.column(col).enumerate() {
                if z.norm() > BASIS_THRESHOLD {
                    if hit.is_some() {
                        return Err(mismatch(i, &op.gate));
                    }
                    hit = Some((row, z));
                }
            }
            let (row, z) = hit.ok_or_else(|| mismatch(i, &op.gate))?;
            let mut rest = row;
            let mut out_digits = vec![0u8; op.targets.len()];
            for slot in out_digits.iter_mut().rev() {
                *slot = (rest % 3) as u8;
                rest /= 3;
            }
            for ((&d_in, &d_out), &stride) in in_digits.iter().zip(&out_digits).zip(strides) {
                index = index - d_in as u64 * stride + d_out as u64 * stride;
            }
            phase *= z;
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceEvent {
                    op: i,
                    gate: op.gate.name(),
                    targets: op.targets.clone(),
                    input: in_digits,
                    output: out_digits,
                });
            }
        }
        Ok(BasisPath { index, phase })
    }
}

fn mismatch(op: usize, gate: &Gate) -> Error {
    Error::BackendMismatch {
        op,
        gate: gate.to_string(),
    }
}

/// Runs `circuit` on basis state `input`, returning the output path and the
/// per-op digit trace.
pub fn run_basis(circuit: &Circuit, input: u64) -> Result<(BasisPath, Vec<TraceEvent>)> {
    BasisRunner::new(circuit).run_traced(input)
}

/// Replays a trace on `input`, returning the final basis index.
pub fn replay(trace: &[TraceEvent], input: u64, n: usize) -> u64 {
    let mut ds = crate::linalg::digits(input, n);
    for ev in trace {
        for ((&t, &d_in), &d_out) in ev.targets.iter().zip(&ev.input).zip(&ev.output) {
            assert_eq!(ds[t], d_in, "trace out of sync at op {}", ev.op);
            ds[t] = d_out;
        }
    }
    crate::linalg::index_of(&ds)
}
