//! Oracle checks of synthesized circuits against the ideal `C^{N-1}Z` and
//! `C^{N-1}X` truth tables.

use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, CircuitKind, SynthStats};
use crate::linalg::{digits, C64, ONE, ZERO};
use crate::sim::{has_ancilla_digit, BasisRunner, QutritState, SparseState};
use crate::synth::{synthesize, Target};
use crate::topology::CouplingMap;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Registers up to this size are also run through the dense simulator.
pub const DENSE_CROSS_CHECK_MAX: usize = 5;

/// Ideal output bits and sign for qubit input `bits`.
///
/// `C^{N-1}Z` keeps every input and negates the all-ones state;
/// `C^{N-1}X` flips the target bit when every other bit is one.
pub fn ideal_phase(kind: CircuitKind, bits: &[u8]) -> (Vec<u8>, f64) {
    match kind {
        CircuitKind::Cnz => {
            let sign = if bits.iter().all(|&b| b == 1) { -1.0 } else { 1.0 };
            (bits.to_vec(), sign)
        }
        CircuitKind::Cnx { target } => {
            let mut out = bits.to_vec();
            if bits.iter().enumerate().all(|(i, &b)| i == target || b == 1) {
                out[target] ^= 1;
            }
            (out, 1.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub input: String,
    pub expected: String,
    pub expected_amplitude: [f64; 2],
    /// Largest-amplitude output basis state (ternary digits).
    pub got: String,
    pub got_amplitude: [f64; 2],
    pub error: f64,
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    pub tolerance: f64,
    pub inputs_checked: usize,
    pub backend: &'static str,
    pub dense_cross_check: bool,
    pub max_amplitude_error: f64,
    pub max_leakage: f64,
    /// Common phase of all outputs; `1` for `C^{N-1}Z`.
    pub global_phase: [f64; 2],
    pub phase_table_ok: bool,
    pub stats: SynthStats,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn bits_to_index(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| acc * 3 + b as u64)
}

fn bit_string(ds: &[u8]) -> String {
    ds.iter().map(|d| char::from(b'0' + d)).collect()
}

fn input_bits(x: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8).collect()
}

/// Output amplitudes of one basis input, as `(index, amplitude)` pairs.
type Output = Vec<(u64, C64)>;

struct Scored {
    error: f64,
    leakage: f64,
    top: (u64, C64),
}

fn score(out: &Output, n: usize, expected: u64, want: C64) -> Scored {
    let mut error: f64 = 0.0;
    let mut leakage: f64 = 0.0;
    let mut seen_expected = false;
    let mut top = (expected, ZERO);
    for &(idx, amp) in out {
        if idx == expected {
            seen_expected = true;
            error = error.max((amp - want).norm());
        } else {
            error = error.max(amp.norm());
        }
        if has_ancilla_digit(idx, n) {
            leakage = leakage.max(amp.norm());
        }
        if amp.norm() > top.1.norm() {
            top = (idx, amp);
        }
    }
    if !seen_expected {
        error = error.max(want.norm());
    }
    Scored { error, leakage, top }
}

/// Sweeps all `2^N` qubit-level basis inputs of `circuit` and compares each
/// output with the ideal gate.
///
/// Permutation-with-phase circuits run on the basis-path backend, anything
/// else on the sparse backend; registers of at most
/// [`DENSE_CROSS_CHECK_MAX`] qutrits are also run densely and the worse of the
/// two errors is reported. `C^{N-1}X` is compared up to the phase observed on
/// the all-zeros input.
pub fn verify_circuit(circuit: &Circuit, tolerance: f64) -> VerifyReport {
    let n = circuit.n;
    let runner = BasisRunner::new(circuit);
    let permutation = runner.is_permutation_circuit();
    let dense = n <= DENSE_CROSS_CHECK_MAX;

    let simulate = |input: u64| -> Output {
        if permutation {
            let path = runner.run(input).expect("permutation circuit");
            vec![(path.index, path.phase)]
        } else {
            let mut s = SparseState::basis(n, input);
            s.run(circuit).expect("circuit targets validated on construction");
            s.iter().collect()
        }
    };
    let simulate_dense = |input: u64| -> Output {
        let mut s = QutritState::basis(n, input);
        s.run(circuit).expect("circuit targets validated on construction");
        s.amps()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, &z)| (i as u64, z))
            .collect()
    };

    let global = match circuit.kind {
        CircuitKind::Cnz => ONE,
        CircuitKind::Cnx { .. } => {
            let zeros = vec![0u8; n];
            let (exp_bits, _) = ideal_phase(circuit.kind, &zeros);
            let out = simulate(0);
            let amp = out
                .iter()
                .find(|(i, _)| *i == bits_to_index(&exp_bits))
                .map_or(ZERO, |&(_, z)| z);
            if (amp.norm() - 1.0).abs() < 1e-6 {
                amp / amp.norm()
            } else {
                ONE
            }
        }
    };

    let inputs = 1usize << n;
    let results: Vec<(f64, f64, Option<Violation>)> = (0..inputs)
        .into_par_iter()
        .map(|x| {
            let bits = input_bits(x, n);
            let (exp_bits, sign) = ideal_phase(circuit.kind, &bits);
            let expected = bits_to_index(&exp_bits);
            let want = global * sign;
            let input = bits_to_index(&bits);
            let mut s = score(&simulate(input), n, expected, want);
            if dense {
                let d = score(&simulate_dense(input), n, expected, want);
                s.error = s.error.max(d.error);
                s.leakage = s.leakage.max(d.leakage);
            }
            let violation = (s.error >= tolerance || s.leakage >= tolerance).then(|| Violation {
                input: bit_string(&bits),
                expected: bit_string(&exp_bits),
                expected_amplitude: [want.re, want.im],
                got: bit_string(&digits(s.top.0, n)),
                got_amplitude: [s.top.1.re, s.top.1.im],
                error: s.error,
                leakage: s.leakage,
            });
            (s.error, s.leakage, violation)
        })
        .collect();

    let max_amplitude_error = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_leakage = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let violations: Vec<Violation> = results.into_iter().filter_map(|r| r.2).collect();
    VerifyReport {
        n,
        kind: match circuit.kind {
            CircuitKind::Cnz => "cnz".into(),
            CircuitKind::Cnx { .. } => "cnx".into(),
        },
        target: match circuit.kind {
            CircuitKind::Cnz => None,
            CircuitKind::Cnx { target } => Some(target),
        },
        tolerance,
        inputs_checked: inputs,
        backend: if permutation { "basis" } else { "sparse" },
        dense_cross_check: dense,
        max_amplitude_error,
        max_leakage,
        global_phase: [global.re, global.im],
        phase_table_ok: violations.is_empty() && max_amplitude_error < tolerance && max_leakage < tolerance,
        stats: circuit.stats(),
        violations,
    }
}

/// Outcome of one random-map trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimRow {
    pub n: usize,
    pub trial: usize,
    pub two_qutrit_count: usize,
    pub count_ok: bool,
    /// Qutrits used beyond the `N` operands.
    pub extra_qutrits: usize,
    pub correct: bool,
    pub max_leakage: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimsSummary {
    pub rows: Vec<ClaimRow>,
    pub all_pass: bool,
}

/// Synthesizes `C^{N-1}Z` on `trials` random connected maps for every `N`
/// in `n_range` and checks gate count `2N-3`, no extra qutrits, the phase
/// table, and leakage.
pub fn verify_claims<R: Rng + ?Sized>(n_range: RangeInclusive<usize>, trials: usize, rng: &mut R) -> ClaimsSummary {
    let mut rows = Vec::new();
    for n in n_range {
        for trial in 0..trials {
            let map = CouplingMap::random(n, 0.25, rng);
            let nodes: Vec<usize> = (0..n).collect();
            let circuit = synthesize(&map, &nodes, None, Target::Cnz).expect("random map is connected");
            let report = verify_circuit(&circuit, DEFAULT_TOLERANCE);
            let count = report.stats.two_qutrit_count;
            let count_ok = count + 3 == 2 * n;
            let extra_qutrits = circuit.n - n;
            rows.push(ClaimRow {
                n,
                trial,
                two_qutrit_count: count,
                count_ok,
                extra_qutrits,
                correct: report.phase_table_ok,
                max_leakage: report.max_leakage,
                pass: count_ok && extra_qutrits == 0 && report.phase_table_ok,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    ClaimsSummary { rows, all_pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::synth_cnz;
    use crate::topology::{min_height_tree, RootedTree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ideal_table_examples() {
        assert_eq!(ideal_phase(CircuitKind::Cnz, &[1, 1, 1]), (vec![1, 1, 1], -1.0));
        assert_eq!(ideal_phase(CircuitKind::Cnz, &[1, 0, 1]), (vec![1, 0, 1], 1.0));
        assert_eq!(
            ideal_phase(CircuitKind::Cnx { target: 2 }, &[1, 1, 0]),
            (vec![1, 1, 1], 1.0)
        );
        assert_eq!(
            ideal_phase(CircuitKind::Cnx { target: 2 }, &[0, 1, 1]),
            (vec![0, 1, 1], 1.0)
        );
    }

    #[test]
    fn cnz_oracle_is_label_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..8 {
            for x in 0..(1usize << n) {
                let bits = input_bits(x, n);
                let mut perm = bits.clone();
                rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
                assert_eq!(
                    ideal_phase(CircuitKind::Cnz, &bits).1,
                    ideal_phase(CircuitKind::Cnz, &perm).1
                );
            }
        }
    }

    #[test]
    fn path3_passes() {
        let map = CouplingMap::path(3);
        let c = synthesize(&map, &[0, 1, 2], None, Target::Cnz).unwrap();
        let r = verify_circuit(&c, DEFAULT_TOLERANCE);
        assert!(r.phase_table_ok, "{r:?}");
        assert!(r.max_leakage < 1e-10);
        assert_eq!(r.inputs_checked, 8);
        assert_eq!(r.backend, "basis");
    }

    #[test]
    fn dropping_final_unfold_fails_with_leakage() {
        let map = CouplingMap::path(4);
        let tree = min_height_tree(&map, &[0, 1, 2, 3], None).unwrap();
        let c = synth_cnz(&tree, &map).unwrap();
        let broken = c.without_op(c.ops.len() - 1);
        let r = verify_circuit(&broken, DEFAULT_TOLERANCE);
        assert!(!r.phase_table_ok);
        assert!(r.max_leakage > 0.5);
        assert!(!r.violations.is_empty());
    }

    #[test]
    fn report_is_deterministic() {
        let map = CouplingMap::star(5);
        let tree = RootedTree::from_edges(5, 0, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let c = synth_cnz(&tree, &map).unwrap();
        let a = verify_circuit(&c.without_op(2), DEFAULT_TOLERANCE);
        let b = verify_circuit(&c.without_op(2), DEFAULT_TOLERANCE);
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn claims_small_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = verify_claims(2..=5, 3, &mut rng);
        assert_eq!(s.rows.len(), 12);
        assert!(s.all_pass, "{s:?}");
    }

    #[test]
    fn star3_count() {
        let c = synthesize(&CouplingMap::star(3), &[0, 1, 2], None, Target::Cnz).unwrap();
        assert_eq!(c.stats().two_qutrit_count, 3);
    }
}
