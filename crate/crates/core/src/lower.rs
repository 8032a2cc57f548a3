//! Lowering passes from the logical gate set towards hardware-native gates.
//!
//! [`to_native`] rewrites `U`, `U^dagger` and `CZ` into level permutations
//! around a single native iSWAP (two for `CZ`). [`to_rotations`] rewrites the
//! level permutations into Gell-Mann rotations followed by virtual phase
//! gates. Both passes preserve the circuit unitary exactly on every input
//! the synthesized circuits produce.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gates::{Core, Gate, Rotation};
use crate::topology::CouplingMap;

fn rebuild(
    circuit: &Circuit,
    mut expand: impl FnMut(&Gate, &[usize], &mut Vec<(Gate, Vec<usize>)>) -> Result<()>,
) -> Result<Circuit> {
    let mut out = circuit.clone();
    out.ops.clear();
    let mut buf = Vec::new();
    for op in &circuit.ops {
        buf.clear();
        expand(&op.gate, &op.targets, &mut buf)?;
        for (g, t) in buf.drain(..) {
            out.push(g, &t)?;
        }
    }
    out.schedule();
    Ok(out)
}

/// Native-iSWAP form of a circuit.
///
/// A `CZ` becomes two `iSWAP(0)` on its edge; with a map the variant follows
/// the edge's `host2` (first target excited for the `20` variant), otherwise
/// `iSWAP^02` is used. The pair agrees with `CZ` on qubit-level operands
/// only, which is all the synthesized circuits ever feed it.
pub fn to_native(circuit: &Circuit, map: Option<&CouplingMap>) -> Result<Circuit> {
    rebuild(circuit, |gate, t, out| {
        match *gate {
            Gate::U(core) => {
                let (p, c) = (t[0], t[1]);
                out.push((Gate::X01, vec![c]));
                match core {
                    Core::Iswap02 => out.push((Gate::Iswap(Core::Iswap02, 0.0), vec![p, c])),
                    Core::Iswap20 => {
                        out.push((Gate::X02, vec![p]));
                        out.push((Gate::X02, vec![c]));
                        out.push((Gate::Iswap(Core::Iswap20, 0.0), vec![p, c]));
                        out.push((Gate::X02, vec![p]));
                        out.push((Gate::X02, vec![c]));
                    }
                }
            }
            Gate::Udg(core) => {
                let (p, c) = (t[0], t[1]);
                match core {
                    Core::Iswap02 => out.push((Gate::Iswap(Core::Iswap02, -PI), vec![p, c])),
                    Core::Iswap20 => {
                        out.push((Gate::X02, vec![p]));
                        out.push((Gate::X02, vec![c]));
                        out.push((Gate::Iswap(Core::Iswap20, -PI), vec![p, c]));
                        out.push((Gate::X02, vec![p]));
                        out.push((Gate::X02, vec![c]));
                    }
                }
                out.push((Gate::X01, vec![c]));
            }
            Gate::Cz => {
                let core = match map {
                    Some(m) => m.edge_variant(circuit.layout[t[0]], circuit.layout[t[1]])?,
                    None => Core::Iswap02,
                };
                out.push((Gate::Iswap(core, 0.0), t.to_vec()));
                out.push((Gate::Iswap(core, 0.0), t.to_vec()));
            }
            g => out.push((g, t.to_vec())),
        }
        Ok(())
    })
}

/// Replaces `X01`, `X12`, `X02` by a rotation plus a virtual `Ph` gate:
/// `X01 = Ph(pi/2, pi/2, 0) R01x(pi/2)`, `X12 = Ph(0, pi/2, pi/2) R12x(pi/2)`,
/// `X02 = Ph(0, 0, pi) R02x(pi)`.
pub fn to_rotations(circuit: &Circuit) -> Result<Circuit> {
    rebuild(circuit, |gate, t, out| {
        let (rot, ph) = match gate {
            Gate::X01 => (Gate::Rot(Rotation::R01x, FRAC_PI_2), [FRAC_PI_2, FRAC_PI_2, 0.0]),
            Gate::X12 => (Gate::Rot(Rotation::R12x, FRAC_PI_2), [0.0, FRAC_PI_2, FRAC_PI_2]),
            Gate::X02 => (Gate::Rot(Rotation::R02x, PI), [0.0, 0.0, PI]),
            g => {
                out.push((*g, t.to_vec()));
                return Ok(());
            }
        };
        out.push((rot, t.to_vec()));
        out.push((Gate::Ph(ph), t.to_vec()));
        Ok(())
    })
}
