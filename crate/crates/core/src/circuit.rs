//! Circuits over a register of qutrits, their layer schedule, gate counts,
//! and the JSON circuit file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::check_targets;

/// A gate bound to register qutrits. For `U` gates `targets = [parent, child]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOp {
    pub gate: Gate,
    pub targets: Vec<usize>,
    pub layer: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitKind {
    /// `C^{N-1}Z`.
    Cnz,
    /// `C^{N-1}X` flipping the register qutrit `target`.
    Cnx { target: usize },
}

/// The spanning tree a circuit was synthesized from, in device indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeInfo {
    pub root: usize,
    pub height: usize,
    /// `[parent, child]` pairs.
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthStats {
    pub two_qutrit_count: usize,
    pub iswap_count: usize,
    pub cz_count: usize,
    /// Two-qutrit count with each `CZ` lowered to two iSWAPs.
    pub native_iswap_equivalent: usize,
    pub depth_layers: usize,
    pub tree_height: usize,
}

/// An ordered, layer-scheduled gate sequence over `n` qutrits.
///
/// Register qutrit `k` sits on device qutrit `layout[k]`; `layout` is
/// ascending, so ket order follows device order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub kind: CircuitKind,
    pub layout: Vec<usize>,
    pub ops: Vec<CircuitOp>,
    pub tree: Option<TreeInfo>,
}

impl Circuit {
    pub fn new(n: usize, kind: CircuitKind) -> Self {
        Circuit {
            n,
            kind,
            layout: (0..n).collect(),
            ops: Vec::new(),
            tree: None,
        }
    }

    /// Appends a gate; the layer is fixed up by [`Circuit::schedule`].
    pub fn push(&mut self, gate: Gate, targets: &[usize]) -> Result<()> {
        check_targets(targets, self.n)?;
        if targets.len() != gate.arity() {
            return Err(Error::InvalidTargets {
                targets: targets.to_vec(),
                n: self.n,
                reason: "arity mismatch",
            });
        }
        self.ops.push(CircuitOp {
            gate,
            targets: targets.to_vec(),
            layer: 0,
        });
        Ok(())
    }

    pub fn schedule(&mut self) {
        schedule(&mut self.ops, self.n);
    }

    pub fn stats(&self) -> SynthStats {
        stats_of(self)
    }

    /// Copy without the op at `index`, rescheduled.
    pub fn without_op(&self, index: usize) -> Circuit {
        let mut c = self.clone();
        c.ops.remove(index);
        c.schedule();
        c
    }

    pub fn to_json(&self) -> String {
        let file = CircuitFile {
            n: self.n,
            kind: match self.kind {
                CircuitKind::Cnz => "cnz".into(),
                CircuitKind::Cnx { .. } => "cnx".into(),
            },
            target: match self.kind {
                CircuitKind::Cnz => None,
                CircuitKind::Cnx { target } => Some(target),
            },
            layout: self.layout.clone(),
            tree: self.tree.clone(),
            ops: self
                .ops
                .iter()
                .map(|op| OpRecord {
                    gate: op.gate.name(),
                    targets: op.targets.clone(),
                    params: op.gate.params(),
                    layer: op.layer,
                })
                .collect(),
            stats: self.stats(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("circuit serializes");
        s.push('\n');
        s
    }

    /// Parses and validates a circuit file. Layers are recomputed from the
    /// op order; the stored `layer` and `stats` fields are informational.
    pub fn from_json(text: &str) -> Result<Circuit> {
        let file: CircuitFile = serde_json::from_str(text)?;
        if file.n == 0 {
            return Err(Error::invalid("n", "register must hold at least one qutrit"));
        }
        if file.layout.len() != file.n {
            return Err(Error::invalid(
                "layout",
                format!("expected {} entries, got {}", file.n, file.layout.len()),
            ));
        }
        let kind = match (file.kind.as_str(), file.target) {
            ("cnz", None) => CircuitKind::Cnz,
            ("cnx", Some(t)) if t < file.n => CircuitKind::Cnx { target: t },
            ("cnx", Some(t)) => return Err(Error::invalid("target", format!("{t} out of range"))),
            ("cnx", None) => return Err(Error::invalid("target", "required for cnx")),
            ("cnz", Some(_)) => return Err(Error::invalid("target", "only valid for cnx")),
            (other, _) => return Err(Error::invalid("kind", format!("unknown kind `{other}`"))),
        };
        let mut circuit = Circuit {
            n: file.n,
            kind,
            layout: file.layout,
            ops: Vec::with_capacity(file.ops.len()),
            tree: file.tree,
        };
        for (i, rec) in file.ops.iter().enumerate() {
            let gate = Gate::from_parts(&rec.gate, &rec.params)
                .map_err(|e| Error::invalid(format!("ops[{i}].gate"), e.to_string()))?;
            circuit
                .push(gate, &rec.targets)
                .map_err(|e| Error::invalid(format!("ops[{i}].targets"), e.to_string()))?;
        }
        circuit.schedule();
        Ok(circuit)
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    n: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
    layout: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tree: Option<TreeInfo>,
    ops: Vec<OpRecord>,
    #[serde(default)]
    stats: SynthStats,
}

#[derive(Serialize, Deserialize)]
struct OpRecord {
    gate: String,
    targets: Vec<usize>,
    #[serde(default)]
    params: Vec<f64>,
    #[serde(default)]
    layer: usize,
}

/// Greedy as-soon-as-possible layering: each op goes one layer past the last
/// op touching any of its qutrits.
pub fn schedule(ops: &mut [CircuitOp], n: usize) {
    let mut next_free = vec![0usize; n];
    for op in ops.iter_mut() {
        let layer = op.targets.iter().map(|&q| next_free[q]).max().unwrap_or(0);
        op.layer = layer;
        for &q in &op.targets {
            next_free[q] = layer + 1;
        }
    }
}

/// Number of distinct layers holding at least one two-qutrit op.
pub fn depth_layers(ops: &[CircuitOp]) -> usize {
    let mut layers: Vec<usize> = ops
        .iter()
        .filter(|op| op.gate.is_two_qutrit())
        .map(|op| op.layer)
        .collect();
    layers.sort_unstable();
    layers.dedup();
    layers.len()
}

pub fn stats_of(circuit: &Circuit) -> SynthStats {
    let iswap_count = circuit.ops.iter().filter(|op| op.gate.is_iswap_cored()).count();
    let cz_count = circuit.ops.iter().filter(|op| op.gate == Gate::Cz).count();
    SynthStats {
        two_qutrit_count: circuit.ops.iter().filter(|op| op.gate.is_two_qutrit()).count(),
        iswap_count,
        cz_count,
        native_iswap_equivalent: iswap_count + 2 * cz_count,
        depth_layers: depth_layers(&circuit.ops),
        tree_height: circuit.tree.as_ref().map_or(0, |t| t.height),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{Core, Rotation};

    #[test]
    fn disjoint_ops_share_a_layer() {
        let mut c = Circuit::new(4, CircuitKind::Cnz);
        c.push(Gate::U(Core::Iswap02), &[0, 1]).unwrap();
        c.push(Gate::U(Core::Iswap02), &[2, 3]).unwrap();
        c.schedule();
        assert_eq!(c.ops[0].layer, c.ops[1].layer);
        assert_eq!(c.stats().depth_layers, 1);
    }

    #[test]
    fn shared_qutrit_forces_next_layer() {
        let mut c = Circuit::new(3, CircuitKind::Cnz);
        c.push(Gate::U(Core::Iswap02), &[0, 1]).unwrap();
        c.push(Gate::Cz, &[1, 2]).unwrap();
        c.schedule();
        assert_eq!((c.ops[0].layer, c.ops[1].layer), (0, 1));
    }

    #[test]
    fn single_qutrit_layers_do_not_count_toward_depth() {
        let mut c = Circuit::new(2, CircuitKind::Cnx { target: 1 });
        c.push(Gate::Rot(Rotation::R01y, -0.5), &[1]).unwrap();
        c.push(Gate::Cz, &[0, 1]).unwrap();
        c.push(Gate::Rot(Rotation::R01y, 0.5), &[1]).unwrap();
        c.schedule();
        let layers: Vec<usize> = c.ops.iter().map(|o| o.layer).collect();
        assert_eq!(layers, vec![0, 1, 2]);
        assert_eq!(c.stats().depth_layers, 1);
    }

    #[test]
    fn stats_counts() {
        assert_eq!(Circuit::new(3, CircuitKind::Cnz).stats(), SynthStats::default());
        let mut c = Circuit::new(2, CircuitKind::Cnz);
        c.push(Gate::Cz, &[0, 1]).unwrap();
        c.schedule();
        let s = c.stats();
        assert_eq!((s.two_qutrit_count, s.iswap_count, s.cz_count), (1, 0, 1));
        assert_eq!(s.native_iswap_equivalent, 2);
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2, CircuitKind::Cnz);
        assert!(c.push(Gate::Cz, &[0]).is_err());
        assert!(c.push(Gate::Cz, &[1, 1]).is_err());
        assert!(c.push(Gate::X01, &[2]).is_err());
    }

    #[test]
    fn json_roundtrip_is_stable() {
        let mut c = Circuit::new(3, CircuitKind::Cnx { target: 2 });
        c.layout = vec![4, 7, 9];
        c.push(Gate::Rot(Rotation::R01y, -std::f64::consts::FRAC_PI_4), &[2])
            .unwrap();
        c.push(Gate::U(Core::Iswap20), &[1, 0]).unwrap();
        c.push(Gate::Ph([0.1, 0.2, 0.3]), &[0]).unwrap();
        c.schedule();
        let text = c.to_json();
        let back = Circuit::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_errors_name_the_field() {
        let bad = r#"{"n":2,"kind":"cnz","layout":[0,1],"ops":[{"gate":"cz","targets":[0,5]}]}"#;
        let err = Circuit::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("ops[0].targets"), "{err}");
        let bad = r#"{"n":2,"kind":"cnx","layout":[0,1],"ops":[]}"#;
        assert!(Circuit::from_json(bad).unwrap_err().to_string().contains("target"));
        let bad = r#"{"n":2,"kind":"cnz","layout":[0,1],"ops":[{"gate":"foo","targets":[0]}]}"#;
        assert!(Circuit::from_json(bad).unwrap_err().to_string().contains("ops[0].gate"));
    }
}
