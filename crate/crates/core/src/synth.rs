//! Tree-folding decomposition of `C^{N-1}Z` and `C^{N-1}X` into `2N-3`
//! two-qutrit gates.
//!
//! 1. Folding: for every internal non-root node `s`, deepest level first,
//!    apply `U_{s -> s|l}` to each child in turn. Afterwards `s` is `|1>`
//!    iff its whole subtree was all ones.
//! 2. Basic operation: collapse all but the last root child into the root,
//!    `CZ` the root with the last child, and undo the collapses.
//! 3. Unfolding: the daggers of step 1 in reverse order.

use std::f64::consts::FRAC_PI_4;

use crate::circuit::{Circuit, CircuitKind};
use crate::error::{Error, Result};
use crate::gates::{Core, Gate, Rotation};
use crate::topology::{min_height_tree, CouplingMap, RootedTree};

/// One `U_{parent -> child}` application in device indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collapse {
    pub parent: usize,
    pub child: usize,
    pub core: Core,
}

/// Which generalized gate to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Cnz,
    /// `C^{N-1}X` flipping the given device qutrit.
    Cnx(usize),
}

fn check_tree(tree: &RootedTree, map: &CouplingMap) -> Result<()> {
    if tree.len() < 2 {
        return Err(Error::invalid("nodes", "need at least two qutrits"));
    }
    if tree.nodes().last().is_some_and(|&q| q >= map.n()) {
        return Err(Error::invalid("tree", "node outside the coupling map"));
    }
    for (p, c) in tree.edges() {
        if !map.has_edge(p, c) {
            return Err(Error::MissingEdge { a: p, b: c });
        }
    }
    Ok(())
}

/// Collapses of the folding stage, in emission order.
pub fn fold_sequence(tree: &RootedTree, map: &CouplingMap) -> Result<Vec<Collapse>> {
    let mut parents: Vec<usize> = tree
        .preorder()
        .into_iter()
        .filter(|&q| q != tree.root() && !tree.children(q).is_empty())
        .collect();
    // stable: same-depth parents stay in address order
    parents.sort_by_key(|&q| std::cmp::Reverse(tree.depth(q)));
    let mut out = Vec::new();
    for s in parents {
        for &c in tree.children(s) {
            out.push(Collapse {
                parent: s,
                child: c,
                core: map.edge_variant(s, c)?,
            });
        }
    }
    Ok(out)
}

struct Emitter {
    circuit: Circuit,
}

impl Emitter {
    fn local(&self, q: usize) -> usize {
        self.circuit.layout.binary_search(&q).expect("tree node in layout")
    }

    fn push(&mut self, gate: Gate, device: &[usize]) {
        let local: Vec<usize> = device.iter().map(|&q| self.local(q)).collect();
        self.circuit.push(gate, &local).expect("tree nodes are distinct");
    }

    fn collapse(&mut self, c: &Collapse) {
        self.push(Gate::U(c.core), &[c.parent, c.child]);
    }

    fn uncollapse(&mut self, c: &Collapse) {
        self.push(Gate::Udg(c.core), &[c.parent, c.child]);
    }
}

fn emit_cnz(tree: &RootedTree, map: &CouplingMap, kind: CircuitKind, target: Option<usize>) -> Result<Circuit> {
    check_tree(tree, map)?;
    let fold = fold_sequence(tree, map)?;
    let root = tree.root();
    let kids = tree.children(root);
    let (&last, rest) = kids.split_last().expect("root of a 2+ node tree has a child");
    let basic: Vec<Collapse> = rest
        .iter()
        .map(|&c| {
            Ok(Collapse {
                parent: root,
                child: c,
                core: map.edge_variant(root, c)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut circuit = Circuit::new(tree.len(), kind);
    circuit.layout = tree.nodes().to_vec();
    circuit.tree = Some(tree.info());
    let mut em = Emitter { circuit };

    if let Some(t) = target {
        em.push(Gate::Rot(Rotation::R01y, -FRAC_PI_4), &[t]);
    }
    fold.iter().for_each(|c| em.collapse(c));
    basic.iter().for_each(|c| em.collapse(c));
    em.push(Gate::Cz, &[root, last]);
    basic.iter().rev().for_each(|c| em.uncollapse(c));
    fold.iter().rev().for_each(|c| em.uncollapse(c));
    if let Some(t) = target {
        em.push(Gate::Rot(Rotation::R01y, FRAC_PI_4), &[t]);
    }
    em.circuit.schedule();
    Ok(em.circuit)
}

/// `C^{N-1}Z` over the nodes of `tree`.
pub fn synth_cnz(tree: &RootedTree, map: &CouplingMap) -> Result<Circuit> {
    emit_cnz(tree, map, CircuitKind::Cnz, None)
}

/// `C^{N-1}X` flipping device qutrit `target`: the `C^{N-1}Z` circuit
/// between `R01y(-pi/4)` and `R01y(pi/4)` on the target, which conjugate `Z`
/// into `X` on the qubit levels with no extra phase.
pub fn synth_cnx(tree: &RootedTree, map: &CouplingMap, target: usize) -> Result<Circuit> {
    if !tree.contains(target) {
        return Err(Error::invalid("target", format!("{target} is not a tree node")));
    }
    let local = tree.nodes().binary_search(&target).expect("member");
    emit_cnz(tree, map, CircuitKind::Cnx { target: local }, Some(target))
}

/// Picks a minimum-height tree over `nodes` and synthesizes `what` on it.
pub fn synthesize(map: &CouplingMap, nodes: &[usize], root: Option<usize>, what: Target) -> Result<Circuit> {
    let tree = min_height_tree(map, nodes, root)?;
    match what {
        Target::Cnz => synth_cnz(&tree, map),
        Target::Cnx(t) => synth_cnx(&tree, map, t),
    }
}
