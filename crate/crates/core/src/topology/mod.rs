//! Coupling maps, minimum-height spanning trees, and tree addressing.

mod map;
mod tree;

pub use map::{CouplingMap, Edge, Host2};
pub use tree::{eccentricities, min_height_tree, Address, RootedTree};

use crate::error::Result;
use crate::gates::Core;

/// Core used for `U_{parent -> child}` on a coupling edge.
pub fn edge_variant(map: &CouplingMap, parent: usize, child: usize) -> Result<Core> {
    map.edge_variant(parent, child)
}
