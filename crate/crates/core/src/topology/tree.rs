use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::map::CouplingMap;
use crate::circuit::TreeInfo;
use crate::error::{Error, Result};

/// Position of a node in a rooted tree: the root is `1`, the `l`-th child
/// of node `s` is `s|l`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn root() -> Self {
        Address(vec![1])
    }

    pub fn child(&self, l: usize) -> Self {
        let mut v = self.0.clone();
        v.push(l);
        Address(v)
    }

    /// Edges from the root.
    pub fn depth(&self) -> usize {
        self.0.len() - 1
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

/// Rooted spanning tree over a subset of a coupling map's qutrits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    nodes: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    member: Vec<bool>,
}

impl RootedTree {
    /// Builds a tree over qutrits `0..n` from `(parent, child)` pairs.
    /// Children keep the order in which they appear in `edges`.
    pub fn from_edges(n: usize, root: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if root >= n {
            return Err(Error::invalid("root", format!("{root} out of range 0..{n}")));
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut member = vec![false; n];
        member[root] = true;
        for (i, &(p, c)) in edges.iter().enumerate() {
            if p >= n || c >= n {
                return Err(Error::invalid(format!("edges[{i}]"), "qutrit out of range"));
            }
            if c == root || parent[c].is_some() {
                return Err(Error::invalid(format!("edges[{i}]"), format!("{c} has two parents")));
            }
            parent[c] = Some(p);
            children[p].push(c);
            member[p] = true;
            member[c] = true;
        }
        let tree = RootedTree {
            root,
            nodes: (0..n).filter(|&q| member[q]).collect(),
            parent,
            children,
            member,
        };
        // every member must be reachable from the root
        if tree.preorder().len() != tree.nodes.len() {
            return Err(Error::invalid("edges", "not a tree hanging from the root"));
        }
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Member qutrits in ascending order.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.member.get(q).copied().unwrap_or(false)
    }

    pub fn parent(&self, q: usize) -> Option<usize> {
        self.parent[q]
    }

    pub fn children(&self, q: usize) -> &[usize] {
        &self.children[q]
    }

    /// Nodes in depth-first pre-order, i.e. ascending address.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(q) = stack.pop() {
            out.push(q);
            stack.extend(self.children[q].iter().rev());
        }
        out
    }

    pub fn address(&self, q: usize) -> Option<Address> {
        if !self.contains(q) {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = q;
        while let Some(p) = self.parent[cur] {
            let l = self.children[p].iter().position(|&c| c == cur).expect("child listed") + 1;
            path.push(l);
            cur = p;
        }
        path.push(1);
        path.reverse();
        Some(Address(path))
    }

    pub fn depth(&self, q: usize) -> usize {
        let mut d = 0;
        let mut cur = q;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Largest root-to-node edge count.
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|&q| self.depth(q)).max().unwrap_or(0)
    }

    /// `(parent, child)` pairs in pre-order of the child.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.preorder()
            .into_iter()
            .filter_map(|c| self.parent[c].map(|p| (p, c)))
            .collect()
    }

    /// Replaces the child order of `q`; `order` must be a permutation of the
    /// current children.
    pub fn reorder_children(&mut self, q: usize, order: Vec<usize>) -> Result<()> {
        let mut a = order.clone();
        let mut b = self.children[q].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::invalid(
                "order",
                format!("not a permutation of the children of {q}"),
            ));
        }
        self.children[q] = order;
        Ok(())
    }

    pub fn shuffle_children<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for kids in &mut self.children {
            kids.shuffle(rng);
        }
    }

    pub fn info(&self) -> TreeInfo {
        TreeInfo {
            root: self.root,
            height: self.height(),
            edges: self.edges().into_iter().map(|(p, c)| [p, c]).collect(),
        }
    }

    /// DOT digraph with parent -> child edges, nodes labelled by address.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tree {\n");
        for q in self.preorder() {
            s.push_str(&format!("  q{q} [label=\"{}\"];\n", self.address(q).expect("member")));
        }
        for (p, c) in self.edges() {
            s.push_str(&format!("  q{p} -> q{c};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn check_subset(map: &CouplingMap, nodes: &[usize]) -> Result<Vec<usize>> {
    if nodes.is_empty() {
        return Err(Error::invalid("nodes", "empty selection"));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    if let Some(&q) = sorted.iter().find(|&&q| q >= map.n()) {
        return Err(Error::invalid("nodes", format!("{q} out of range 0..{}", map.n())));
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid("nodes", format!("{} listed twice", w[0])));
    }
    Ok(sorted)
}

/// BFS distances from `start` inside the subgraph induced by `member`.
fn bfs(map: &CouplingMap, member: &[bool], start: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut dist = vec![None; map.n()];
    let mut parent = vec![None; map.n()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        let d = dist[q].expect("queued nodes are reached");
        for &r in map.neighbors(q) {
            if member[r] && dist[r].is_none() {
                dist[r] = Some(d + 1);
                parent[r] = Some(q);
                queue.push_back(r);
            }
        }
    }
    (dist, parent)
}

/// Eccentricity of every selected node within the induced subgraph.
pub fn eccentricities(map: &CouplingMap, nodes: &[usize]) -> Result<Vec<(usize, usize)>> {
    let sorted = check_subset(map, nodes)?;
    let mut member = vec![false; map.n()];
    for &q in &sorted {
        member[q] = true;
    }
    sorted
        .iter()
        .map(|&q| {
            let (dist, _) = bfs(map, &member, q);
            sorted
                .iter()
                .map(|&r| dist[r].ok_or_else(|| Error::Disconnected(sorted.clone())))
                .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
                .map(|ecc| (q, ecc))
        })
        .collect()
}

/// Breadth-first spanning tree of the subgraph induced by `nodes`.
///
/// Without an explicit root the tree hangs from the smallest-index node of
/// minimum eccentricity, which minimizes the height over all spanning trees
/// of the subgraph. Children are listed in ascending qutrit order.
pub fn min_height_tree(map: &CouplingMap, nodes: &[usize], root: Option<usize>) -> Result<RootedTree> {
    let sorted = check_subset(map, nodes)?;
    let mut member = vec![false; map.n()];
    for &q in &sorted {
        member[q] = true;
    }
    if map.component_size(&sorted, sorted[0]) != sorted.len() {
        return Err(Error::Disconnected(sorted));
    }
    let root = match root {
        Some(r) if r < map.n() && member[r] => r,
        Some(r) => return Err(Error::invalid("root", format!("{r} is not a selected node"))),
        None => {
            eccentricities(map, &sorted)?
                .into_iter()
                .min_by_key(|&(q, ecc)| (ecc, q))
                .expect("non-empty selection")
                .0
        }
    };
    let (_, parent) = bfs(map, &member, root);
    let edges: Vec<(usize, usize)> = sorted.iter().filter_map(|&c| parent[c].map(|p| (p, c))).collect();
    if sorted.len() == 1 {
        return RootedTree::from_edges(map.n(), root, &[]);
    }
    RootedTree::from_edges(map.n(), root, &edges)
}
